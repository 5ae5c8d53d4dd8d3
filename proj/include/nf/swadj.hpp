#pragma once

// Formal Seiberg-Witten calculus: integer Laurent polynomials, symmetrized
// Alexander polynomials from Seifert matrices, the basic-class transformation
// rules for log transform and knot surgery, and adjunction-inequality checks.
// Basic classes are purely formal here; nothing solves any PDE. Class vectors
// are pairing coordinates against a fixed homology basis, so <K, v> is a dot
// product and PD-shifts are vector additions.

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nf/errors.hpp"
#include "nf/intlat.hpp"

namespace nf {

class LaurentPoly {
public:
    LaurentPoly() = default;
    explicit LaurentPoly(Int constant) {
        if (constant != 0)
            coeffs_[0] = std::move(constant);
    }

    static LaurentPoly monomial(long long exponent, Int coeff) {
        LaurentPoly p;
        if (coeff != 0)
            p.coeffs_[exponent] = std::move(coeff);
        return p;
    }

    const std::map<long long, Int>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    std::size_t term_count() const { return coeffs_.size(); }

    Int coeff(long long e) const {
        auto it = coeffs_.find(e);
        return it == coeffs_.end() ? Int(0) : it->second;
    }

    long long min_exp() const {
        require(!is_zero(), "ZeroPolynomial", "min_exp of zero polynomial");
        return coeffs_.begin()->first;
    }
    long long max_exp() const {
        require(!is_zero(), "ZeroPolynomial", "max_exp of zero polynomial");
        return coeffs_.rbegin()->first;
    }
    // Maximal degree: for the symmetric carrier this is the span radius.
    long long degree() const { return is_zero() ? 0 : max_exp(); }

    void add_term(long long e, const Int& c) {
        if (c == 0)
            return;
        Int& slot = coeffs_[e];
        slot += c;
        if (slot == 0)
            coeffs_.erase(e);
    }

    Int eval_at_one() const {
        Int s = 0;
        for (const auto& [e, c] : coeffs_)
            s += c;
        return s;
    }

    // Exact rational value at an integer point (exponents may be negative).
    Rational eval(const Int& t) const {
        require(t != 0, "BadArgument", "Laurent evaluation at 0");
        Rational s = 0;
        for (const auto& [e, c] : coeffs_) {
            Rational term(c);
            Int power = 1;
            for (long long k = 0; k < (e < 0 ? -e : e); ++k)
                power *= t;
            if (e >= 0)
                term *= Rational(power);
            else
                term /= Rational(power);
            s += term;
        }
        return s;
    }

    bool palindromic() const {
        for (const auto& [e, c] : coeffs_)
            if (coeff(-e) != c)
                return false;
        return true;
    }

    LaurentPoly shifted(long long by) const {
        LaurentPoly r;
        for (const auto& [e, c] : coeffs_)
            r.coeffs_[e + by] = c;
        return r;
    }

    LaurentPoly negated() const {
        LaurentPoly r;
        for (const auto& [e, c] : coeffs_)
            r.coeffs_[e] = -c;
        return r;
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r = a;
        for (const auto& [e, c] : b.coeffs_)
            r.add_term(e, c);
        return r;
    }

    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
        return a + b.negated();
    }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (const auto& [ea, ca] : a.coeffs_)
            for (const auto& [eb, cb] : b.coeffs_)
                r.add_term(ea + eb, ca * cb);
        return r;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.coeffs_ == b.coeffs_;
    }

    // Exact division; fails if the divisor does not divide evenly. For an
    // exact quotient every shift stays at or above num.min - den.min, which
    // also bounds the loop.
    friend LaurentPoly divide_exact(const LaurentPoly& num, const LaurentPoly& den) {
        require(!den.is_zero(), "DivisionByZero", "Laurent division by zero");
        if (num.is_zero())
            return num;
        LaurentPoly r = num, q;
        const long long de = den.max_exp();
        const long long lowest = num.min_exp() - den.min_exp();
        const Int& dc = den.coeffs_.rbegin()->second;
        while (!r.is_zero()) {
            long long re = r.max_exp();
            Int rc = r.coeff(re);
            require(rc % dc == 0, "InexactDivision", "leading coefficient does not divide");
            long long shift = re - de;
            require(shift >= lowest, "InexactDivision", "division leaves a remainder");
            Int f = rc / dc;
            q.add_term(shift, f);
            for (const auto& [e, c] : den.coeffs_)
                r.add_term(e + shift, -f * c);
        }
        return q;
    }

    std::string str() const {
        if (is_zero())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            const auto& [e, c] = *it;
            if (!first)
                os << (c > 0 ? " + " : " - ");
            else if (c < 0)
                os << "-";
            Int a = abs(c);
            if (a != 1 || e == 0)
                os << a.str();
            if (e != 0) {
                if (a != 1)
                    os << "*";
                os << "t";
                if (e != 1)
                    os << "^" << e;
            }
            first = false;
        }
        return os.str();
    }

private:
    std::map<long long, Int> coeffs_;  // exponent -> nonzero coefficient
};

// det(V - t V^T) by fraction-free Bareiss over the polynomial ring; all
// interior divisions are exact.
inline LaurentPoly alexander_raw(const IntMatrix& v) {
    require(v.is_square(), "NonSquare", "Seifert matrix must be square");
    const std::size_t n = v.rows;
    if (n == 0)
        return LaurentPoly(1);
    std::vector<std::vector<LaurentPoly>> a(n, std::vector<LaurentPoly>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a[i][j] = LaurentPoly(v.at(i, j)) + LaurentPoly::monomial(1, -v.at(j, i));
        }
    LaurentPoly prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k].is_zero()) {
            std::size_t piv = k + 1;
            while (piv < n && a[piv][k].is_zero())
                ++piv;
            if (piv == n)
                return LaurentPoly();
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = divide_exact(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev);
        prev = a[k][k];
    }
    return sign > 0 ? a[n - 1][n - 1] : a[n - 1][n - 1].negated();
}

// Symmetrized Alexander polynomial: multiply det(V - t V^T) by +-t^k so that
// Delta(t) = Delta(1/t), with Delta(1) = 1 whenever Delta(1) is a unit.
inline LaurentPoly alexander(const IntMatrix& v) {
    LaurentPoly p = alexander_raw(v);
    if (p.is_zero())
        return p;
    long long lo = p.min_exp(), hi = p.max_exp();
    require((lo + hi) % 2 == 0, "NotSymmetrizable",
            "det(V - tV^T) has odd exponent span; V is not a Seifert matrix");
    LaurentPoly d = p.shifted(-(lo + hi) / 2);
    Int at_one = d.eval_at_one();
    if (at_one < 0 || (at_one == 0 && d.coeff(d.max_exp()) < 0))
        d = d.negated();
    require(d.palindromic(), "NotSymmetrizable", "symmetrization failed");
    return d;
}

// t^{-(p-1)} + t^{-(p-3)} + ... + t^{p-1}: the SW multiplier of a p-log
// transform. p terms with unit coefficients.
inline LaurentPoly log_multiplier(long long p) {
    require(p >= 1, "BadCoefficient", "log multiplier needs p >= 1");
    LaurentPoly m;
    for (long long e = -(p - 1); e <= p - 1; e += 2)
        m.add_term(e, 1);
    return m;
}

// --- Knot specifications -------------------------------------------------

struct KnotSpec {
    enum class Family { unknot, torus2, twist, seifert };

    Family family = Family::unknot;
    long long parameter = 0;  // torus2: q = 2k+1; twist: k
    IntMatrix seifert;        // explicit matrix for Family::seifert

    static KnotSpec unknot() { return KnotSpec{}; }

    static KnotSpec torus(long long p, long long q) {
        require(p == 2 && q >= 3 && q % 2 == 1, "BadParameter",
                "only torus(2, 2k+1) knots are built in");
        KnotSpec k;
        k.family = Family::torus2;
        k.parameter = q;
        return k;
    }

    static KnotSpec twist(long long n) {
        require(n >= 1, "BadParameter", "twist knot needs k >= 1");
        KnotSpec k;
        k.family = Family::twist;
        k.parameter = n;
        return k;
    }

    static KnotSpec from_seifert(IntMatrix v) {
        require(v.is_square(), "NonSquare", "Seifert matrix must be square");
        KnotSpec k;
        k.family = Family::seifert;
        k.seifert = std::move(v);
        return k;
    }

    IntMatrix seifert_matrix() const {
        switch (family) {
            case Family::unknot:
                return IntMatrix(0, 0);
            case Family::torus2: {
                const std::size_t n = static_cast<std::size_t>(parameter - 1);  // 2k
                IntMatrix v(n, n);
                for (std::size_t i = 0; i < n; ++i) {
                    v.at(i, i) = -1;
                    if (i + 1 < n)
                        v.at(i, i + 1) = 1;
                }
                return v;
            }
            case Family::twist: {
                IntMatrix v(2, 2);
                v.at(0, 0) = -1;
                v.at(0, 1) = 1;
                v.at(1, 1) = parameter;
                return v;
            }
            case Family::seifert:
                return seifert;
        }
        fail("BadParameter", "unreachable knot family");
    }

    LaurentPoly delta() const { return alexander(seifert_matrix()); }

    long long seifert_genus() const { return static_cast<long long>(seifert_matrix().rows / 2); }

    std::string name() const {
        switch (family) {
            case Family::unknot: return "unknot";
            case Family::torus2: return "torus(2," + std::to_string(parameter) + ")";
            case Family::twist: return "twist(" + std::to_string(parameter) + ")";
            case Family::seifert: return "seifert[" + std::to_string(seifert.rows) + "]";
        }
        return "?";
    }
};

// --- Formal basic classes -------------------------------------------------

struct BasicClassSet {
    std::size_t rank = 0;                          // ambient coordinate count
    std::vector<std::pair<std::vector<Int>, Int>> classes;  // (pairing vector, coeff)

    void canonicalize() {
        std::map<std::vector<Int>, Int> merged;
        for (auto& [v, c] : classes)
            merged[v] += c;
        classes.clear();
        for (auto& [v, c] : merged)
            if (c != 0)
                classes.emplace_back(v, c);
    }

    bool empty() const { return classes.empty(); }

    friend bool operator==(const BasicClassSet& a, const BasicClassSet& b) {
        return a.rank == b.rank && a.classes == b.classes;
    }
};

inline BasicClassSet make_basic_set(std::size_t rank,
                                    std::vector<std::pair<std::vector<Int>, Int>> classes) {
    BasicClassSet s;
    s.rank = rank;
    s.classes = std::move(classes);
    for (const auto& [v, c] : s.classes)
        require(v.size() == rank, "DimensionMismatch", "basic class vector length");
    s.canonicalize();
    return s;
}

// Shared expansion: each class K becomes {K + e * shift : (e, c_e) in poly},
// coefficients multiplied, collisions summed exactly, zero sums dropped.
inline BasicClassSet convolve_basic_set(const BasicClassSet& sw, const LaurentPoly& poly,
                                        const std::vector<Int>& shift) {
    require(shift.size() == sw.rank, "DimensionMismatch", "shift vector length");
    bool nonzero = false;
    for (const Int& x : shift)
        if (x != 0)
            nonzero = true;
    require(nonzero, "TorsionClass", "shift class is zero in the free quotient");

    BasicClassSet out;
    out.rank = sw.rank;
    for (const auto& [k, c] : sw.classes)
        for (const auto& [e, a] : poly.coeffs()) {
            std::vector<Int> v = k;
            for (std::size_t i = 0; i < v.size(); ++i)
                v[i] += e * shift[i];
            out.classes.emplace_back(std::move(v), c * a);
        }
    out.canonicalize();
    return out;
}

// SW_{X_(p)} = SW_X * (t^{-(p-1)} + ... + t^{p-1}), t = exp(PD([T_p])).
inline BasicClassSet sw_log_transform(const BasicClassSet& sw, const std::vector<Int>& t_p,
                                      long long p) {
    require(p >= 1, "BadCoefficient", "log transform needs p >= 1");
    if (p == 1)
        return sw;
    return convolve_basic_set(sw, log_multiplier(p), t_p);
}

// SW_{X_K} = SW_X * Delta_K(t), t = exp(PD(2[T])): the exponent base really is
// the doubled class, unlike the log-transform formula.
inline BasicClassSet sw_knot_surgery(const BasicClassSet& sw, const std::vector<Int>& t,
                                     const LaurentPoly& delta) {
    if (delta == LaurentPoly(1))
        return sw;
    std::vector<Int> doubled = t;
    for (Int& x : doubled)
        x *= 2;
    return convolve_basic_set(sw, delta, doubled);
}

// --- Adjunction ------------------------------------------------------------

enum class AdjunctionVerdict { satisfied, violated, not_applicable };

inline Int pairing(const std::vector<Int>& k, const std::vector<Int>& alpha) {
    require(k.size() == alpha.size(), "DimensionMismatch", "pairing length");
    Int s = 0;
    for (std::size_t i = 0; i < k.size(); ++i)
        s += k[i] * alpha[i];
    return s;
}

inline Int square(const std::vector<Int>& alpha, const IntMatrix& q) {
    require(q.rows == alpha.size() && q.cols == alpha.size(), "DimensionMismatch",
            "form/vector size");
    Int s = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        for (std::size_t j = 0; j < alpha.size(); ++j)
            s += alpha[i] * q.at(i, j) * alpha[j];
    return s;
}

// [Sigma]^2 + |<K, [Sigma]>| <= 2g - 2, applicable when alpha^2 >= 0 or
// (simple type and g >= 1); alpha must be non-torsion.
inline AdjunctionVerdict adjunction_check(const std::vector<Int>& k, const std::vector<Int>& alpha,
                                          const IntMatrix& q, long long g, bool simple_type) {
    require(g >= 0, "BadParameter", "genus must be non-negative");
    bool alpha_zero = true;
    for (const Int& x : alpha)
        if (x != 0)
            alpha_zero = false;
    if (alpha_zero)
        return AdjunctionVerdict::not_applicable;
    Int sq = square(alpha, q);
    if (sq < 0 && (!simple_type || g == 0))
        return AdjunctionVerdict::not_applicable;
    Int lhs = sq + abs(pairing(k, alpha));
    return lhs <= 2 * g - 2 ? AdjunctionVerdict::satisfied : AdjunctionVerdict::violated;
}

// Least g >= 0 such that 2g - 2 >= |<K, alpha>| + alpha^2 for every basic
// class the adjunction inequality can ever apply to (alpha^2 >= 0, or simple
// type). Classes it never applies to impose nothing; 0 when no constraint
// applies at all.
inline long long genus_lower_bound(const BasicClassSet& basics, const std::vector<Int>& alpha,
                                   const IntMatrix& q, bool simple_type) {
    require(!basics.empty(), "EmptyBasicSet", "no basic classes to constrain the genus");
    bool alpha_zero = true;
    for (const Int& x : alpha)
        if (x != 0)
            alpha_zero = false;
    require(!alpha_zero, "TorsionClass", "alpha is zero in the free quotient");

    Int sq = square(alpha, q);
    if (sq < 0 && !simple_type)
        return 0;
    Int worst = 0;  // 2g >= worst
    for (const auto& [k, c] : basics.classes) {
        Int need = sq + abs(pairing(k, alpha)) + 2;
        if (need > worst)
            worst = need;
    }
    if (worst <= 0)
        return 0;
    Int g = (worst + 1) / 2;  // ceil(worst / 2)
    return static_cast<long long>(g);
}

}  // namespace nf
