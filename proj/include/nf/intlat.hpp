#pragma once

// Exact integer linear algebra: Smith normal form with transforms, cokernel
// invariant factors, integer kernel bases, symmetric form classification and
// divisibility of lattice vectors. Everything runs over arbitrary-precision
// integers; there is no floating point anywhere in this library.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nf/errors.hpp"

namespace nf {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct IntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Int> entries;  // row-major

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}
    IntMatrix(std::initializer_list<std::initializer_list<Int>> data) {
        rows = data.size();
        cols = rows ? data.begin()->size() : 0;
        entries.reserve(rows * cols);
        for (const auto& row : data) {
            require(row.size() == cols, "BadShape", "ragged initializer");
            for (const auto& x : row)
                entries.push_back(x);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.at(i, i) = 1;
        return m;
    }

    Int& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

    bool is_square() const { return rows == cols; }

    bool is_symmetric() const {
        if (!is_square())
            return false;
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = i + 1; j < cols; ++j)
                if (at(i, j) != at(j, i))
                    return false;
        return true;
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows == b.rows && a.cols == b.cols && a.entries == b.entries;
    }
};

inline IntMatrix mul(const IntMatrix& a, const IntMatrix& b) {
    require(a.cols == b.rows, "DimensionMismatch", "matrix product shape");
    IntMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            if (a.at(i, k) == 0)
                continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                c.at(i, j) += a.at(i, k) * b.at(k, j);
        }
    return c;
}

inline IntMatrix transpose(const IntMatrix& a) {
    IntMatrix t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            t.at(j, i) = a.at(i, j);
    return t;
}

// Fraction-free Bareiss determinant.
inline Int det(const IntMatrix& m) {
    require(m.is_square(), "NonSquare", "determinant of non-square matrix");
    const std::size_t n = m.rows;
    if (n == 0)
        return 1;
    IntMatrix a = m;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a.at(piv, k) == 0)
                ++piv;
            if (piv == n)
                return 0;
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a.at(k, j), a.at(piv, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
        prev = a.at(k, k);
    }
    return sign > 0 ? a.at(n - 1, n - 1) : -a.at(n - 1, n - 1);
}

struct SNFResult {
    std::vector<Int> diagonal;   // d1 | d2 | ... , non-negative
    IntMatrix left_transform;    // unimodular, rows x rows
    IntMatrix right_transform;   // unimodular, cols x cols
};

// left * M * right is diagonal with the divisibility chain. Matrices here are
// small (rank <= ~50), so the classical pivoting algorithm is fine.
inline SNFResult smith_normal_form(const IntMatrix& m) {
    IntMatrix a = m;
    IntMatrix u = IntMatrix::identity(m.rows);
    IntMatrix v = IntMatrix::identity(m.cols);

    auto swap_rows = [&](std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < a.cols; ++c) std::swap(a.at(i, c), a.at(j, c));
        for (std::size_t c = 0; c < u.cols; ++c) std::swap(u.at(i, c), u.at(j, c));
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < a.rows; ++r) std::swap(a.at(r, i), a.at(r, j));
        for (std::size_t r = 0; r < v.rows; ++r) std::swap(v.at(r, i), v.at(r, j));
    };
    auto add_row = [&](std::size_t dst, std::size_t src, const Int& f) {
        for (std::size_t c = 0; c < a.cols; ++c) a.at(dst, c) += f * a.at(src, c);
        for (std::size_t c = 0; c < u.cols; ++c) u.at(dst, c) += f * u.at(src, c);
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const Int& f) {
        for (std::size_t r = 0; r < a.rows; ++r) a.at(r, dst) += f * a.at(r, src);
        for (std::size_t r = 0; r < v.rows; ++r) v.at(r, dst) += f * v.at(r, src);
    };
    auto negate_row = [&](std::size_t i) {
        for (std::size_t c = 0; c < a.cols; ++c) a.at(i, c) = -a.at(i, c);
        for (std::size_t c = 0; c < u.cols; ++c) u.at(i, c) = -u.at(i, c);
    };

    const std::size_t steps = std::min(m.rows, m.cols);
    for (std::size_t t = 0; t < steps; ++t) {
        // Find the smallest nonzero entry in the trailing block.
        std::size_t pi = t, pj = t;
        bool found = false;
        for (std::size_t i = t; i < a.rows; ++i)
            for (std::size_t j = t; j < a.cols; ++j) {
                if (a.at(i, j) == 0)
                    continue;
                if (!found || abs(a.at(i, j)) < abs(a.at(pi, pj))) {
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        if (!found)
            break;
        if (pi != t) swap_rows(t, pi);
        if (pj != t) swap_cols(t, pj);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < a.rows; ++i) {
                if (a.at(i, t) == 0)
                    continue;
                Int q = a.at(i, t) / a.at(t, t);
                add_row(i, t, -q);
                if (a.at(i, t) != 0) {  // remainder smaller than pivot: swap up
                    swap_rows(t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < a.cols; ++j) {
                if (a.at(t, j) == 0)
                    continue;
                Int q = a.at(t, j) / a.at(t, t);
                add_col(j, t, -q);
                if (a.at(t, j) != 0) {
                    swap_cols(t, j);
                    clean = false;
                }
            }
            if (!clean)
                continue;
            // Enforce divisibility of the trailing block by the pivot.
            bool divides_all = true;
            for (std::size_t i = t + 1; i < a.rows && divides_all; ++i)
                for (std::size_t j = t + 1; j < a.cols && divides_all; ++j)
                    if (a.at(i, j) % a.at(t, t) != 0) {
                        add_row(t, i, 1);
                        divides_all = false;
                    }
            if (divides_all)
                break;
        }
        if (a.at(t, t) < 0)
            negate_row(t);
    }

    SNFResult res;
    res.diagonal.resize(steps);
    for (std::size_t t = 0; t < steps; ++t)
        res.diagonal[t] = a.at(t, t);
    res.left_transform = std::move(u);
    res.right_transform = std::move(v);
    return res;
}

// Invariant factors of the cokernel Z^rows / im(M), as the list of factors
// > 1 in divisibility order followed by one 0 per free Z summand.
inline std::vector<Int> cokernel_invariant_factors(const IntMatrix& m) {
    SNFResult snf = smith_normal_form(m);
    std::size_t nonzero = 0;
    std::vector<Int> factors;
    for (const Int& d : snf.diagonal) {
        if (d == 0)
            continue;
        ++nonzero;
        if (d > 1)
            factors.push_back(d);
    }
    const std::size_t free_rank = m.rows - nonzero;
    for (std::size_t i = 0; i < free_rank; ++i)
        factors.push_back(0);
    return factors;
}

// Basis of the integer kernel {x : M x = 0}, as matrix columns. The basis is
// primitive (columns of a unimodular matrix), so it spans a saturated lattice.
inline IntMatrix kernel_basis(const IntMatrix& m) {
    SNFResult snf = smith_normal_form(m);
    std::vector<std::size_t> zero_cols;
    for (std::size_t j = 0; j < m.cols; ++j) {
        bool zero = j >= snf.diagonal.size() || snf.diagonal[j] == 0;
        if (zero)
            zero_cols.push_back(j);
    }
    IntMatrix k(m.cols, zero_cols.size());
    for (std::size_t out = 0; out < zero_cols.size(); ++out)
        for (std::size_t r = 0; r < m.cols; ++r)
            k.at(r, out) = snf.right_transform.at(r, zero_cols[out]);
    return k;
}

enum class Parity { even, odd };
enum class Definiteness { positive, negative, indefinite };

struct FormClass {
    int rank = 0;
    int signature = 0;
    Parity parity = Parity::even;
    bool unimodular = false;
    Definiteness definiteness = Definiteness::indefinite;

    friend bool operator==(const FormClass& a, const FormClass& b) {
        return a.rank == b.rank && a.signature == b.signature && a.parity == b.parity &&
               a.unimodular == b.unimodular && a.definiteness == b.definiteness;
    }
};

inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }
inline const char* to_string(Definiteness d) {
    switch (d) {
        case Definiteness::positive: return "positive";
        case Definiteness::negative: return "negative";
        default: return "indefinite";
    }
}

// Signature by exact symmetric Gaussian reduction over the rationals.
// Zero diagonal pivots are repaired by the congruence e_i <- e_i + e_j for the
// lowest off-diagonal partner j; when that leaves the pivot zero (it can, when
// B_jj = -2 B_ij) the congruence e_i <- e_i - e_j is used instead, and the two
// cannot both fail. Deterministic pivot order: lowest index first.
inline std::pair<int, int> symmetric_inertia(const IntMatrix& q) {
    const std::size_t n = q.rows;
    std::vector<std::vector<Rational>> b(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b[i][j] = Rational(q.at(i, j));

    int pos = 0, neg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (b[i][i] == 0) {
            std::size_t partner = n;
            for (std::size_t j = i + 1; j < n; ++j)
                if (b[i][j] != 0) {
                    partner = j;
                    break;
                }
            if (partner == n)
                continue;  // row is zero on the remaining block
            const std::size_t j = partner;
            int dir = (2 * b[i][j] + b[j][j] != 0) ? 1 : -1;
            for (std::size_t c = 0; c < n; ++c)
                b[i][c] += dir * b[j][c];
            for (std::size_t r = 0; r < n; ++r)
                b[r][i] += dir * b[r][j];
        }
        const Rational piv = b[i][i];
        if (piv > 0)
            ++pos;
        else
            ++neg;
        for (std::size_t r = i + 1; r < n; ++r) {
            if (b[r][i] == 0)
                continue;
            Rational f = b[r][i] / piv;
            for (std::size_t c = 0; c < n; ++c)
                b[r][c] -= f * b[i][c];
            for (std::size_t c = 0; c < n; ++c)
                b[c][r] -= f * b[c][i];
        }
    }
    return {pos, neg};
}

inline FormClass classify_form(const IntMatrix& q) {
    require(q.is_symmetric(), "NonSymmetric", "classify_form needs a symmetric matrix");
    FormClass fc;
    auto [pos, neg] = symmetric_inertia(q);
    fc.rank = pos + neg;
    fc.signature = pos - neg;
    bool even = true;
    for (std::size_t i = 0; i < q.rows; ++i)
        if (q.at(i, i) % 2 != 0)
            even = false;
    fc.parity = even ? Parity::even : Parity::odd;
    fc.unimodular = q.rows == static_cast<std::size_t>(fc.rank) && abs(det(q)) == 1;
    if (fc.rank > 0 && fc.signature == fc.rank)
        fc.definiteness = Definiteness::positive;
    else if (fc.rank > 0 && fc.signature == -fc.rank)
        fc.definiteness = Definiteness::negative;
    else
        fc.definiteness = Definiteness::indefinite;
    return fc;
}

inline Int content(const std::vector<Int>& v) {
    Int g = 0;
    for (const Int& x : v)
        g = gcd(g, x);
    return g;
}

// d = gcd of entries (> 0), v = d * vhat with vhat primitive.
inline std::pair<Int, std::vector<Int>> divisibility_split(const std::vector<Int>& v) {
    Int d = content(v);
    require(d != 0, "ZeroVector", "divisibility_split of the zero vector");
    std::vector<Int> vhat(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        vhat[i] = v[i] / d;
    return {d, vhat};
}

}  // namespace nf
