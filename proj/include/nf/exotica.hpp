#pragma once

// Family-level machinery: data-set extraction from a marked nucleus,
// p-sequence and knot-sequence generation with explicit integer obligations,
// separation certificates for log/knot families, an independent certificate
// checker, non-Stein obstruction records, and the Stein/non-Stein pipelines.
//
// Certificates are closed: every obligation is a fully substituted integer
// statement {lhs, relation, rhs}, and the checker re-derives each one from the
// recorded parameters without trusting stored values or verdicts.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nf/errors.hpp"
#include "nf/handlebody.hpp"
#include "nf/legendrian.hpp"
#include "nf/surgery.hpp"
#include "nf/swadj.hpp"

namespace nf {

// --- Ledger and data set -------------------------------------------------------

// Declared upper bounds for the non-computable genus values g(S_p) (log
// families, keyed by p) and g(S_K) (knot families, keyed by deg Delta_K).
struct GenusLedger {
    std::map<long long, long long> g_s_log;
    std::map<long long, long long> g_s_knot;
};

using BoundProvider = std::function<std::optional<long long>(long long key)>;

struct Assumption {
    std::string id;
    std::string status;  // "proved" | "assumed" | "failed"
    std::string note;

    friend bool operator==(const Assumption&, const Assumption&) = default;
};

struct ComplementClass {
    std::map<std::string, long long> cls;
    Int square;
    long long genus_bound = 0;  // max{declared, 1} when square < 0
};

// The algebraic data extracted from (X, N, T): the nucleus basis ledger, the
// complement basis with genus bounds, the formal basic-class seed, and the
// assumption trail. Basis order for pairing coordinates: (S, T_hat, u_1..u_k).
struct DataSet {
    long long d_T = 1;
    Int s = 0;  // S.S
    Parity nucleus_parity = Parity::even;
    long long g_s1 = 1;  // bound for S itself (the p = 1 / unknot member)
    std::vector<ComplementClass> u;
    BasicClassSet basics;
    bool simple_type = true;
    std::vector<Assumption> assumptions;
    std::string marker_id;
    IntMatrix q;  // intersection matrix in the basis (S, T_hat, u_1..u_k)
};

inline BasicClassSet default_basic_seed(std::size_t k) {
    return make_basic_set(k + 2, {{std::vector<Int>(k + 2, 0), Int(1)}});
}

// Splits H2(X) along the homology-sphere boundary of the marked nucleus and
// fills the genus ledger from declared Seifert genera (max{.,1} for negative
// squares). Complement classes must be carried by single handles; bounds for
// combinations are not invented.
inline DataSet build_data_set(const Handlebody& x, const std::string& marker_id,
                              std::optional<BasicClassSet> basics = std::nullopt,
                              long long tietze_budget = 10000,
                              std::optional<long long> declared_g_s = std::nullopt) {
    const NucleusMarker& m = x.marker(marker_id);
    NucleusReport rep = verify_nucleus(x, m, tietze_budget);
    require(rep.no_failures(), "NucleusFailed", "the marked sub-diagram fails the nucleus check");
    require(m.class_S.has_value(), "InvalidMarker", "data set needs the S class");
    detail::require_split_nucleus(x, m);

    DataSet ds;
    ds.marker_id = marker_id;
    ds.d_T = m.divisor_dT;
    ds.s = class_pairing(x, *m.class_S, *m.class_S);
    ds.nucleus_parity = ds.s % 2 == 0 ? Parity::even : Parity::odd;

    if (rep.simply_connected != CondStatus::proved)
        ds.assumptions.push_back({"nucleus-pi1", to_string(rep.simply_connected),
                                  "simple connectivity of N not machine-proved"});
    if (rep.c_embedded_torus != CondStatus::proved)
        ds.assumptions.push_back({"c-embedded-torus", to_string(rep.c_embedded_torus),
                                  "c-embedding of T is declared"});
    if (rep.peripheral != CondStatus::proved)
        ds.assumptions.push_back({"peripheral-surjectivity", to_string(rep.peripheral),
                                  "peripheral pi_1 surjectivity not machine-proved"});

    // g(S): from a declared bound, else from the single carrier handle's
    // declared Seifert genus; never invented
    if (declared_g_s) {
        require(*declared_g_s >= 0, "BadParameter", "genus bounds are non-negative");
        ds.g_s1 = ds.s < 0 ? std::max(*declared_g_s, 1LL) : *declared_g_s;
        ds.assumptions.push_back(
            {"g-S-declared", "assumed", "the bound g(S) is a declared input"});
    } else {
        const auto& sc = *m.class_S;
        require(sc.size() == 1 && (sc.begin()->second == 1 || sc.begin()->second == -1),
                "MissingGenusData",
                "class_S is not carried by a single handle; declare g(S) explicitly");
        const TwoHandle& carrier = x.two(sc.begin()->first);
        require(carrier.seifert_genus.has_value(), "MissingGenusData",
                "S-carrier handle '" + carrier.name + "' has no declared Seifert genus");
        long long g = *carrier.seifert_genus;
        ds.g_s1 = ds.s < 0 ? std::max(g, 1LL) : g;
    }

    // complement classes
    std::set<std::string> sub2(m.sub_two_handles.begin(), m.sub_two_handles.end());
    std::set<std::string> sub1(m.sub_one_handles.begin(), m.sub_one_handles.end());
    Handlebody comp;
    for (const auto& n : x.one_handles)
        if (!sub1.count(n))
            comp.one_handles.push_back(n);
    for (const auto& h : x.two_handles)
        if (!sub2.count(h.name))
            comp.two_handles.push_back(h);
    IntMatrix kb = kernel_basis(comp.runover_matrix());
    IntMatrix q_comp = comp.linking_matrix();
    IntMatrix form = mul(mul(transpose(kb), q_comp), kb);
    for (std::size_t j = 0; j < kb.cols; ++j) {
        ComplementClass cc;
        std::size_t support = 0, where = 0;
        for (std::size_t i = 0; i < kb.rows; ++i)
            if (kb.at(i, j) != 0) {
                ++support;
                where = i;
            }
        require(support == 1 && abs(kb.at(where, j)) == 1, "MissingGenusData",
                "complement class is not carried by a single handle");
        const TwoHandle& carrier = comp.two_handles[where];
        require(carrier.seifert_genus.has_value(), "MissingGenusData",
                "complement handle '" + carrier.name + "' has no declared Seifert genus");
        cc.cls = {{carrier.name, static_cast<long long>(kb.at(where, j))}};
        cc.square = form.at(j, j);
        long long g = *carrier.seifert_genus;
        cc.genus_bound = cc.square < 0 ? std::max(g, 1LL) : g;
        ds.u.push_back(std::move(cc));
    }

    // intersection matrix in the basis (S, T_hat, u_1..u_k); the nucleus block
    // never pairs with the complement across the homology-sphere boundary
    const std::size_t k = ds.u.size();
    ds.q = IntMatrix(k + 2, k + 2);
    ds.q.at(0, 0) = ds.s;
    ds.q.at(0, 1) = ds.q.at(1, 0) = 1;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            ds.q.at(2 + i, 2 + j) = form.at(i, j);

    if (basics) {
        require(basics->rank == k + 2, "DimensionMismatch",
                "basic-class seed rank must be k + 2");
        ds.basics = *basics;
        ds.assumptions.push_back(
            {"basic-class-seed", "assumed", "basic classes of the ambient closed manifold are declared input"});
    } else {
        ds.basics = default_basic_seed(k);
        ds.assumptions.push_back(
            {"basic-class-seed", "assumed",
             "default seed: one basic class with zero pairings against the data-set basis"});
    }
    ds.simple_type = true;
    ds.assumptions.push_back(
        {"simple-type", "assumed",
         "ambient manifold contains the non-torsion torus T, hence is of simple type"});
    return ds;
}

// --- Obligations -----------------------------------------------------------------

struct Obligation {
    std::string id;
    Int lhs = 0;
    std::string rel;  // ">", ">=", "==", "!="
    Int rhs = 0;
    bool holds = false;

    friend bool operator==(const Obligation&, const Obligation&) = default;
};

inline bool eval_relation(const Int& lhs, const std::string& rel, const Int& rhs) {
    if (rel == ">")
        return lhs > rhs;
    if (rel == ">=")
        return lhs >= rhs;
    if (rel == "==")
        return lhs == rhs;
    if (rel == "!=")
        return lhs != rhs;
    fail("MalformedCertificate", "unknown relation '" + rel + "'");
}

inline Obligation make_obligation(std::string id, Int lhs, std::string rel, Int rhs) {
    Obligation o;
    o.id = std::move(id);
    o.lhs = std::move(lhs);
    o.rel = std::move(rel);
    o.rhs = std::move(rhs);
    o.holds = eval_relation(o.lhs, o.rel, o.rhs);
    return o;
}

// --- Sequence generation -----------------------------------------------------------

struct SequenceResult {
    std::vector<long long> keys;  // p values, or torus-knot degrees (key 0 = unknot)
    std::vector<Obligation> obligations;
    std::map<long long, long long> ledger_used;  // key -> g bound consumed
};

namespace detail {

inline std::optional<long long> ledger_lookup(const std::map<long long, long long>& table,
                                              long long key, long long g_s1,
                                              const BoundProvider& provider) {
    if (key == 0 || key == 1)
        return g_s1;
    auto it = table.find(key);
    if (it != table.end())
        return it->second;
    if (provider)
        return provider(key);
    return std::nullopt;
}

}  // namespace detail

// Minimal p-sequence for the log-transform family: p_1 = 1 and each next p_n
// is the least integer that is larger, coprime to d_T, odd when the parity
// case demands it, and clears the adjunction gaps against the genus ledger.
// Every condition instance is emitted as a closed obligation.
inline SequenceResult gen_p_sequence(const DataSet& ds, long long n, bool strengthened,
                                     const GenusLedger& ledger,
                                     const BoundProvider& provider = nullptr) {
    require(n >= 1, "BadParameter", "sequence length must be >= 1");
    SequenceResult out;
    out.keys.push_back(1);
    const bool parity_case = ds.nucleus_parity == Parity::even && ds.d_T % 2 == 1;

    for (long long step = 2; step <= n; ++step) {
        long long prev = out.keys.back();
        auto g_prev = detail::ledger_lookup(ledger.g_s_log, prev, ds.g_s1, provider);
        require(g_prev.has_value(), "LedgerIncomplete",
                "no declared bound g(S_p) for p = " + std::to_string(prev));
        out.ledger_used[prev] = *g_prev;

        long long p = prev;
        for (;;) {
            ++p;
            require(p < (1LL << 40), "Internal", "p-sequence scan ran away");
            if (std::gcd(p, ds.d_T) != 1)
                continue;
            if (parity_case && p % 2 == 0)
                continue;
            Int gap = Int(ds.d_T) * (p - 1);
            if (!(gap + ds.s > 2 * *g_prev - 2))
                continue;
            if (strengthened && !(gap - ds.s > 2 * *g_prev - 2))
                continue;
            if (step == 2) {
                bool ok = true;
                for (const auto& u : ds.u) {
                    if (!(gap + u.square > 2 * u.genus_bound - 2))
                        ok = false;
                    if (strengthened && !(gap - u.square > 2 * u.genus_bound - 2))
                        ok = false;
                }
                if (!ok)
                    continue;
            }
            break;
        }
        out.keys.push_back(p);

        const std::string tag = "[n=" + std::to_string(step) + "]";
        Int gap = Int(ds.d_T) * (p - 1);
        out.obligations.push_back(make_obligation("p-increasing" + tag, Int(p), ">", Int(prev)));
        out.obligations.push_back(
            make_obligation("coprime" + tag, Int(std::gcd(p, ds.d_T)), "==", Int(1)));
        if (parity_case)
            out.obligations.push_back(make_obligation("parity-odd" + tag, Int(p % 2), "==", Int(1)));
        out.obligations.push_back(
            make_obligation("S-gap" + tag, gap + ds.s, ">", Int(2 * *g_prev - 2)));
        if (strengthened)
            out.obligations.push_back(
                make_obligation("S-gap-reversed" + tag, gap - ds.s, ">", Int(2 * *g_prev - 2)));
        if (step == 2)
            for (std::size_t i = 0; i < ds.u.size(); ++i) {
                const std::string utag = "[i=" + std::to_string(i + 1) + "]";
                out.obligations.push_back(make_obligation("u-gap" + utag, gap + ds.u[i].square,
                                                          ">", Int(2 * ds.u[i].genus_bound - 2)));
                if (strengthened)
                    out.obligations.push_back(
                        make_obligation("u-gap-reversed" + utag, gap - ds.u[i].square, ">",
                                        Int(2 * ds.u[i].genus_bound - 2)));
            }
    }
    return out;
}

// Minimal knot sequence from the torus(2, 2k+1) family: K_1 is the unknot and
// each next K_n is the least degree clearing the doubled-degree gaps.
// Requires d_T = 1.
inline SequenceResult gen_knot_sequence(const DataSet& ds, long long n, bool strengthened,
                                        const GenusLedger& ledger,
                                        const BoundProvider& provider = nullptr) {
    require(n >= 1, "BadParameter", "sequence length must be >= 1");
    require(ds.d_T == 1, "DivisorNotOne", "knot families need d_T = 1");
    SequenceResult out;
    out.keys.push_back(0);  // the unknot, deg 0

    for (long long step = 2; step <= n; ++step) {
        long long prev = out.keys.back();
        auto g_prev = detail::ledger_lookup(ledger.g_s_knot, prev, ds.g_s1, provider);
        require(g_prev.has_value(), "LedgerIncomplete",
                "no declared bound g(S_K) for deg = " + std::to_string(prev));
        out.ledger_used[prev] = *g_prev;

        long long deg = prev;
        for (;;) {
            ++deg;
            require(deg < (1LL << 40), "Internal", "knot-sequence scan ran away");
            Int gap = Int(2) * deg;
            if (!(gap + ds.s > 2 * *g_prev - 2))
                continue;
            if (strengthened && !(gap - ds.s > 2 * *g_prev - 2))
                continue;
            if (step == 2) {
                bool ok = true;
                for (const auto& u : ds.u) {
                    if (!(gap + u.square > 2 * u.genus_bound - 2))
                        ok = false;
                    if (strengthened && !(gap - u.square > 2 * u.genus_bound - 2))
                        ok = false;
                }
                if (!ok)
                    continue;
            }
            break;
        }
        out.keys.push_back(deg);

        const std::string tag = "[n=" + std::to_string(step) + "]";
        Int gap = Int(2) * deg;
        out.obligations.push_back(make_obligation("deg-increasing" + tag, Int(deg), ">", Int(prev)));
        out.obligations.push_back(
            make_obligation("S-gap" + tag, gap + ds.s, ">", Int(2 * *g_prev - 2)));
        if (strengthened)
            out.obligations.push_back(
                make_obligation("S-gap-reversed" + tag, gap - ds.s, ">", Int(2 * *g_prev - 2)));
        if (step == 2)
            for (std::size_t i = 0; i < ds.u.size(); ++i) {
                const std::string utag = "[i=" + std::to_string(i + 1) + "]";
                out.obligations.push_back(make_obligation("u-gap" + utag, gap + ds.u[i].square,
                                                          ">", Int(2 * ds.u[i].genus_bound - 2)));
                if (strengthened)
                    out.obligations.push_back(
                        make_obligation("u-gap-reversed" + utag, gap - ds.u[i].square, ">",
                                        Int(2 * ds.u[i].genus_bound - 2)));
            }
    }
    return out;
}

inline KnotSpec knot_for_degree(long long deg) {
    require(deg >= 0, "BadParameter", "degree must be non-negative");
    return deg == 0 ? KnotSpec::unknot() : KnotSpec::torus(2, 2 * deg + 1);
}

// --- Certificates --------------------------------------------------------------------

struct RelGenusQuery {
    IntMatrix q;             // over the index set (S, T_hat, u_1..u_k)
    std::vector<Int> d;      // (1, d_T, 1, ..., 1)
    std::vector<Int> g;      // over indices != lambda_0: (1, g(u_1), ..., g(u_k))
    std::size_t lambda0 = 0;

    friend bool operator==(const RelGenusQuery&, const RelGenusQuery&) = default;
};

struct MemberLedger {
    std::string name;
    long long key = 0;   // p or deg
    Int s_member = 0;    // square of the diagram-basis S class (s' for log)
    Parity parity = Parity::even;
    IntMatrix form_iso;  // 2x2 U with U^T [[0,1],[1,s_member]] U = [[0,1],[1,s]]
    BasicClassSet basics;
};

struct ExoticaCertificate {
    std::string construction;  // "log_family" | "knot_family" | "stein_nonstein" | "w_plus"
    long long d_T = 1;
    Int s = 0;
    Parity nucleus_parity = Parity::even;
    bool strengthened = false;
    bool simple_type = true;
    long long g_s1 = 1;
    std::vector<long long> keys;
    std::vector<std::pair<Int, long long>> u_data;  // (square, genus bound)
    std::map<long long, long long> ledger_used;
    BasicClassSet seed;
    std::vector<MemberLedger> members;
    // the invariant ledger every member shares (homology, form class,
    // boundary); realized members are checked against it by the pipelines
    std::optional<HomologyReport> member_report;
    std::vector<Obligation> obligations;
    std::vector<Assumption> assumptions;
    RelGenusQuery query;
    std::string zigzag_policy = "alternate-start-down";
    std::string verdict;  // "accept" | "reject"
};

namespace detail {

// U with U^T [[0,1],[1,s]] U = standard (hyperbolic for even s, <1> + <-1>
// for odd s), over the ordered basis (T_hat, S).
inline IntMatrix standardize_rank2(const Int& s) {
    IntMatrix u(2, 2);
    if (s % 2 == 0) {
        u.at(0, 0) = 1;
        u.at(0, 1) = -s / 2;
        u.at(1, 0) = 0;
        u.at(1, 1) = 1;
    } else {
        u.at(0, 0) = -(s - 1) / 2;
        u.at(0, 1) = -(s + 1) / 2;
        u.at(1, 0) = 1;
        u.at(1, 1) = 1;
    }
    return u;
}

inline IntMatrix inverse_2x2_unimodular(const IntMatrix& m) {
    Int d = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    require(abs(d) == 1, "Internal", "matrix is not unimodular");
    IntMatrix inv(2, 2);
    inv.at(0, 0) = m.at(1, 1) / d;
    inv.at(0, 1) = -m.at(0, 1) / d;
    inv.at(1, 0) = -m.at(1, 0) / d;
    inv.at(1, 1) = m.at(0, 0) / d;
    return inv;
}

inline IntMatrix rank2_nucleus_form(const Int& s) {
    IntMatrix q(2, 2);
    q.at(0, 1) = q.at(1, 0) = 1;
    q.at(1, 1) = s;
    return q;
}

// Explicit unimodular V with V^T [[0,1],[1,s_member]] V = [[0,1],[1,s]];
// exists exactly when the parities agree.
inline IntMatrix form_iso_rank2(const Int& s_member, const Int& s) {
    require((s_member % 2 == 0) == (s % 2 == 0), "ObligationFailure",
            "rank-2 forms of different parity are not isomorphic");
    IntMatrix v = mul(standardize_rank2(s_member), inverse_2x2_unimodular(standardize_rank2(s)));
    require(mul(mul(transpose(v), rank2_nucleus_form(s_member)), v) == rank2_nucleus_form(s),
            "Internal", "form isomorphism self-check failed");
    return v;
}

inline std::vector<Int> fiber_shift_vector(const DataSet& ds) {
    // pairings of PD([T_p]) against (S, T_hat, u...): (d_T, 0, ..., 0)
    std::vector<Int> shift(ds.u.size() + 2, 0);
    shift[0] = ds.d_T;
    return shift;
}

}  // namespace detail

// Builds the separation certificate for a generated (or user-supplied) family.
// All generation conditions are re-instantiated for the given keys, the
// per-pair forcing chain is recorded with substituted values, each member
// carries its transformed basic-class set and an explicit rank-2 form
// isomorphism back to the input, and the relative-genus query (Q, d, g) is
// attached. kind: "log" or "knot".
inline ExoticaCertificate certify_family(const DataSet& ds, const std::vector<long long>& keys,
                                         const std::string& kind, bool strengthened,
                                         const GenusLedger& ledger,
                                         const BoundProvider& provider = nullptr) {
    require(kind == "log" || kind == "knot", "BadParameter", "family kind must be log or knot");
    require(!keys.empty(), "BadParameter", "empty family");
    const bool is_log = kind == "log";
    if (is_log)
        require(keys.front() == 1, "BadParameter", "log families start at p = 1");
    else {
        require(keys.front() == 0, "BadParameter", "knot families start at the unknot");
        require(ds.d_T == 1, "DivisorNotOne", "knot families need d_T = 1");
    }

    ExoticaCertificate cert;
    cert.construction = is_log ? "log_family" : "knot_family";
    cert.d_T = ds.d_T;
    cert.s = ds.s;
    cert.nucleus_parity = ds.nucleus_parity;
    cert.strengthened = strengthened;
    cert.simple_type = ds.simple_type;
    cert.g_s1 = ds.g_s1;
    cert.keys = keys;
    for (const auto& u : ds.u)
        cert.u_data.emplace_back(u.square, u.genus_bound);
    cert.seed = ds.basics;
    cert.assumptions = ds.assumptions;

    const bool parity_case = ds.nucleus_parity == Parity::even && ds.d_T % 2 == 1;
    const std::size_t k = ds.u.size();

    // members
    for (std::size_t i = 0; i < keys.size(); ++i) {
        MemberLedger mem;
        mem.key = keys[i];
        if (is_log) {
            mem.name = "p=" + std::to_string(keys[i]);
            mem.s_member = log_framing(ds.s, ds.d_T, keys[i]);
            mem.basics = keys[i] == 1 ? ds.basics
                                      : sw_log_transform(ds.basics,
                                                         detail::fiber_shift_vector(ds), keys[i]);
        } else {
            KnotSpec kn = knot_for_degree(keys[i]);
            mem.name = kn.name();
            mem.s_member = ds.s;
            std::vector<Int> t(k + 2, 0);
            t[0] = 1;  // PD([T]) pairings, d_T = 1
            mem.basics = keys[i] == 0 ? ds.basics : sw_knot_surgery(ds.basics, t, kn.delta());
        }
        mem.parity = mem.s_member % 2 == 0 ? Parity::even : Parity::odd;
        if ((mem.s_member % 2 == 0) == (ds.s % 2 == 0))
            mem.form_iso = detail::form_iso_rank2(mem.s_member, ds.s);
        // parity-illegal members keep an empty iso; the parity obligation
        // below fails and the certificate rejects
        cert.members.push_back(std::move(mem));
    }

    // per-member structural obligations
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const std::string tag = "[n=" + std::to_string(i + 1) + "]";
        cert.obligations.push_back(make_obligation(
            "parity-preserved" + tag, cert.members[i].s_member % 2 == 0 ? Int(0) : Int(1), "==",
            ds.s % 2 == 0 ? Int(0) : Int(1)));
        cert.obligations.push_back(make_obligation(
            "basics-nonempty" + tag, Int(cert.members[i].basics.classes.size()), ">", Int(0)));
    }

    // sequence conditions + per-pair separation chain
    for (std::size_t i = 1; i < keys.size(); ++i) {
        const long long key = keys[i], prev = keys[i - 1];
        const std::string tag = "[n=" + std::to_string(i + 1) + "]";
        auto g_prev = detail::ledger_lookup(is_log ? ledger.g_s_log : ledger.g_s_knot, prev,
                                            ds.g_s1, provider);
        require(g_prev.has_value(), "LedgerIncomplete",
                "no declared bound for key = " + std::to_string(prev));
        cert.ledger_used[prev] = *g_prev;

        Int gap = is_log ? Int(ds.d_T) * (key - 1) : Int(2) * key;
        if (is_log) {
            cert.obligations.push_back(make_obligation("p-increasing" + tag, Int(key), ">", Int(prev)));
            cert.obligations.push_back(
                make_obligation("coprime" + tag, Int(std::gcd(key, ds.d_T)), "==", Int(1)));
            if (parity_case)
                cert.obligations.push_back(
                    make_obligation("parity-odd" + tag, Int(key % 2), "==", Int(1)));
        } else {
            cert.obligations.push_back(
                make_obligation("deg-increasing" + tag, Int(key), ">", Int(prev)));
        }
        // forcing chain: the S coordinate dies, the torus coordinate dies,
        // every u coordinate dies, and killing all of them contradicts a basis
        cert.obligations.push_back(
            make_obligation("sep-S" + tag, gap + ds.s, ">", Int(2 * *g_prev - 2)));
        if (strengthened)
            cert.obligations.push_back(
                make_obligation("sep-S-reversed" + tag, gap - ds.s, ">", Int(2 * *g_prev - 2)));
        cert.obligations.push_back(make_obligation("sep-torus" + tag, gap, ">", Int(0)));
        for (std::size_t ui = 0; ui < k; ++ui) {
            const std::string utag = "[i=" + std::to_string(ui + 1) + "]" + tag;
            cert.obligations.push_back(make_obligation("sep-u" + utag, gap + ds.u[ui].square, ">",
                                                       Int(2 * ds.u[ui].genus_bound - 2)));
            if (strengthened)
                cert.obligations.push_back(
                    make_obligation("sep-u-reversed" + utag, gap - ds.u[ui].square, ">",
                                    Int(2 * ds.u[ui].genus_bound - 2)));
        }
        long long forced = 0;
        for (const auto& o : cert.obligations)
            if (o.holds && o.id.size() > 4 && o.id.compare(0, 4, "sep-") == 0 &&
                o.id.find(tag) != std::string::npos && o.id.find("reversed") == std::string::npos)
                ++forced;
        cert.obligations.push_back(
            make_obligation("basis-contradiction" + tag, Int(forced), "==", Int(k + 2)));
    }

    // relative genus query (Q, d, g) with lambda_0 = the S coordinate
    cert.query.q = ds.q;
    cert.query.lambda0 = 0;
    cert.query.d.assign(k + 2, 1);
    cert.query.d[1] = ds.d_T;
    cert.query.g.assign(k + 1, 1);  // index 0 <-> T_hat: the torus bound 1
    for (std::size_t i = 0; i < k; ++i)
        cert.query.g[i + 1] = ds.u[i].genus_bound;

    bool all_hold = true;
    for (const auto& o : cert.obligations)
        all_hold = all_hold && o.holds;
    for (const auto& a : cert.assumptions)
        if (a.status == "failed")
            all_hold = false;
    cert.verdict = all_hold ? "accept" : "reject";
    return cert;
}

// --- Certificate checking ----------------------------------------------------------

struct CheckResult {
    std::string verdict;  // "accept" | "reject"
    std::vector<std::string> diffs;

    bool accepted() const { return verdict == "accept" && diffs.empty(); }
};

namespace detail {

// Independent evaluator: rebuilds the (lhs, rel, rhs) of an obligation from
// the certificate's recorded parameters, given only the obligation id.
inline std::optional<Obligation> reevaluate_obligation(const ExoticaCertificate& c,
                                                       const std::string& id) {
    auto num_after = [&](const std::string& tag) -> std::optional<std::size_t> {
        auto at = id.find(tag);
        if (at == std::string::npos)
            return std::nullopt;
        std::size_t pos = at + tag.size();
        std::size_t end = id.find(']', pos);
        if (end == std::string::npos)
            return std::nullopt;
        return static_cast<std::size_t>(std::stoll(id.substr(pos, end - pos)));
    };
    auto n_idx = num_after("[n=");
    auto u_idx = num_after("[i=");
    const bool is_log = c.construction != "knot_family";

    auto member_key = [&](std::size_t n) -> std::optional<long long> {
        if (n < 1 || n > c.keys.size())
            return std::nullopt;
        return c.keys[n - 1];
    };
    auto gap_for = [&](long long key) {
        return is_log ? Int(c.d_T) * (key - 1) : Int(2) * key;
    };
    auto ledger_for = [&](long long key) -> std::optional<long long> {
        if (key == 0 || key == 1)
            return c.g_s1;
        auto it = c.ledger_used.find(key);
        if (it == c.ledger_used.end())
            return std::nullopt;
        return it->second;
    };

    auto head = id.substr(0, id.find('['));
    if (head == "parity-preserved") {
        if (!n_idx)
            return std::nullopt;
        auto key = member_key(*n_idx);
        if (!key)
            return std::nullopt;
        Int sm = is_log ? log_framing(c.s, c.d_T, *key) : c.s;
        return make_obligation(id, sm % 2 == 0 ? Int(0) : Int(1), "==",
                               c.s % 2 == 0 ? Int(0) : Int(1));
    }
    if (head == "basics-nonempty") {
        if (!n_idx)
            return std::nullopt;
        auto key = member_key(*n_idx);
        if (!key)
            return std::nullopt;
        BasicClassSet b = c.seed;
        std::vector<Int> shift(c.seed.rank, 0);
        if (is_log) {
            shift[0] = c.d_T;
            if (*key != 1)
                b = sw_log_transform(c.seed, shift, *key);
        } else {
            shift[0] = 1;
            if (*key != 0)
                b = sw_knot_surgery(c.seed, shift, knot_for_degree(*key).delta());
        }
        return make_obligation(id, Int(b.classes.size()), ">", Int(0));
    }
    if (!n_idx)
        return std::nullopt;
    auto key = member_key(*n_idx);
    auto prev = member_key(*n_idx - 1);
    if (!key || !prev)
        return std::nullopt;

    if (head == "p-increasing" || head == "deg-increasing")
        return make_obligation(id, Int(*key), ">", Int(*prev));
    if (head == "coprime")
        return make_obligation(id, Int(std::gcd(*key, c.d_T)), "==", Int(1));
    if (head == "parity-odd")
        return make_obligation(id, Int(*key % 2), "==", Int(1));

    auto g_prev = ledger_for(*prev);
    Int gap = gap_for(*key);
    if (head == "S-gap" || head == "sep-S") {
        if (!g_prev)
            return std::nullopt;
        return make_obligation(id, gap + c.s, ">", Int(2 * *g_prev - 2));
    }
    if (head == "S-gap-reversed" || head == "sep-S-reversed") {
        if (!g_prev)
            return std::nullopt;
        return make_obligation(id, gap - c.s, ">", Int(2 * *g_prev - 2));
    }
    if (head == "sep-torus")
        return make_obligation(id, gap, ">", Int(0));
    if (head == "sep-u" || head == "u-gap" || head == "sep-u-reversed" ||
        head == "u-gap-reversed") {
        if (!u_idx || *u_idx < 1 || *u_idx > c.u_data.size())
            return std::nullopt;
        const auto& [sq, gb] = c.u_data[*u_idx - 1];
        bool rev = head.find("reversed") != std::string::npos;
        Int lhs = rev ? Int(gap - sq) : Int(gap + sq);
        return make_obligation(id, lhs, ">", Int(2 * gb - 2));
    }
    if (head == "basis-contradiction") {
        // count the forcing obligations for this pair that genuinely hold
        const std::string tag = "[n=" + std::to_string(*n_idx) + "]";
        long long forced = 0;
        auto count_if_holds = [&](const std::string& oid) {
            auto o = reevaluate_obligation(c, oid);
            if (o && o->holds)
                ++forced;
        };
        count_if_holds("sep-S" + tag);
        count_if_holds("sep-torus" + tag);
        for (std::size_t i = 1; i <= c.u_data.size(); ++i)
            count_if_holds("sep-u[i=" + std::to_string(i) + "]" + tag);
        return make_obligation(id, Int(forced), "==", Int(c.u_data.size() + 2));
    }
    return std::nullopt;
}

}  // namespace detail

// Re-derives every obligation from the certificate's raw parameters and
// re-evaluates the verdict; stored values and verdicts are never trusted.
// Any discrepancy is reported with the offending obligation id.
inline CheckResult check_certificate(const ExoticaCertificate& c) {
    CheckResult res;
    bool all_hold = true;

    if (c.construction != "log_family" && c.construction != "knot_family" &&
        c.construction != "stein_nonstein" && c.construction != "w_plus")
        fail("MalformedCertificate", "unknown construction '" + c.construction + "'");
    require(!c.keys.empty(), "MalformedCertificate", "certificate without members");
    require(c.members.size() == c.keys.size(), "MalformedCertificate",
            "member list does not match the key list");
    const std::size_t k = c.u_data.size();
    require(c.query.q.rows == k + 2 && c.query.q.cols == k + 2 && c.query.d.size() == k + 2 &&
                c.query.g.size() == k + 1 && c.query.lambda0 == 0,
            "MalformedCertificate", "relative-genus query has inconsistent dimensions");

    for (const auto& o : c.obligations) {
        auto re = detail::reevaluate_obligation(c, o.id);
        if (!re) {
            res.diffs.push_back("obligation '" + o.id + "': cannot re-derive from parameters");
            continue;
        }
        if (re->lhs != o.lhs || re->rhs != o.rhs || re->rel != o.rel)
            res.diffs.push_back("obligation '" + o.id + "': stored " + o.lhs.str() + " " + o.rel +
                                " " + o.rhs.str() + ", recomputed " + re->lhs.str() + " " +
                                re->rel + " " + re->rhs.str());
        if (!re->holds) {
            all_hold = false;
            res.diffs.push_back("obligation '" + o.id + "' fails: " + re->lhs.str() + " " +
                                re->rel + " " + re->rhs.str());
        }
        if (o.holds != re->holds)
            res.diffs.push_back("obligation '" + o.id + "': stored verdict disagrees");
    }

    // member ledgers: parity and the explicit form isomorphism
    for (std::size_t i = 0; i < c.members.size(); ++i) {
        const MemberLedger& m = c.members[i];
        Int expect = c.construction == "knot_family" ? c.s : log_framing(c.s, c.d_T, m.key);
        if (m.s_member != expect)
            res.diffs.push_back("member " + m.name + ": stored s' disagrees with the formula");
        bool parity_match = (expect % 2 == 0) == (c.s % 2 == 0);
        if (m.form_iso.rows == 2 && m.form_iso.cols == 2) {
            if (!(mul(mul(transpose(m.form_iso), detail::rank2_nucleus_form(m.s_member)),
                      m.form_iso) == detail::rank2_nucleus_form(c.s)))
                res.diffs.push_back("member " + m.name + ": form isomorphism does not verify");
        } else if (parity_match) {
            res.diffs.push_back("member " + m.name + ": missing form isomorphism");
        } else {
            all_hold = false;
            res.diffs.push_back("member " + m.name +
                                ": no form isomorphism exists (parity mismatch)");
        }
    }

    for (const auto& a : c.assumptions)
        if (a.status == "failed") {
            all_hold = false;
            res.diffs.push_back("assumption '" + a.id + "' is marked failed");
        }

    std::string verdict = (all_hold && res.diffs.empty()) ? "accept" : "reject";
    if (verdict != c.verdict)
        res.diffs.push_back("stored verdict '" + c.verdict + "' disagrees with recomputed '" +
                            verdict + "'");
    res.verdict = verdict == "accept" && res.diffs.empty() ? "accept" : "reject";
    return res;
}

// --- Non-Stein obstructions -----------------------------------------------------------

struct HypothesisCheck {
    std::string id;
    bool ok = false;
    std::string note;
};

// The two-sided adjunction trap: with q = p - 1 (log) or q = 2 deg Delta
// (knot) and a sphere of square -2 meeting the fiber m >= 3 times, the basic
// classes K +- q PD([T_p]) would force |x + qm| <= 2 and |x - qm| <= 2, hence
// 2qm <= 4; the record certifies 2qm > 4.
struct ObstructionRecord {
    std::string op;  // "log(p=3)" / "knot(torus(2,5))"
    bool obstruction = false;
    std::string reason;  // when no obstruction applies
    long long q = 0;
    long long m = 0;
    Int two_qm = 0;
    bool both_orientations = false;
    std::vector<HypothesisCheck> checks;
};

namespace detail {

inline ObstructionRecord obstruction_common(const Handlebody& x, const NucleusMarker& marker,
                                            long long q, long long m, std::string op) {
    require(m >= 3, "BadCoefficient", "the auxiliary sphere construction needs m >= 3");
    ObstructionRecord rec;
    rec.op = std::move(op);
    rec.q = q;
    rec.m = m;

    bool nonzero = false;
    for (const auto& [name, c] : marker.class_T)
        if (c != 0)
            nonzero = true;
    rec.checks.push_back({"fiber-class-nontorsion", nonzero,
                          "[T] is nonzero in the free part of H2, and stays non-torsion "
                          "through log transform and knot surgery"});
    rec.both_orientations = !x.markers.empty();
    if (rec.both_orientations)
        rec.checks.push_back({"contains-marked-cusp", true,
                              "a marked cusp neighborhood obstructs the reversed orientation"});
    if (!nonzero) {
        rec.obstruction = false;
        rec.reason = "the marked torus class is torsion";
        return rec;
    }
    rec.two_qm = Int(2) * q * m;
    rec.obstruction = rec.two_qm > 4;
    if (!rec.obstruction)
        rec.reason = "2qm <= 4 leaves the inequality pair satisfiable";
    return rec;
}

}  // namespace detail

inline ObstructionRecord nonstein_obstruction_log(const Handlebody& x,
                                                  const std::string& marker_id, long long p,
                                                  long long m = 3) {
    require(p >= 1, "BadCoefficient", "log transform needs p >= 1");
    const NucleusMarker& marker = x.marker(marker_id);
    if (p == 1) {
        ObstructionRecord rec;
        rec.op = "log(p=1)";
        rec.obstruction = false;
        rec.reason = "the 1-log transform is diffeomorphic to the input";
        return rec;
    }
    return detail::obstruction_common(x, marker, p - 1, m, "log(p=" + std::to_string(p) + ")");
}

inline ObstructionRecord nonstein_obstruction_knot(const Handlebody& x,
                                                   const std::string& marker_id,
                                                   const KnotSpec& k, long long m = 3) {
    const NucleusMarker& marker = x.marker(marker_id);
    long long deg = k.delta().degree();
    if (deg == 0) {
        ObstructionRecord rec;
        rec.op = "knot(" + k.name() + ")";
        rec.obstruction = false;
        rec.reason = "trivial Alexander polynomial gives no obstruction";
        return rec;
    }
    return detail::obstruction_common(x, marker, 2 * deg, m, "knot(" + k.name() + ")");
}

// --- Pipelines ---------------------------------------------------------------------------

struct PipelineOptions {
    long long n = 2;             // number of Stein members
    long long family_length = 3; // length of the log family (including p = 1)
    GenusLedger ledger;
    std::optional<BasicClassSet> seed;
    long long tietze_budget = 10000;
    bool strengthened = false;
};

struct PipelineResult {
    Handlebody x0;                          // all-W^- member
    std::vector<Handlebody> stein_members;  // X_1..X_n, stein_check-verified
    Handlebody x_tilde_n;                   // X_n with nucleus corks twisted back
    Handlebody x_tilde;                     // stripped Stein handlebody containing N
    std::vector<LogTransformResult> tail;   // log family members with p >= 2
    std::vector<ObstructionRecord> tail_obstructions;
    ExoticaCertificate family_cert;
    std::vector<Obligation> ledger_equalities;
    std::vector<Assumption> assumptions;
    std::string verdict;
};

namespace detail {

inline long long required_w_plus(const TwoHandle& h) {
    require(h.legendrian.has_value(), "MissingLegendrianData",
            "handle '" + h.name + "' carries no Legendrian data");
    return std::max(0LL, h.framing - h.legendrian->tb + 1);
}

// Good Legendrian handlebody: 2-handles with no algebraic run-over whose
// classes form a basis of H2. Checked, never searched for; slides are the
// caller's tool for achieving it.
inline bool good_legendrian(const Handlebody& x) {
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < x.two_handles.size(); ++j)
        if (abelianize(x.two_handles[j].attaching_word).empty())
            candidates.push_back(j);
    IntMatrix kb = kernel_basis(x.runover_matrix());
    if (candidates.size() < kb.cols)
        return false;
    IntMatrix c(x.two_handles.size(), candidates.size());
    for (std::size_t out = 0; out < candidates.size(); ++out)
        c.at(candidates[out], out) = 1;
    SNFResult snf = smith_normal_form(c);
    std::size_t rank = 0;
    for (const Int& d : snf.diagonal)
        if (d != 0) {
            if (d != 1)
                return false;
            ++rank;
        }
    return rank == kb.cols;
}

inline Obligation ledger_equal_obligation(const std::string& name, const HomologyReport& a,
                                          const HomologyReport& b) {
    return make_obligation("ledger-equal[" + name + "]", Int(a == b ? 1 : 0), "==", Int(1));
}

}  // namespace detail

// The cork-strip pipeline: W^-(p_i)-modifications on a nucleus handle K_0 and
// W^-(q_j) on every other handle give X_0; flipping the i-th p-record and all
// q-records to W^+ and adding zig-zags gives the Stein members X_1..X_n;
// twisting the nucleus-supported corks of X_n back gives X~_n, and stripping
// them (then restoring the saved nucleus decomposition) gives the Stein X~
// containing N. The log family on X~_n supplies the non-Stein tail, each
// member with an obstruction record, and everything lands in one certificate.
inline PipelineResult stein_nonstein_pipeline(const Handlebody& x, const std::string& marker_id,
                                              const PipelineOptions& opts) {
    require(opts.n >= 1, "BadParameter", "need at least one Stein member");
    require(opts.family_length >= 2, "BadParameter", "the family needs at least two members");
    const NucleusMarker marker = x.marker(marker_id);
    check_marker(x, marker);

    for (const auto& h : x.two_handles)
        require(h.legendrian.has_value(), "MissingLegendrianData",
                "pipeline input must be a Legendrian handlebody; handle '" + h.name +
                    "' has no data");
    {
        Handlebody nucleus = sub_handlebody(x, marker);
        require(stein_check(nucleus).ok(), "NotGoodHandlebody",
                "the marked nucleus is not a Stein sub-handlebody");
    }
    require(detail::good_legendrian(x), "NotGoodHandlebody",
            "input is not a good Legendrian handlebody; slide handles first");

    PipelineResult res;
    const HomologyReport base = homology(x);

    // saved nucleus decomposition, restored after stripping
    std::map<std::string, std::pair<std::optional<LegendrianData>, std::optional<std::string>>>
        nucleus_saved;
    for (const auto& name : marker.sub_two_handles)
        nucleus_saved[name] = {x.two(name).legendrian, x.two(name).front};

    const std::string k0 = marker.sub_two_handles.front();
    std::set<std::string> nucleus_handles(marker.sub_two_handles.begin(),
                                          marker.sub_two_handles.end());

    // Step II: all-minus modifications
    Handlebody x0 = x;
    std::vector<std::string> p_record_ids;
    const long long p_base = std::max(1LL, detail::required_w_plus(x.two(k0)));
    for (long long i = 1; i <= opts.n; ++i) {
        x0 = w_modify(x0, k0, '-', p_base + (i - 1));
        p_record_ids.push_back(x0.cork_registry.back().id);
    }
    std::map<std::string, std::string> q_record_ids;  // handle -> cork id
    for (const auto& h : x.two_handles) {
        if (h.name == k0)
            continue;
        x0 = w_modify(x0, h.name, '-', std::max(1LL, detail::required_w_plus(h)));
        q_record_ids[h.name] = x0.cork_registry.back().id;
    }
    res.x0 = x0;
    res.ledger_equalities.push_back(detail::ledger_equal_obligation("X0", homology(x0), base));

    // Step III: one p-record plus every q-record flipped, then zig-zags
    for (long long i = 1; i <= opts.n; ++i) {
        Handlebody member = cork_twist(x0, p_record_ids[static_cast<std::size_t>(i - 1)]);
        for (const auto& [h, id] : q_record_ids)
            member = cork_twist(member, id);
        member = steinify(member);
        SteinCheckResult sc = stein_check(member);
        require(sc.ok(), "SteinificationFailed",
                "member " + std::to_string(i) + " failed the Stein check");
        res.ledger_equalities.push_back(detail::ledger_equal_obligation(
            "X" + std::to_string(i), homology(member), base));
        res.stein_members.push_back(std::move(member));
    }

    // X~_n: twist the nucleus-supported corks of X_n back to W^-
    Handlebody xtn = res.stein_members.back();
    for (const auto& id : p_record_ids)
        if (xtn.cork(id).sign == '+')
            xtn = cork_twist(xtn, id);
    for (const auto& [h, id] : q_record_ids)
        if (nucleus_handles.count(h) && xtn.cork(id).sign == '+')
            xtn = cork_twist(xtn, id);
    res.x_tilde_n = xtn;
    res.ledger_equalities.push_back(
        detail::ledger_equal_obligation("X~n", homology(xtn), base));

    // X~: strip those corks from X_n and restore the nucleus decomposition
    {
        std::vector<std::string> strip_ids = p_record_ids;
        for (const auto& [h, id] : q_record_ids)
            if (nucleus_handles.count(h))
                strip_ids.push_back(id);
        Handlebody xt = strip_corks(res.stein_members.back(), strip_ids);
        for (const auto& [name, saved] : nucleus_saved) {
            TwoHandle& h = xt.two(name);
            h.legendrian = saved.first;
            h.front = saved.second;
        }
        xt.log("restore_nucleus_decomposition", {{"marker", marker_id}});
        require(stein_check(xt).ok(), "SteinificationFailed",
                "stripped handlebody is not Stein");
        res.x_tilde = xt;
        res.ledger_equalities.push_back(
            detail::ledger_equal_obligation("X~", homology(xt), base));
    }

    // the infinite tail: log family on X~_n along the nucleus torus
    DataSet ds = build_data_set(res.x_tilde_n, marker_id, opts.seed, opts.tietze_budget);
    SequenceResult seq =
        gen_p_sequence(ds, opts.family_length, opts.strengthened, opts.ledger);
    res.family_cert =
        certify_family(ds, seq.keys, "log", opts.strengthened, opts.ledger);
    res.family_cert.construction = "stein_nonstein";
    res.family_cert.member_report = base;
    for (std::size_t i = 1; i < seq.keys.size(); ++i) {
        long long p = seq.keys[i];
        LogTransformResult member = log_transform(res.x_tilde_n, marker_id, p);
        res.ledger_equalities.push_back(detail::ledger_equal_obligation(
            "tail:p=" + std::to_string(p), homology(member.manifold), base));
        res.tail_obstructions.push_back(
            nonstein_obstruction_log(res.x_tilde_n, marker_id, p));
        res.tail.push_back(std::move(member));
    }

    res.assumptions = res.family_cert.assumptions;
    res.assumptions.push_back(
        {"homeomorphism-members", "assumed",
         "members are related by cork twists and nucleus replacements with isomorphic forms "
         "and equal boundary ledgers; the homeomorphism extension itself is an axiom edge"});
    res.assumptions.push_back(
        {"stein-members-distinct", "assumed",
         "pairwise non-diffeomorphism of the Stein members X_1..X_n rests on the cork "
         "separation argument, recorded as an axiom; the tail separation is machine-checked"});
    res.assumptions.push_back(
        {"embedding-chain", "assumed",
         "W^+/W^- results embed into the input and the input embeds into the all-minus "
         "member; recorded as axiom edges"});

    bool ok = res.family_cert.verdict == "accept";
    for (const auto& o : res.ledger_equalities)
        ok = ok && o.holds;
    for (const auto& rec : res.tail_obstructions)
        ok = ok && rec.obstruction;
    res.verdict = ok ? "accept" : "reject";
    return res;
}

struct WPlusResult {
    Handlebody x1;  // Stein-verified
    Handlebody x0;  // cork-twisted back
    ExoticaCertificate family_cert;
    std::vector<Obligation> ledger_equalities;
    std::vector<Assumption> assumptions;
    std::string verdict;
};

// W^+-modify every non-nucleus handle just enough for zig-zags to Stein-ify;
// the cork-twisted X_0 is homeomorphic and carries the same ledgers, and the
// log family on X_1's data set supplies the exotic structures.
inline WPlusResult w_plus_exotica_pipeline(const Handlebody& x, const std::string& marker_id,
                                           const PipelineOptions& opts) {
    const NucleusMarker marker = x.marker(marker_id);
    check_marker(x, marker);
    for (const auto& h : x.two_handles)
        require(h.legendrian.has_value(), "MissingLegendrianData",
                "pipeline input must be a Legendrian handlebody; handle '" + h.name +
                    "' has no data");
    {
        Handlebody nucleus = sub_handlebody(x, marker);
        require(stein_check(nucleus).ok(), "NotGoodHandlebody",
                "the marked nucleus is not a Stein sub-handlebody");
    }

    WPlusResult res;
    const HomologyReport base = homology(x);
    std::set<std::string> nucleus_handles(marker.sub_two_handles.begin(),
                                          marker.sub_two_handles.end());

    Handlebody x1 = x;
    std::vector<std::string> record_ids;
    for (const auto& h : x.two_handles) {
        if (nucleus_handles.count(h.name))
            continue;
        x1 = w_modify(x1, h.name, '+', std::max(1LL, detail::required_w_plus(h)));
        record_ids.push_back(x1.cork_registry.back().id);
    }
    x1 = steinify(x1);
    require(stein_check(x1).ok(), "SteinificationFailed", "X1 failed the Stein check");
    res.x1 = x1;
    res.ledger_equalities.push_back(detail::ledger_equal_obligation("X1", homology(x1), base));

    Handlebody x0 = x1;
    for (const auto& id : record_ids)
        x0 = cork_twist(x0, id);
    res.x0 = x0;
    res.ledger_equalities.push_back(detail::ledger_equal_obligation("X0", homology(x0), base));

    DataSet ds = build_data_set(x1, marker_id, opts.seed, opts.tietze_budget);
    SequenceResult seq =
        gen_p_sequence(ds, opts.family_length, opts.strengthened, opts.ledger);
    res.family_cert = certify_family(ds, seq.keys, "log", opts.strengthened, opts.ledger);
    res.family_cert.construction = "w_plus";
    res.family_cert.member_report = base;

    res.assumptions = res.family_cert.assumptions;
    res.assumptions.push_back(
        {"homeomorphism-members", "assumed",
         "X0 and X1 differ by cork twists; the homeomorphism is an axiom edge"});

    bool ok = res.family_cert.verdict == "accept";
    for (const auto& o : res.ledger_equalities)
        ok = ok && o.holds;
    res.verdict = ok ? "accept" : "reject";
    return res;
}

}  // namespace nf
