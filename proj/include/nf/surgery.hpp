#pragma once

// The rewrite operations: p-log transform along a marked nucleus, knot
// surgery (as a symbolic ledger-preserving node), W+-/W--modifications with
// their cork registry, cork twists, cork stripping, and handle slides as
// chain-level basis changes.

#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "nf/errors.hpp"
#include "nf/handlebody.hpp"
#include "nf/swadj.hpp"

namespace nf {

inline long long to_int64(const Int& v) {
    require(v >= std::numeric_limits<long long>::min() &&
                v <= std::numeric_limits<long long>::max(),
            "Overflow", "value out of 64-bit range: " + v.str());
    return static_cast<long long>(v);
}

// --- Log transform -----------------------------------------------------------

// The framing of the transformed S-carrier: s' = p^2 s + d_T^2 (p - 1).
inline Int log_framing(const Int& s, long long d_t, long long p) {
    return Int(p) * p * s + Int(d_t) * d_t * (p - 1);
}

// Parity criterion for the transformed nucleus: even iff the form was even
// and (p is odd or d_T is even).
inline bool log_parity_even(const Int& s, long long d_t, long long p) {
    return s % 2 == 0 && (p % 2 == 1 || d_t % 2 == 0);
}

struct LogLedger {
    Int s_prime;
    Parity parity = Parity::even;
};

inline LogLedger log_transform_ledger(const Int& s, long long d_t, long long p) {
    require(p >= 1, "BadCoefficient", "log transform needs p >= 1");
    LogLedger l;
    l.s_prime = log_framing(s, d_t, p);
    l.parity = l.s_prime % 2 == 0 ? Parity::even : Parity::odd;
    return l;
}

struct LogTransformResult {
    Handlebody manifold;
    std::map<std::string, long long> class_Tp;    // multiple fiber, divisor d_T
    std::map<std::string, long long> class_Shat;  // S' with S'.T_p_hat = 1, S'.S' = s'
    Int s_prime;
    Parity parity = Parity::even;
    NucleusMarker nucleus_marker;  // marks the parallel copy of T, divisor p*d_T
};

namespace detail {

// The marked sub-diagram must split off: no algebraic linking and no shared
// 1-handle traffic with the rest. Handle slides (the `slide` op) are the tool
// for arranging this; the transform does not search for them.
inline void require_split_nucleus(const Handlebody& x, const NucleusMarker& m) {
    std::set<std::string> sub2(m.sub_two_handles.begin(), m.sub_two_handles.end());
    std::set<std::string> sub1(m.sub_one_handles.begin(), m.sub_one_handles.end());
    for (const auto& h : x.two_handles) {
        if (sub2.count(h.name))
            continue;
        for (const auto& [other, v] : h.linking)
            require(!sub2.count(other), "InvalidMarker",
                    "handle '" + h.name + "' links the marked nucleus; slide it off first");
        for (const Letter& l : h.attaching_word)
            require(!sub1.count(l.gen), "InvalidMarker",
                    "handle '" + h.name + "' runs over a nucleus 1-handle");
    }
    for (const auto& [name, c] : m.class_T)
        require(sub2.count(name), "InvalidMarker", "class_T leaves the marked sub-diagram");
    if (m.class_S)
        for (const auto& [name, c] : *m.class_S)
            require(sub2.count(name), "InvalidMarker", "class_S leaves the marked sub-diagram");
}

inline std::string fresh_name(const std::set<std::string>& used, std::string base) {
    while (used.count(base))
        base += "'";
    return base;
}

}  // namespace detail

// Replaces the marked nucleus N by the standard diagram of its p-log
// transform: a 1-handle w, the 0-framed fiber circle F, the (p-1)-framed L2
// running p times over w, and the s-framed L1 running -d_T times over w, with
// lk(F, L2) = beta and lk(F, L1) = alpha chosen by beta d_T + alpha p = 1.
// In the resulting lattice [T_p] = d_T F and S' = d_T L2 + p L1 satisfy
// S'.S' = p^2 s + d_T^2 (p-1) and S'.T_p_hat = 1, and the boundary
// presentation stays unimodular, so the output is again a nucleus. The
// parallel copy of the old torus T carries divisor p*d_T.
inline LogTransformResult log_transform(const Handlebody& x, const std::string& marker_id,
                                        long long p) {
    require(p >= 1, "BadCoefficient", "log transform needs p >= 1");
    const NucleusMarker m = x.marker(marker_id);
    check_marker(x, m);
    require(m.class_S.has_value(), "InvalidMarker",
            "log transform needs the nucleus ledger classes T and S");
    auto [d, that] = divisibility_split(dense_class(x, m.class_T));
    require(d == m.divisor_dT, "InvalidMarker", "marker divisor disagrees with class content");
    const long long d_t = m.divisor_dT;
    const Int s = class_pairing(x, *m.class_S, *m.class_S);

    LogTransformResult res;
    res.s_prime = log_framing(s, d_t, p);
    res.parity = res.s_prime % 2 == 0 ? Parity::even : Parity::odd;

    if (p == 1) {
        res.manifold = x;
        res.manifold.log("log_transform", {{"marker", marker_id}, {"p", "1"}});
        res.class_Tp = m.class_T;
        res.class_Shat = *m.class_S;
        res.nucleus_marker = m;
        return res;
    }

    require(std::gcd(p, d_t) == 1, "GcdViolation",
            "p = " + std::to_string(p) + " is not coprime to d_T = " + std::to_string(d_t));
    detail::require_split_nucleus(x, m);

    // beta = d_T^{-1} mod p in [0, p), alpha = (1 - beta d_T) / p
    long long beta = 0;
    for (long long b = 0; b < p; ++b)
        if ((b * d_t) % p == ((1 % p) + p) % p) {
            beta = b;
            break;
        }
    const long long alpha = (1 - beta * d_t) / p;

    Handlebody out;
    std::set<std::string> sub2(m.sub_two_handles.begin(), m.sub_two_handles.end());
    std::set<std::string> sub1(m.sub_one_handles.begin(), m.sub_one_handles.end());
    for (const auto& n : x.one_handles)
        if (!sub1.count(n))
            out.one_handles.push_back(n);
    for (const auto& h : x.two_handles)
        if (!sub2.count(h.name))
            out.two_handles.push_back(h);

    std::set<std::string> used(out.one_handles.begin(), out.one_handles.end());
    for (const auto& h : out.two_handles)
        used.insert(h.name);
    const std::string w_name = detail::fresh_name(used, marker_id + ".w");
    used.insert(w_name);
    const std::string f_name = detail::fresh_name(used, marker_id + ".F");
    used.insert(f_name);
    const std::string l2_name = detail::fresh_name(used, marker_id + ".L2");
    used.insert(l2_name);
    const std::string l1_name = detail::fresh_name(used, marker_id + ".L1");

    out.one_handles.push_back(w_name);
    TwoHandle fiber;
    fiber.name = f_name;
    fiber.framing = 0;
    TwoHandle l2;
    l2.name = l2_name;
    l2.framing = p - 1;
    l2.attaching_word = power_word(w_name, p);
    TwoHandle l1;
    l1.name = l1_name;
    l1.framing = to_int64(s);
    l1.attaching_word = power_word(w_name, -d_t);
    out.two_handles.push_back(fiber);
    out.two_handles.push_back(l2);
    out.two_handles.push_back(l1);
    if (beta != 0)
        out.set_lk(f_name, l2_name, beta);
    if (alpha != 0)
        out.set_lk(f_name, l1_name, alpha);

    // markers: keep the ones untouched by the replacement
    for (const auto& mk : x.markers) {
        if (mk.id == m.id)
            continue;
        bool overlaps = false;
        for (const auto& n : mk.sub_two_handles)
            if (sub2.count(n))
                overlaps = true;
        for (const auto& n : mk.sub_one_handles)
            if (sub1.count(n))
                overlaps = true;
        if (!overlaps)
            out.markers.push_back(mk);
    }
    // cork records: detach those whose target was consumed
    for (const auto& c : x.cork_registry) {
        CorkRecord cc = c;
        if (!cc.target.empty() && sub2.count(cc.target))
            cc.target.clear();
        out.cork_registry.push_back(std::move(cc));
    }
    out.op_log = x.op_log;

    NucleusMarker nm;
    nm.id = m.id;
    nm.torus_handles = {f_name};
    nm.sub_two_handles = {f_name, l2_name, l1_name};
    nm.sub_one_handles = {w_name};
    nm.class_T = {{f_name, p * d_t}};
    nm.class_S = {{{l2_name, d_t}, {l1_name, p}}};
    nm.divisor_dT = p * d_t;
    nm.provenance = MarkerProvenance::log_transform;
    nm.pi1_status = PiStatus::proved;
    out.markers.push_back(nm);
    out.log("log_transform", {{"marker", marker_id}, {"p", std::to_string(p)}});
    out.validate();

    res.manifold = out;
    res.class_Tp = {{f_name, d_t}};
    res.class_Shat = {{l2_name, d_t}, {l1_name, p}};
    res.nucleus_marker = nm;

    // exact self-checks on the emitted lattice data
    require(class_pairing(out, res.class_Shat, res.class_Shat) == res.s_prime, "Internal",
            "transformed S class has the wrong square");
    require(class_pairing(out, res.class_Shat, res.class_Tp) == d_t, "Internal",
            "transformed classes have the wrong pairing");
    return res;
}

// --- Knot surgery ------------------------------------------------------------

struct KnotSurgeryResult {
    Handlebody manifold;  // diagram unchanged; the surgery is a symbolic node
    HomologyReport report;
    KnotSpec knot;
    NucleusMarker marker;
};

// Knot surgery along a divisor-one nucleus torus. The homology, boundary
// homology and intersection form all match the input, and [T] stays
// primitive, so the ledger is copied and the operation is recorded as a
// symbolic node in the operation log; there is no general handle picture to
// draw. The SW transformation lives in swadj.
inline KnotSurgeryResult knot_surgery(const Handlebody& x, const std::string& marker_id,
                                      const KnotSpec& k) {
    const NucleusMarker& m = x.marker(marker_id);
    check_marker(x, m);
    auto [d, that] = divisibility_split(dense_class(x, m.class_T));
    require(d == 1 && m.divisor_dT == 1, "DivisorNotOne",
            "knot surgery needs d_T = 1, got " + d.str());

    KnotSurgeryResult res;
    res.manifold = x;
    res.manifold.log("knot_surgery", {{"marker", marker_id}, {"knot", k.name()}});
    res.report = homology(x);
    res.knot = k;
    res.marker = m;
    return res;
}

// --- W-modifications and corks -------------------------------------------------

// W+(p)- / W-(p)-modification to a 2-handle: adds the cork's 1-handle and a
// 0-framed auxiliary 2-handle cancelling it algebraically, leaves the target
// framing and all linking untouched, and (Legendrian effect) raises tb by p
// for W+ while W- changes nothing. p = 0 is the undone operation.
inline Handlebody w_modify(const Handlebody& x, const std::string& handle, char sign,
                           long long p) {
    require(sign == '+' || sign == '-', "BadArgument", "sign must be '+' or '-'");
    require(p >= 0, "BadCoefficient", "W-modification needs p >= 0");
    x.two_index(handle);  // UnknownHandle if absent
    if (p == 0) {
        Handlebody out = x;
        out.log("w_modify", {{"handle", handle}, {"sign", std::string(1, sign)}, {"p", "0"}});
        return out;
    }

    Handlebody out = x;
    std::set<std::string> used(out.one_handles.begin(), out.one_handles.end());
    for (const auto& h : out.two_handles)
        used.insert(h.name);
    std::set<std::string> cork_ids;
    for (const auto& c : out.cork_registry)
        cork_ids.insert(c.id);
    std::string id = "W" + std::to_string(out.cork_registry.size() + 1);
    while (cork_ids.count(id))
        id += "'";
    const std::string one = detail::fresh_name(used, id + ".h");
    used.insert(one);
    const std::string aux = detail::fresh_name(used, id + ".aux");

    out.one_handles.push_back(one);
    TwoHandle gamma;
    gamma.name = aux;
    gamma.framing = 0;
    gamma.attaching_word = power_word(one, 1);
    gamma.legendrian = sign == '+' ? LegendrianData{2, 0} : LegendrianData{1, 1};
    out.two_handles.push_back(gamma);

    TwoHandle& t = out.two(handle);
    std::optional<std::string> saved = t.front;
    t.front.reset();
    if (sign == '+' && t.legendrian)
        t.legendrian->tb += p;

    out.cork_registry.push_back({id, sign, p, handle, aux, one, std::move(saved)});
    out.log("w_modify",
            {{"handle", handle}, {"sign", std::string(1, sign)}, {"p", std::to_string(p)},
             {"cork", id}});
    out.validate();
    return out;
}

// Cork twist along a registry record: flips W+ <-> W-, adjusting the target's
// tb by -+p and trading the auxiliary handle's Legendrian data between the
// (2,0) and (1,1) models. Involutive.
inline Handlebody cork_twist(const Handlebody& x, const std::string& cork_id) {
    Handlebody out = x;
    for (auto& c : out.cork_registry) {
        if (c.id != cork_id)
            continue;
        const long long dir = c.sign == '+' ? -1 : 1;  // '+' -> '-': lower tb
        if (!c.target.empty()) {
            TwoHandle& t = out.two(c.target);
            if (t.legendrian)
                t.legendrian->tb += dir * c.p;
        }
        TwoHandle& g = out.two(c.aux_handle);
        if (g.legendrian) {
            g.legendrian->tb += dir;      // (2,0) <-> (1,1)
            g.legendrian->r -= dir;
        }
        c.sign = c.sign == '+' ? '-' : '+';
        out.log("cork_twist", {{"cork", cork_id}});
        return out;
    }
    fail("UnknownCork", "no cork record named '" + cork_id + "'");
}

// Removes the named records' cork handles and reverts their Legendrian
// effect; inverse of w_modify.
inline Handlebody strip_corks(const Handlebody& x, const std::vector<std::string>& ids) {
    Handlebody out = x;
    for (const std::string& id : ids) {
        bool found = false;
        for (std::size_t ci = 0; ci < out.cork_registry.size(); ++ci) {
            if (out.cork_registry[ci].id != id)
                continue;
            CorkRecord c = out.cork_registry[ci];
            for (const auto& h : out.two_handles)
                if (h.name != c.aux_handle)
                    for (const Letter& l : h.attaching_word)
                        require(l.gen != c.one_handle, "MalformedDiagram",
                                "cork 1-handle is entangled with handle '" + h.name + "'");
            if (!c.target.empty()) {
                TwoHandle& t = out.two(c.target);
                if (c.sign == '+' && t.legendrian)
                    t.legendrian->tb -= c.p;
                if (c.saved_front)
                    t.front = c.saved_front;
            }
            for (auto& h : out.two_handles)
                h.linking.erase(c.aux_handle);
            out.two_handles.erase(out.two_handles.begin() +
                                  static_cast<long>(out.two_index(c.aux_handle)));
            out.one_handles.erase(
                std::find(out.one_handles.begin(), out.one_handles.end(), c.one_handle));
            out.cork_registry.erase(out.cork_registry.begin() + static_cast<long>(ci));
            out.log("strip_cork", {{"cork", id}});
            found = true;
            break;
        }
        require(found, "UnknownCork", "no cork record named '" + id + "'");
    }
    out.validate();
    return out;
}

// --- Handle slides --------------------------------------------------------------

// Slide `from` over `over` (sign +1/-1): the chain basis change
// e_from <- e_from + sign * e_over. Framing picks up f_over + 2 sign lk,
// the linking row adds, the attaching word concatenates, and every marker
// class is rewritten in the new basis. Declared Legendrian data and fronts on
// `from` are invalidated; Seifert genus bounds add when both are declared.
inline Handlebody slide(const Handlebody& x, const std::string& from, const std::string& over,
                        int sign) {
    require(sign == 1 || sign == -1, "BadArgument", "slide sign must be +-1");
    require(from != over, "SelfSlide", "cannot slide a handle over itself");
    Handlebody out = x;
    const TwoHandle o = out.two(over);
    TwoHandle& f = out.two(from);
    const long long lam = out.lk(from, over);

    f.framing += o.framing + 2 * sign * lam;
    f.attaching_word = free_reduce(
        concat(f.attaching_word, sign > 0 ? o.attaching_word : inverse(o.attaching_word)));
    if (f.seifert_genus && o.seifert_genus)
        f.seifert_genus = *f.seifert_genus + *o.seifert_genus;
    else
        f.seifert_genus.reset();
    f.legendrian.reset();
    f.front.reset();

    for (const auto& h : x.two_handles) {
        if (h.name == from || h.name == over)
            continue;
        out.set_lk(from, h.name, x.lk(from, h.name) + sign * x.lk(over, h.name));
    }
    out.set_lk(from, over, lam + sign * o.framing);

    // marker classes in the new basis: c_over -= sign * c_from
    for (auto& m : out.markers) {
        auto rewrite = [&](std::map<std::string, long long>& cls) {
            auto it = cls.find(from);
            if (it == cls.end())
                return;
            long long cf = it->second;
            cls[over] -= sign * cf;
            if (cls[over] == 0)
                cls.erase(over);
        };
        rewrite(m.class_T);
        if (m.class_S)
            rewrite(*m.class_S);
    }
    out.log("slide", {{"from", from}, {"over", over}, {"sign", std::to_string(sign)}});
    out.validate();
    return out;
}

}  // namespace nf
