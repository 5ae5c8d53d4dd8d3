#pragma once

// Combinatorial model of 4-dimensional 2-handlebodies: named 1-handles,
// framed 2-handles with attaching words and pairwise linking numbers, nucleus
// markers and the cork registry. Diagrams are purely algebraic: geometric
// realizability of the declared linking/word data is trusted, not verified.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nf/errors.hpp"
#include "nf/intlat.hpp"

namespace nf {

// --- Words in the free group on 1-handles ----------------------------------

struct Letter {
    std::string gen;
    int sign = 1;  // +1 or -1

    friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

inline Word free_reduce(const Word& w) {
    Word out;
    for (const Letter& l : w) {
        if (!out.empty() && out.back().gen == l.gen && out.back().sign == -l.sign)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

inline Word cyclic_reduce(Word w) {
    w = free_reduce(w);
    while (w.size() >= 2 && w.front().gen == w.back().gen && w.front().sign == -w.back().sign) {
        w.erase(w.begin());
        w.pop_back();
        w = free_reduce(w);
    }
    return w;
}

inline Word inverse(const Word& w) {
    Word out;
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        out.push_back({it->gen, -it->sign});
    return out;
}

inline Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline std::map<std::string, long long> abelianize(const Word& w) {
    std::map<std::string, long long> e;
    for (const Letter& l : w) {
        e[l.gen] += l.sign;
        if (e[l.gen] == 0)
            e.erase(l.gen);
    }
    return e;
}

inline Word power_word(const std::string& gen, long long exponent) {
    Word w;
    for (long long i = 0; i < (exponent < 0 ? -exponent : exponent); ++i)
        w.push_back({gen, exponent < 0 ? -1 : 1});
    return w;
}

// --- Handle data -------------------------------------------------------------

struct LegendrianData {
    long long tb = 0;
    long long r = 0;

    friend bool operator==(const LegendrianData&, const LegendrianData&) = default;
};

struct TwoHandle {
    std::string name;
    Word attaching_word;                       // over the 1-handles
    long long framing = 0;                     // Seifert framing
    std::map<std::string, long long> linking;  // other handle -> lk, nonzero only
    std::optional<LegendrianData> legendrian;
    std::optional<long long> seifert_genus;    // declared genus of a bounding surface
    std::optional<std::string> front;          // front DSL text, knots in S^3 only

    friend bool operator==(const TwoHandle&, const TwoHandle&) = default;
};

struct CorkRecord {
    std::string id;
    char sign = '+';  // '+' or '-'
    long long p = 1;
    std::string target;      // empty once the target handle was consumed by surgery
    std::string aux_handle;  // 0-framed auxiliary 2-handle
    std::string one_handle;  // the cork's 1-handle
    // The target's front no longer draws the rerouted attaching circle; it is
    // parked here so that stripping the cork can put it back.
    std::optional<std::string> saved_front;

    friend bool operator==(const CorkRecord&, const CorkRecord&) = default;
};

enum class PiStatus { proved, assumed, unknown };
enum class MarkerProvenance { builtin, log_transform, declared };

inline const char* to_string(PiStatus s) {
    switch (s) {
        case PiStatus::proved: return "proved";
        case PiStatus::assumed: return "assumed";
        default: return "unknown";
    }
}

// Marks a nucleus (or bare cusp) sub-handlebody. Class vectors are sparse
// integer combinations of 2-handle chain classes, keyed by handle name.
struct NucleusMarker {
    std::string id;
    std::vector<std::string> torus_handles;    // 2-handles of the cusp sub-diagram
    std::vector<std::string> sub_two_handles;  // the nucleus N as a sub-diagram
    std::vector<std::string> sub_one_handles;
    std::map<std::string, long long> class_T;
    std::optional<std::map<std::string, long long>> class_S;  // absent for bare cusps
    long long divisor_dT = 1;
    MarkerProvenance provenance = MarkerProvenance::declared;
    PiStatus pi1_status = PiStatus::unknown;

    friend bool operator==(const NucleusMarker&, const NucleusMarker&) = default;
};

struct OpLogEntry {
    std::string op;
    std::vector<std::pair<std::string, std::string>> args;

    friend bool operator==(const OpLogEntry&, const OpLogEntry&) = default;
};

struct Handlebody {
    std::vector<std::string> one_handles;
    std::vector<TwoHandle> two_handles;
    std::vector<NucleusMarker> markers;
    std::vector<CorkRecord> cork_registry;
    std::vector<OpLogEntry> op_log;

    friend bool operator==(const Handlebody&, const Handlebody&) = default;

    bool has_one_handle(const std::string& n) const {
        return std::find(one_handles.begin(), one_handles.end(), n) != one_handles.end();
    }

    std::size_t two_index(const std::string& n) const {
        for (std::size_t i = 0; i < two_handles.size(); ++i)
            if (two_handles[i].name == n)
                return i;
        fail("UnknownHandle", "no 2-handle named '" + n + "'");
    }

    TwoHandle& two(const std::string& n) { return two_handles[two_index(n)]; }
    const TwoHandle& two(const std::string& n) const { return two_handles[two_index(n)]; }

    long long lk(const std::string& a, const std::string& b) const {
        if (a == b)
            return two(a).framing;
        const auto& m = two(a).linking;
        auto it = m.find(b);
        return it == m.end() ? 0 : it->second;
    }

    void set_lk(const std::string& a, const std::string& b, long long v) {
        require(a != b, "BadArgument", "use framing for self-linking");
        auto put = [&](TwoHandle& h, const std::string& other) {
            if (v == 0)
                h.linking.erase(other);
            else
                h.linking[other] = v;
        };
        put(two(a), b);
        put(two(b), a);
    }

    const NucleusMarker& marker(const std::string& id) const {
        for (const auto& m : markers)
            if (m.id == id)
                return m;
        fail("InvalidMarker", "no marker named '" + id + "'");
    }

    NucleusMarker& marker(const std::string& id) {
        for (auto& m : markers)
            if (m.id == id)
                return m;
        fail("InvalidMarker", "no marker named '" + id + "'");
    }

    const CorkRecord& cork(const std::string& id) const {
        for (const auto& c : cork_registry)
            if (c.id == id)
                return c;
        fail("UnknownCork", "no cork record named '" + id + "'");
    }

    void log(std::string op, std::vector<std::pair<std::string, std::string>> args) {
        op_log.push_back({std::move(op), std::move(args)});
    }

    // Linking matrix over the 2-handles, diagonal = framings.
    IntMatrix linking_matrix() const {
        const std::size_t n = two_handles.size();
        IntMatrix q(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            q.at(i, i) = two_handles[i].framing;
            for (const auto& [other, v] : two_handles[i].linking)
                q.at(i, two_index(other)) = v;
        }
        return q;
    }

    // Run-over matrix: rows = 1-handles, cols = 2-handles, entries = algebraic
    // count of the attaching word over each 1-handle.
    IntMatrix runover_matrix() const {
        IntMatrix r(one_handles.size(), two_handles.size());
        for (std::size_t j = 0; j < two_handles.size(); ++j) {
            auto e = abelianize(two_handles[j].attaching_word);
            for (std::size_t i = 0; i < one_handles.size(); ++i) {
                auto it = e.find(one_handles[i]);
                if (it != e.end())
                    r.at(i, j) = it->second;
            }
        }
        return r;
    }

    void validate() const {
        std::set<std::string> ones(one_handles.begin(), one_handles.end());
        require(ones.size() == one_handles.size(), "MalformedDiagram", "duplicate 1-handle names");
        std::set<std::string> twos;
        for (const auto& h : two_handles)
            require(twos.insert(h.name).second, "MalformedDiagram",
                    "duplicate 2-handle name '" + h.name + "'");
        for (const auto& h : two_handles) {
            for (const Letter& l : h.attaching_word)
                require(ones.count(l.gen), "MalformedDiagram",
                        "word of '" + h.name + "' uses unknown 1-handle '" + l.gen + "'");
            for (const auto& [other, v] : h.linking) {
                require(twos.count(other), "MalformedDiagram",
                        "linking of '" + h.name + "' references unknown handle '" + other + "'");
                require(v != 0, "MalformedDiagram", "stored zero linking entry");
                require(lk(other, h.name) == v, "MalformedDiagram",
                        "asymmetric linking between '" + h.name + "' and '" + other + "'");
            }
        }
        for (const auto& m : markers) {
            for (const auto& n : m.sub_one_handles)
                require(ones.count(n), "InconsistentMarker", "marker 1-handle missing");
            for (const auto& n : m.sub_two_handles)
                require(twos.count(n), "InconsistentMarker", "marker 2-handle missing");
            for (const auto& n : m.torus_handles)
                require(std::find(m.sub_two_handles.begin(), m.sub_two_handles.end(), n) !=
                            m.sub_two_handles.end(),
                        "InconsistentMarker", "cusp handle outside the marked sub-diagram");
            for (const auto& [n, c] : m.class_T)
                require(twos.count(n), "InconsistentMarker", "class_T names unknown handle");
            if (m.class_S)
                for (const auto& [n, c] : *m.class_S)
                    require(twos.count(n), "InconsistentMarker", "class_S names unknown handle");
        }
        for (const auto& c : cork_registry) {
            require(c.sign == '+' || c.sign == '-', "MalformedDiagram", "cork sign");
            if (!c.target.empty())
                require(twos.count(c.target), "MalformedDiagram", "cork target missing");
            require(twos.count(c.aux_handle), "MalformedDiagram", "cork aux handle missing");
            require(ones.count(c.one_handle), "MalformedDiagram", "cork 1-handle missing");
        }
    }
};

// Deep equality of the diagram data; the append-only operation log is
// history, not geometry, and is excluded.
inline bool same_diagram(const Handlebody& a, const Handlebody& b) {
    return a.one_handles == b.one_handles && a.two_handles == b.two_handles &&
           a.markers == b.markers && a.cork_registry == b.cork_registry;
}

// --- Class vector helpers ----------------------------------------------------

inline std::vector<Int> dense_class(const Handlebody& x,
                                    const std::map<std::string, long long>& sparse) {
    std::vector<Int> v(x.two_handles.size());
    for (const auto& [name, c] : sparse)
        v[x.two_index(name)] = c;
    return v;
}

inline Int class_pairing(const Handlebody& x, const std::map<std::string, long long>& a,
                         const std::map<std::string, long long>& b) {
    Int s = 0;
    for (const auto& [na, ca] : a)
        for (const auto& [nb, cb] : b)
            s += Int(ca) * x.lk(na, nb) * cb;
    return s;
}

inline bool in_kernel(const Handlebody& x, const std::map<std::string, long long>& cls) {
    IntMatrix r = x.runover_matrix();
    std::vector<Int> v = dense_class(x, cls);
    for (std::size_t i = 0; i < r.rows; ++i) {
        Int s = 0;
        for (std::size_t j = 0; j < r.cols; ++j)
            s += r.at(i, j) * v[j];
        if (s != 0)
            return false;
    }
    return true;
}

// --- Homology ---------------------------------------------------------------

struct HomologyReport {
    std::vector<Int> h1;         // invariant factors; 0 entries are Z summands
    std::size_t h2_free_rank = 0;
    std::vector<Int> h2_torsion;  // empty for every 2-handlebody; kept for the schema
    FormClass form;               // classification of the intersection form on H2
    std::vector<Int> boundary_h1;

    bool boundary_homology_sphere() const { return boundary_h1.empty(); }

    friend bool operator==(const HomologyReport&, const HomologyReport&) = default;
};

// Basis of H2 = ker(run-over) as columns over the 2-handle chain basis.
inline IntMatrix h2_basis(const Handlebody& x) { return kernel_basis(x.runover_matrix()); }

// Intersection form on H2 in the kernel basis: B^T Q B.
inline IntMatrix intersection_form_on_h2(const Handlebody& x) {
    IntMatrix b = h2_basis(x);
    return mul(mul(transpose(b), x.linking_matrix()), b);
}

// Presentation matrix of H1(boundary): generators are the 2-handle meridians
// and the 1-handle circles; relations are the framed longitudes and the belt
// sphere relations, i.e. the symmetric block matrix [[Q, R^T], [R, 0]].
// Column order: 2-handles then 1-handles, in diagram order.
inline IntMatrix boundary_presentation(const Handlebody& x) {
    IntMatrix q = x.linking_matrix();
    IntMatrix r = x.runover_matrix();
    const std::size_t n = q.rows, m = r.rows;
    IntMatrix p(n + m, n + m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            p.at(i, j) = q.at(i, j);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            p.at(n + i, j) = r.at(i, j);
            p.at(j, n + i) = r.at(i, j);
        }
    return p;
}

inline HomologyReport homology(const Handlebody& x) {
    x.validate();
    HomologyReport rep;
    rep.h1 = cokernel_invariant_factors(x.runover_matrix());
    IntMatrix form = intersection_form_on_h2(x);
    rep.h2_free_rank = form.rows;
    rep.form = classify_form(form);
    rep.boundary_h1 = cokernel_invariant_factors(boundary_presentation(x));
    return rep;
}

// --- Fundamental group -------------------------------------------------------

struct Presentation {
    std::vector<std::string> generators;
    std::vector<Word> relators;
};

inline Presentation pi1_presentation(const Handlebody& x) {
    Presentation p;
    p.generators = x.one_handles;
    for (const auto& h : x.two_handles)
        p.relators.push_back(h.attaching_word);
    return p;
}

enum class SimplifyVerdict { trivial, nontrivial_abelianization, unknown };

inline const char* to_string(SimplifyVerdict v) {
    switch (v) {
        case SimplifyVerdict::trivial: return "trivial";
        case SimplifyVerdict::nontrivial_abelianization: return "nontrivial_abelianization";
        default: return "unknown";
    }
}

// Budgeted Tietze simplification: free/cyclic reduction, elimination of
// generators with a length-1 relator or a single occurrence inside a relator,
// and greedy relator products that shorten. Returns `trivial` only when the
// presentation empties out; `unknown` when the budget runs dry.
inline SimplifyVerdict simplify_presentation(Presentation p, long long budget = 10000) {
    {
        // Abelianization first: coker of the exponent-sum matrix.
        IntMatrix e(p.generators.size(), p.relators.size());
        for (std::size_t j = 0; j < p.relators.size(); ++j) {
            auto ab = abelianize(p.relators[j]);
            for (std::size_t i = 0; i < p.generators.size(); ++i) {
                auto it = ab.find(p.generators[i]);
                if (it != ab.end())
                    e.at(i, j) = it->second;
            }
        }
        if (!cokernel_invariant_factors(e).empty())
            return SimplifyVerdict::nontrivial_abelianization;
    }

    auto spend = [&budget](long long cost) {
        budget -= cost;
        return budget >= 0;
    };

    auto drop_generator = [&](const std::string& g) {
        for (Word& r : p.relators) {
            Word out;
            for (const Letter& l : r)
                if (l.gen != g)
                    out.push_back(l);
            r = free_reduce(out);
        }
        p.generators.erase(std::find(p.generators.begin(), p.generators.end(), g));
    };

    bool progress = true;
    while (progress && budget >= 0) {
        progress = false;
        for (Word& r : p.relators)
            r = cyclic_reduce(r);
        std::erase_if(p.relators, [](const Word& w) { return w.empty(); });
        if (p.generators.empty())
            return SimplifyVerdict::trivial;

        // length-1 relator: the generator dies
        for (const Word& r : p.relators)
            if (r.size() == 1) {
                std::string g = r[0].gen;
                if (!spend(static_cast<long long>(p.relators.size())))
                    return SimplifyVerdict::unknown;
                drop_generator(g);
                progress = true;
                break;
            }
        if (progress)
            continue;

        // single occurrence of a generator in some relator: solve and substitute
        for (std::size_t ri = 0; ri < p.relators.size() && !progress; ++ri) {
            const Word& r = p.relators[ri];
            std::map<std::string, int> count;
            for (const Letter& l : r)
                ++count[l.gen];
            for (std::size_t li = 0; li < r.size(); ++li) {
                if (count[r[li].gen] != 1)
                    continue;
                const std::string g = r[li].gen;
                // r = u g^s v  =>  g^s = u^-1 v^-1, g = (v u)^{-s}
                Word u(r.begin(), r.begin() + li);
                Word v(r.begin() + li + 1, r.end());
                Word repl = free_reduce(concat(v, u));  // g^{+1} -> repl^{-1}
                Word g_pos = r[li].sign > 0 ? inverse(repl) : repl;
                std::vector<Word> next;
                long long cost = 0;
                for (std::size_t rj = 0; rj < p.relators.size(); ++rj) {
                    if (rj == ri)
                        continue;
                    Word out;
                    for (const Letter& l : p.relators[rj]) {
                        if (l.gen != g) {
                            out.push_back(l);
                        } else if (l.sign > 0) {
                            out.insert(out.end(), g_pos.begin(), g_pos.end());
                        } else {
                            Word gi = inverse(g_pos);
                            out.insert(out.end(), gi.begin(), gi.end());
                        }
                    }
                    cost += static_cast<long long>(out.size());
                    next.push_back(free_reduce(out));
                }
                if (!spend(cost))
                    return SimplifyVerdict::unknown;
                p.relators = std::move(next);
                p.generators.erase(std::find(p.generators.begin(), p.generators.end(), g));
                progress = true;
                break;
            }
        }
        if (progress)
            continue;

        // greedy shortening products r_i <- r_i * r_j^{+-1}
        for (std::size_t i = 0; i < p.relators.size() && !progress; ++i)
            for (std::size_t j = 0; j < p.relators.size() && !progress; ++j) {
                if (i == j)
                    continue;
                for (int s : {1, -1}) {
                    Word cand = cyclic_reduce(
                        concat(p.relators[i], s > 0 ? p.relators[j] : inverse(p.relators[j])));
                    if (cand.size() < p.relators[i].size()) {
                        if (!spend(static_cast<long long>(cand.size()) + 1))
                            return SimplifyVerdict::unknown;
                        p.relators[i] = cand;
                        progress = true;
                        break;
                    }
                }
            }
    }
    if (p.generators.empty())
        return SimplifyVerdict::trivial;
    return SimplifyVerdict::unknown;
}

// --- Nucleus verification ------------------------------------------------------

enum class CondStatus { proved, failed, assumed, unknown };

inline const char* to_string(CondStatus s) {
    switch (s) {
        case CondStatus::proved: return "proved";
        case CondStatus::failed: return "failed";
        case CondStatus::assumed: return "assumed";
        default: return "unknown";
    }
}

struct NucleusReport {
    CondStatus simply_connected = CondStatus::unknown;   // pi_1(N) = 1
    CondStatus homology_rank2 = CondStatus::unknown;     // H2 = Z^2, unimodular, dS a sphere
    CondStatus c_embedded_torus = CondStatus::unknown;   // marked cusp with [T]^2 = 0
    CondStatus divisor = CondStatus::unknown;            // d_T = content of [T]
    CondStatus peripheral = CondStatus::unknown;         // surjectivity onto pi_1(N - T)
    Int d_T = 0;
    std::vector<std::string> notes;

    bool all_proved() const {
        return simply_connected == CondStatus::proved && homology_rank2 == CondStatus::proved &&
               c_embedded_torus == CondStatus::proved && divisor == CondStatus::proved &&
               peripheral == CondStatus::proved;
    }
    bool no_failures() const {
        auto ok = [](CondStatus s) { return s != CondStatus::failed; };
        return ok(simply_connected) && ok(homology_rank2) && ok(c_embedded_torus) &&
               ok(divisor) && ok(peripheral);
    }
};

// Extracts the marked sub-handlebody. The sub-diagram must be self-contained:
// its words stay on marked 1-handles.
inline Handlebody sub_handlebody(const Handlebody& x, const NucleusMarker& m) {
    Handlebody n;
    n.one_handles = m.sub_one_handles;
    std::set<std::string> ones(m.sub_one_handles.begin(), m.sub_one_handles.end());
    for (const auto& name : m.sub_two_handles) {
        TwoHandle h = x.two(name);
        for (const Letter& l : h.attaching_word)
            require(ones.count(l.gen), "InconsistentMarker",
                    "marked 2-handle '" + name + "' runs over an unmarked 1-handle");
        std::map<std::string, long long> kept;
        std::set<std::string> subs(m.sub_two_handles.begin(), m.sub_two_handles.end());
        for (const auto& [other, v] : h.linking)
            if (subs.count(other))
                kept[other] = v;
        h.linking = std::move(kept);
        n.two_handles.push_back(std::move(h));
    }
    return n;
}

// A cusp sub-diagram in the shape the built-in constructors emit: one
// 0-framed 2-handle of declared Seifert genus 1 carrying the fiber class.
inline bool cusp_pattern_matches(const Handlebody& x, const NucleusMarker& m) {
    if (m.torus_handles.size() != 1)
        return false;
    const TwoHandle& h = x.two(m.torus_handles[0]);
    return h.framing == 0 && h.seifert_genus && *h.seifert_genus == 1 &&
           h.attaching_word.empty();
}

inline void check_marker(const Handlebody& x, const NucleusMarker& m) {
    x.validate();
    require(!m.class_T.empty(), "InconsistentMarker", "marker has empty class_T");
    require(in_kernel(x, m.class_T), "InconsistentMarker", "class_T is not a cycle");
    if (m.class_S) {
        require(in_kernel(x, *m.class_S), "InconsistentMarker", "class_S is not a cycle");
        std::vector<Int> t = dense_class(x, m.class_T);
        auto [d, that] = divisibility_split(t);
        // S . T_hat = 1
        Int pair = 0;
        std::vector<Int> s = dense_class(x, *m.class_S);
        IntMatrix q = x.linking_matrix();
        for (std::size_t i = 0; i < q.rows; ++i)
            for (std::size_t j = 0; j < q.cols; ++j)
                pair += s[i] * q.at(i, j) * that[j];
        require(pair == 1, "InconsistentMarker", "class_S pairs with T_hat by " + pair.str() +
                                                     ", expected 1");
    }
}

// Per-condition report for the nucleus definition. Conditions with no
// algorithmic content for user diagrams degrade to `assumed`, never silently.
inline NucleusReport verify_nucleus(const Handlebody& x, const NucleusMarker& m,
                                    long long tietze_budget = 10000) {
    check_marker(x, m);
    NucleusReport rep;

    Handlebody n = sub_handlebody(x, m);
    HomologyReport h = homology(n);

    // (i) simple connectivity
    if (!h.h1.empty()) {
        rep.simply_connected = CondStatus::failed;
        rep.notes.push_back("H1 of the sub-handlebody is nonzero");
    } else if (n.one_handles.empty()) {
        rep.simply_connected = CondStatus::proved;
    } else {
        switch (simplify_presentation(pi1_presentation(n), tietze_budget)) {
            case SimplifyVerdict::trivial: rep.simply_connected = CondStatus::proved; break;
            case SimplifyVerdict::nontrivial_abelianization:
                rep.simply_connected = CondStatus::failed;
                break;
            default:
                rep.simply_connected = CondStatus::unknown;
                rep.notes.push_back("Tietze budget exhausted on pi_1");
        }
    }

    // (ii) H2 = Z^2 with unimodular form; boundary a homology sphere
    bool rank_ok = h.h2_free_rank == 2 && h.h2_torsion.empty();
    bool uni_ok = h.form.unimodular;
    bool bdry_ok = h.boundary_homology_sphere();
    rep.homology_rank2 = (rank_ok && uni_ok && bdry_ok) ? CondStatus::proved : CondStatus::failed;
    if (!rank_ok)
        rep.notes.push_back("H2 is not Z^2");
    if (!uni_ok)
        rep.notes.push_back("intersection form is not unimodular");
    if (!bdry_ok)
        rep.notes.push_back("boundary is not a homology sphere");

    // (iii) marked c-embedded torus, structurally
    Int t_sq = class_pairing(x, m.class_T, m.class_T);
    if (t_sq != 0) {
        rep.c_embedded_torus = CondStatus::failed;
        rep.notes.push_back("[T]^2 = " + t_sq.str() + ", expected 0");
    } else if (m.provenance == MarkerProvenance::builtin ||
               m.provenance == MarkerProvenance::log_transform || cusp_pattern_matches(x, m)) {
        rep.c_embedded_torus = CondStatus::proved;
    } else {
        rep.c_embedded_torus = CondStatus::assumed;
        rep.notes.push_back("c-embedding of the marked torus is declared, not derived");
    }

    // (iv) divisor = content of [T]
    auto [d, that] = divisibility_split(dense_class(x, m.class_T));
    rep.d_T = d;
    rep.divisor = (d == m.divisor_dT) ? CondStatus::proved : CondStatus::failed;
    if (rep.divisor == CondStatus::failed)
        rep.notes.push_back("declared divisor " + std::to_string(m.divisor_dT) +
                            " != content " + d.str());

    // (v) peripheral surjectivity: constructor-guaranteed only
    if (m.provenance == MarkerProvenance::builtin ||
        m.provenance == MarkerProvenance::log_transform)
        rep.peripheral = CondStatus::proved;
    else
        rep.peripheral = m.pi1_status == PiStatus::assumed ? CondStatus::assumed
                                                           : CondStatus::unknown;
    return rep;
}

// --- Built-in constructors -----------------------------------------------------

namespace fronts {
// Standard Legendrian right trefoil front, tb = 1, r = 0: two stacked left
// cusps, three coherent crossings, two right cusps.
inline constexpr const char* trefoil =
    "LC 0\nLC 2\nX+ 1\nX+ 1\nX+ 1\nRCd 0\nRCu 0\n";
// Standard Legendrian unknot front, tb = -1, r = 0.
inline constexpr const char* unknot = "LC 0\nRCd 0\n";
}  // namespace fronts

// Gompf nucleus G(n): 0-framed trefoil linking a -n-framed unknot once.
// For n >= 2 the handles carry the Stein model's Legendrian data; the unknot
// is stabilized from tb = -1 by alternating zig-zags starting "down".
inline Handlebody gompf_nucleus(long long n) {
    require(n >= 1, "BadParameter", "Gompf nucleus needs n >= 1");
    Handlebody x;
    TwoHandle tre;
    tre.name = "trefoil";
    tre.framing = 0;
    tre.seifert_genus = 1;
    TwoHandle unk;
    unk.name = "unknot";
    unk.framing = -n;
    unk.seifert_genus = 0;
    if (n >= 2) {
        tre.legendrian = LegendrianData{1, 0};
        tre.front = fronts::trefoil;
        long long zigzags = n - 2;
        // alternating stabilizations starting "down": r walks -1, 0, -1, ...
        unk.legendrian = LegendrianData{-1 - zigzags, -(zigzags % 2)};
        if (n == 2)
            unk.front = fronts::unknot;
    }
    x.two_handles = {tre, unk};
    x.set_lk("trefoil", "unknot", 1);

    NucleusMarker m;
    m.id = "nucleus";
    m.torus_handles = {"trefoil"};
    m.sub_two_handles = {"trefoil", "unknot"};
    m.class_T = {{"trefoil", 1}};
    m.class_S = {{{"unknot", 1}}};
    m.divisor_dT = 1;
    m.provenance = MarkerProvenance::builtin;
    m.pi1_status = PiStatus::proved;
    x.markers.push_back(m);
    x.log("gompf_nucleus", {{"n", std::to_string(n)}});
    return x;
}

// Cusp neighborhood: a single 0-framed trefoil handle. Not a nucleus (H2 has
// rank 1); the marker records the fiber torus only.
inline Handlebody cusp_neighborhood() {
    Handlebody x;
    TwoHandle tre;
    tre.name = "trefoil";
    tre.framing = 0;
    tre.seifert_genus = 1;
    tre.legendrian = LegendrianData{1, 0};
    tre.front = fronts::trefoil;
    x.two_handles = {tre};

    NucleusMarker m;
    m.id = "cusp";
    m.torus_handles = {"trefoil"};
    m.sub_two_handles = {"trefoil"};
    m.class_T = {{"trefoil", 1}};
    m.divisor_dT = 1;
    m.provenance = MarkerProvenance::builtin;
    m.pi1_status = PiStatus::proved;
    x.markers.push_back(m);
    x.log("cusp_neighborhood", {});
    return x;
}

// Boundary sum: concatenated handle lists, zero cross-linking. Name clashes
// on the right operand are resolved deterministically with _2, _3, ...
inline Handlebody boundary_sum(const Handlebody& a, const Handlebody& b) {
    a.validate();
    b.validate();
    Handlebody x = a;
    std::set<std::string> used;
    for (const auto& n : x.one_handles)
        used.insert(n);
    for (const auto& h : x.two_handles)
        used.insert(h.name);

    std::map<std::string, std::string> rename;
    auto fresh = [&used](const std::string& base) {
        if (!used.count(base)) {
            used.insert(base);
            return base;
        }
        for (int k = 2;; ++k) {
            std::string cand = base + "_" + std::to_string(k);
            if (!used.count(cand)) {
                used.insert(cand);
                return cand;
            }
        }
    };
    auto renamed = [&rename](const std::string& n) {
        auto it = rename.find(n);
        return it == rename.end() ? n : it->second;
    };

    for (const auto& n : b.one_handles) {
        std::string nn = fresh(n);
        if (nn != n)
            rename[n] = nn;
        x.one_handles.push_back(nn);
    }
    for (const auto& h : b.two_handles) {
        std::string nn = fresh(h.name);
        if (nn != h.name)
            rename[h.name] = nn;
    }
    for (const auto& h : b.two_handles) {
        TwoHandle c = h;
        c.name = renamed(h.name);
        for (Letter& l : c.attaching_word)
            l.gen = renamed(l.gen);
        std::map<std::string, long long> links;
        for (const auto& [other, v] : h.linking)
            links[renamed(other)] = v;
        c.linking = std::move(links);
        x.two_handles.push_back(std::move(c));
    }
    for (const auto& m : b.markers) {
        NucleusMarker c = m;
        for (auto& n : c.torus_handles)
            n = renamed(n);
        for (auto& n : c.sub_two_handles)
            n = renamed(n);
        for (auto& n : c.sub_one_handles)
            n = renamed(n);
        std::map<std::string, long long> t;
        for (const auto& [k, v] : m.class_T)
            t[renamed(k)] = v;
        c.class_T = std::move(t);
        if (m.class_S) {
            std::map<std::string, long long> s;
            for (const auto& [k, v] : *m.class_S)
                s[renamed(k)] = v;
            c.class_S = std::move(s);
        }
        // keep marker ids unique as well
        std::set<std::string> mids;
        for (const auto& mm : x.markers)
            mids.insert(mm.id);
        while (mids.count(c.id))
            c.id += "'";
        x.markers.push_back(std::move(c));
    }
    for (const auto& r : b.cork_registry) {
        CorkRecord c = r;
        if (!c.target.empty())
            c.target = renamed(c.target);
        c.aux_handle = renamed(c.aux_handle);
        c.one_handle = renamed(c.one_handle);
        std::set<std::string> cids;
        for (const auto& cc : x.cork_registry)
            cids.insert(cc.id);
        while (cids.count(c.id))
            c.id += "'";
        x.cork_registry.push_back(std::move(c));
    }
    x.log("boundary_sum", {});
    x.validate();
    return x;
}

}  // namespace nf
