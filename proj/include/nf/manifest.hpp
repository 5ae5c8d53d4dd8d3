#pragma once

// External document formats: the handlebody manifest ("nf-manifest/1"),
// certificate documents ("nf-cert/1") and genus-ledger files ("nf-ledger/1").
// Canonical encoding is UTF-8 JSON with sorted object keys and two-space
// indentation; serialize(parse(text)) is byte-stable.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "nf/errors.hpp"
#include "nf/exotica.hpp"
#include "nf/handlebody.hpp"
#include "nf/legendrian.hpp"
#include "nf/surgery.hpp"

namespace nf {

using json = nlohmann::json;

inline constexpr const char* manifest_schema = "nf-manifest/1";
inline constexpr const char* cert_schema = "nf-cert/1";
inline constexpr const char* ledger_schema = "nf-ledger/1";

inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

// FNV-1a 64-bit content hash, hex-encoded: an integrity tag for embedded
// documents, not a cryptographic commitment.
inline std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return "fnv1a64:" + os.str();
}

// --- words and handles ------------------------------------------------------

inline json word_to_json(const Word& w) {
    json a = json::array();
    for (const Letter& l : w)
        a.push_back(l.sign > 0 ? l.gen : "-" + l.gen);
    return a;
}

inline Word word_from_json(const json& a) {
    require(a.is_array(), "MalformedManifest", "attaching word must be an array");
    Word w;
    for (const auto& t : a) {
        require(t.is_string(), "MalformedManifest", "word letters are strings");
        std::string s = t.get<std::string>();
        require(!s.empty(), "MalformedManifest", "empty word letter");
        if (s[0] == '-')
            w.push_back({s.substr(1), -1});
        else
            w.push_back({s, 1});
    }
    return w;
}

inline json to_json(const TwoHandle& h) {
    json j;
    j["name"] = h.name;
    j["word"] = word_to_json(h.attaching_word);
    j["framing"] = h.framing;
    json links = json::object();
    for (const auto& [other, v] : h.linking)
        links[other] = v;
    j["linking"] = links;
    if (h.legendrian)
        j["legendrian"] = {{"tb", h.legendrian->tb}, {"r", h.legendrian->r}};
    if (h.seifert_genus)
        j["seifert_genus"] = *h.seifert_genus;
    if (h.front)
        j["front"] = *h.front;
    // redundant cross-check field; validated on load when present
    json run = json::object();
    for (const auto& [g, e] : abelianize(h.attaching_word))
        run[g] = e;
    j["run_over"] = run;
    return j;
}

inline TwoHandle two_handle_from_json(const json& j) {
    TwoHandle h;
    h.name = j.at("name").get<std::string>();
    h.attaching_word = word_from_json(j.at("word"));
    h.framing = j.at("framing").get<long long>();
    for (const auto& [k, v] : j.at("linking").items())
        h.linking[k] = v.get<long long>();
    if (j.contains("legendrian") && !j["legendrian"].is_null())
        h.legendrian = LegendrianData{j["legendrian"].at("tb").get<long long>(),
                                      j["legendrian"].at("r").get<long long>()};
    if (j.contains("seifert_genus") && !j["seifert_genus"].is_null())
        h.seifert_genus = j["seifert_genus"].get<long long>();
    if (j.contains("front") && !j["front"].is_null())
        h.front = j["front"].get<std::string>();
    if (j.contains("run_over")) {
        std::map<std::string, long long> declared;
        for (const auto& [k, v] : j["run_over"].items())
            declared[k] = v.get<long long>();
        require(declared == abelianize(h.attaching_word), "MalformedManifest",
                "declared run_over of '" + h.name + "' disagrees with the attaching word");
    }
    return h;
}

// --- markers, corks, logs -----------------------------------------------------

inline json sparse_class_to_json(const std::map<std::string, long long>& cls) {
    json j = json::object();
    for (const auto& [k, v] : cls)
        j[k] = v;
    return j;
}

inline std::map<std::string, long long> sparse_class_from_json(const json& j) {
    std::map<std::string, long long> cls;
    for (const auto& [k, v] : j.items())
        cls[k] = v.get<long long>();
    return cls;
}

inline const char* to_string(MarkerProvenance p) {
    switch (p) {
        case MarkerProvenance::builtin: return "builtin";
        case MarkerProvenance::log_transform: return "log_transform";
        default: return "declared";
    }
}

inline MarkerProvenance provenance_from_string(const std::string& s) {
    if (s == "builtin")
        return MarkerProvenance::builtin;
    if (s == "log_transform")
        return MarkerProvenance::log_transform;
    if (s == "declared")
        return MarkerProvenance::declared;
    fail("MalformedManifest", "unknown provenance '" + s + "'");
}

inline PiStatus pi_status_from_string(const std::string& s) {
    if (s == "proved")
        return PiStatus::proved;
    if (s == "assumed")
        return PiStatus::assumed;
    if (s == "unknown")
        return PiStatus::unknown;
    fail("MalformedManifest", "unknown pi1 status '" + s + "'");
}

inline json to_json(const NucleusMarker& m) {
    json j;
    j["id"] = m.id;
    j["torus_handles"] = m.torus_handles;
    j["sub_two_handles"] = m.sub_two_handles;
    j["sub_one_handles"] = m.sub_one_handles;
    j["class_T"] = sparse_class_to_json(m.class_T);
    if (m.class_S)
        j["class_S"] = sparse_class_to_json(*m.class_S);
    j["divisor_dT"] = m.divisor_dT;
    j["provenance"] = to_string(m.provenance);
    j["pi1_status"] = to_string(m.pi1_status);
    return j;
}

inline NucleusMarker marker_from_json(const json& j) {
    NucleusMarker m;
    m.id = j.at("id").get<std::string>();
    m.torus_handles = j.at("torus_handles").get<std::vector<std::string>>();
    m.sub_two_handles = j.at("sub_two_handles").get<std::vector<std::string>>();
    m.sub_one_handles = j.at("sub_one_handles").get<std::vector<std::string>>();
    m.class_T = sparse_class_from_json(j.at("class_T"));
    if (j.contains("class_S") && !j["class_S"].is_null())
        m.class_S = sparse_class_from_json(j["class_S"]);
    m.divisor_dT = j.at("divisor_dT").get<long long>();
    m.provenance = provenance_from_string(j.at("provenance").get<std::string>());
    m.pi1_status = pi_status_from_string(j.at("pi1_status").get<std::string>());
    return m;
}

inline json to_json(const CorkRecord& c) {
    json j;
    j["id"] = c.id;
    j["sign"] = std::string(1, c.sign);
    j["p"] = c.p;
    j["target"] = c.target;
    j["aux_handle"] = c.aux_handle;
    j["one_handle"] = c.one_handle;
    if (c.saved_front)
        j["saved_front"] = *c.saved_front;
    return j;
}

inline CorkRecord cork_from_json(const json& j) {
    CorkRecord c;
    c.id = j.at("id").get<std::string>();
    std::string sign = j.at("sign").get<std::string>();
    require(sign == "+" || sign == "-", "MalformedManifest", "cork sign must be + or -");
    c.sign = sign[0];
    c.p = j.at("p").get<long long>();
    c.target = j.at("target").get<std::string>();
    c.aux_handle = j.at("aux_handle").get<std::string>();
    c.one_handle = j.at("one_handle").get<std::string>();
    if (j.contains("saved_front") && !j["saved_front"].is_null())
        c.saved_front = j["saved_front"].get<std::string>();
    return c;
}

inline json to_json(const OpLogEntry& e) {
    json args = json::array();
    for (const auto& [k, v] : e.args)
        args.push_back(json::array({k, v}));
    return json{{"op", e.op}, {"args", args}};
}

inline OpLogEntry op_log_entry_from_json(const json& j) {
    OpLogEntry e;
    e.op = j.at("op").get<std::string>();
    for (const auto& kv : j.at("args"))
        e.args.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
    return e;
}

// --- the manifest ---------------------------------------------------------------

inline json to_json(const Handlebody& x) {
    json j;
    j["schema"] = manifest_schema;
    j["one_handles"] = x.one_handles;
    json twos = json::array();
    for (const auto& h : x.two_handles)
        twos.push_back(to_json(h));
    j["two_handles"] = twos;
    json markers = json::array();
    for (const auto& m : x.markers)
        markers.push_back(to_json(m));
    j["markers"] = markers;
    json corks = json::array();
    for (const auto& c : x.cork_registry)
        corks.push_back(to_json(c));
    j["cork_registry"] = corks;
    json log = json::array();
    for (const auto& e : x.op_log)
        log.push_back(to_json(e));
    j["op_log"] = log;
    return j;
}

inline Handlebody handlebody_from_json(const json& j) {
    require(j.is_object(), "MalformedManifest", "manifest must be a JSON object");
    require(j.value("schema", "") == manifest_schema, "MalformedManifest",
            "expected schema " + std::string(manifest_schema));
    Handlebody x;
    x.one_handles = j.at("one_handles").get<std::vector<std::string>>();
    for (const auto& h : j.at("two_handles"))
        x.two_handles.push_back(two_handle_from_json(h));
    for (const auto& m : j.at("markers"))
        x.markers.push_back(marker_from_json(m));
    for (const auto& c : j.at("cork_registry"))
        x.cork_registry.push_back(cork_from_json(c));
    for (const auto& e : j.at("op_log"))
        x.op_log.push_back(op_log_entry_from_json(e));
    x.validate();
    return x;
}

// --- ledgers and reports -----------------------------------------------------------

inline json to_json(const GenusLedger& l) {
    json j;
    j["schema"] = ledger_schema;
    json a = json::object(), b = json::object();
    for (const auto& [k, v] : l.g_s_log)
        a[std::to_string(k)] = v;
    for (const auto& [k, v] : l.g_s_knot)
        b[std::to_string(k)] = v;
    j["g_S_log"] = a;
    j["g_S_knot"] = b;
    return j;
}

inline GenusLedger ledger_from_json(const json& j) {
    require(j.value("schema", "") == ledger_schema, "MalformedManifest",
            "expected schema " + std::string(ledger_schema));
    GenusLedger l;
    if (j.contains("g_S_log"))
        for (const auto& [k, v] : j["g_S_log"].items())
            l.g_s_log[std::stoll(k)] = v.get<long long>();
    if (j.contains("g_S_knot"))
        for (const auto& [k, v] : j["g_S_knot"].items())
            l.g_s_knot[std::stoll(k)] = v.get<long long>();
    return l;
}

inline json invariant_factors_to_json(const std::vector<Int>& f) {
    json a = json::array();
    for (const Int& x : f)
        a.push_back(to_int64(x));
    return a;
}

inline json to_json(const FormClass& f) {
    return json{{"rank", f.rank},
                {"signature", f.signature},
                {"parity", to_string(f.parity)},
                {"unimodular", f.unimodular},
                {"definiteness", to_string(f.definiteness)}};
}

inline json to_json(const HomologyReport& r) {
    return json{{"H1", invariant_factors_to_json(r.h1)},
                {"H2_free_rank", r.h2_free_rank},
                {"H2_torsion", invariant_factors_to_json(r.h2_torsion)},
                {"form", to_json(r.form)},
                {"boundary_H1", invariant_factors_to_json(r.boundary_h1)}};
}

inline FormClass form_class_from_json(const json& j) {
    FormClass f;
    f.rank = j.at("rank").get<int>();
    f.signature = j.at("signature").get<int>();
    f.parity = j.at("parity").get<std::string>() == "even" ? Parity::even : Parity::odd;
    f.unimodular = j.at("unimodular").get<bool>();
    std::string d = j.at("definiteness").get<std::string>();
    f.definiteness = d == "positive"   ? Definiteness::positive
                     : d == "negative" ? Definiteness::negative
                                       : Definiteness::indefinite;
    return f;
}

inline std::vector<Int> invariant_factors_from_json(const json& a) {
    std::vector<Int> f;
    for (const auto& x : a)
        f.push_back(Int(x.get<long long>()));
    return f;
}

inline HomologyReport homology_report_from_json(const json& j) {
    HomologyReport r;
    r.h1 = invariant_factors_from_json(j.at("H1"));
    r.h2_free_rank = j.at("H2_free_rank").get<std::size_t>();
    r.h2_torsion = invariant_factors_from_json(j.at("H2_torsion"));
    r.form = form_class_from_json(j.at("form"));
    r.boundary_h1 = invariant_factors_from_json(j.at("boundary_H1"));
    return r;
}

inline json to_json(const NucleusReport& r) {
    return json{{"simply_connected", to_string(r.simply_connected)},
                {"homology_rank2", to_string(r.homology_rank2)},
                {"c_embedded_torus", to_string(r.c_embedded_torus)},
                {"divisor", to_string(r.divisor)},
                {"peripheral", to_string(r.peripheral)},
                {"d_T", to_int64(r.d_T)},
                {"notes", r.notes},
                {"all_proved", r.all_proved()}};
}

inline json to_json(const SteinCheckResult& r) {
    json v = json::array();
    for (const auto& x : r.violations)
        v.push_back(json{{"handle", x.handle}, {"framing", x.framing}, {"tb", x.tb}});
    return json{{"ok", r.ok()}, {"violations", v}};
}

inline json to_json(const ObstructionRecord& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back(json{{"id", c.id}, {"ok", c.ok}, {"note", c.note}});
    json j{{"op", r.op},
           {"obstruction", r.obstruction},
           {"q", r.q},
           {"m", r.m},
           {"two_qm", to_int64(r.two_qm)},
           {"bound", 4},
           {"both_orientations", r.both_orientations},
           {"checks", checks}};
    if (!r.reason.empty())
        j["reason"] = r.reason;
    return j;
}

// --- knot specs ----------------------------------------------------------------------

inline json to_json(const KnotSpec& k) {
    switch (k.family) {
        case KnotSpec::Family::unknot: return json{{"family", "unknot"}};
        case KnotSpec::Family::torus2: return json{{"family", "torus"}, {"q", k.parameter}};
        case KnotSpec::Family::twist: return json{{"family", "twist"}, {"k", k.parameter}};
        case KnotSpec::Family::seifert: {
            json rows = json::array();
            for (std::size_t i = 0; i < k.seifert.rows; ++i) {
                json row = json::array();
                for (std::size_t j2 = 0; j2 < k.seifert.cols; ++j2)
                    row.push_back(to_int64(k.seifert.at(i, j2)));
                rows.push_back(row);
            }
            return json{{"family", "seifert"}, {"matrix", rows}};
        }
    }
    fail("BadParameter", "unreachable knot family");
}

inline KnotSpec knot_from_json(const json& j) {
    std::string fam = j.at("family").get<std::string>();
    if (fam == "unknot")
        return KnotSpec::unknot();
    if (fam == "torus")
        return KnotSpec::torus(2, j.at("q").get<long long>());
    if (fam == "twist")
        return KnotSpec::twist(j.at("k").get<long long>());
    if (fam == "seifert") {
        const json& rows = j.at("matrix");
        IntMatrix v(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t i = 0; i < v.rows; ++i)
            for (std::size_t j2 = 0; j2 < v.cols; ++j2)
                v.at(i, j2) = rows[i][j2].get<long long>();
        return KnotSpec::from_seifert(v);
    }
    fail("MalformedManifest", "unknown knot family '" + fam + "'");
}

// "unknot" | "torus(2,7)" | "twist(3)" for the command line
inline KnotSpec parse_knot_spec(const std::string& s) {
    if (s == "unknot")
        return KnotSpec::unknot();
    auto paren = s.find('(');
    require(paren != std::string::npos && s.back() == ')', "BadParameter",
            "knot spec must be unknot, torus(2,q) or twist(k)");
    std::string head = s.substr(0, paren);
    std::string args = s.substr(paren + 1, s.size() - paren - 2);
    if (head == "torus") {
        auto comma = args.find(',');
        require(comma != std::string::npos, "BadParameter", "torus knots need two parameters");
        return KnotSpec::torus(std::stoll(args.substr(0, comma)),
                               std::stoll(args.substr(comma + 1)));
    }
    if (head == "twist")
        return KnotSpec::twist(std::stoll(args));
    fail("BadParameter", "unknown knot family '" + head + "'");
}

// --- certificates ----------------------------------------------------------------------

inline json to_json(const BasicClassSet& b) {
    json classes = json::array();
    for (const auto& [v, c] : b.classes) {
        json vec = json::array();
        for (const Int& x : v)
            vec.push_back(to_int64(x));
        classes.push_back(json{{"vector", vec}, {"coeff", to_int64(c)}});
    }
    return json{{"rank", b.rank}, {"classes", classes}};
}

inline BasicClassSet basic_set_from_json(const json& j) {
    BasicClassSet b;
    b.rank = j.at("rank").get<std::size_t>();
    for (const auto& c : j.at("classes")) {
        std::vector<Int> v;
        for (const auto& x : c.at("vector"))
            v.push_back(Int(x.get<long long>()));
        b.classes.emplace_back(std::move(v), Int(c.at("coeff").get<long long>()));
    }
    b.canonicalize();
    return b;
}

inline json matrix_to_json(const IntMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols; ++j)
            row.push_back(to_int64(m.at(i, j)));
        rows.push_back(row);
    }
    return json{{"rows", m.rows}, {"cols", m.cols}, {"entries", rows}};
}

inline IntMatrix matrix_from_json(const json& j) {
    IntMatrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    const json& rows = j.at("entries");
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t c = 0; c < m.cols; ++c)
            m.at(i, c) = rows[i][c].get<long long>();
    return m;
}

inline json to_json(const Obligation& o) {
    return json{{"id", o.id},
                {"lhs", to_int64(o.lhs)},
                {"relation", o.rel},
                {"rhs", to_int64(o.rhs)},
                {"holds", o.holds}};
}

inline Obligation obligation_from_json(const json& j) {
    Obligation o;
    o.id = j.at("id").get<std::string>();
    o.lhs = j.at("lhs").get<long long>();
    o.rel = j.at("relation").get<std::string>();
    o.rhs = j.at("rhs").get<long long>();
    o.holds = j.at("holds").get<bool>();
    return o;
}

inline json to_json(const Assumption& a) {
    return json{{"id", a.id}, {"status", a.status}, {"note", a.note}};
}

inline Assumption assumption_from_json(const json& j) {
    return Assumption{j.at("id").get<std::string>(), j.at("status").get<std::string>(),
                      j.at("note").get<std::string>()};
}

inline json certificate_to_json(const ExoticaCertificate& c,
                                const std::optional<json>& input_manifest = std::nullopt) {
    json j;
    j["schema"] = cert_schema;
    j["construction"] = c.construction;
    j["d_T"] = c.d_T;
    j["s"] = to_int64(c.s);
    j["nucleus_parity"] = to_string(c.nucleus_parity);
    j["strengthened"] = c.strengthened;
    j["simple_type"] = c.simple_type;
    j["g_S1"] = c.g_s1;
    j["keys"] = c.keys;
    json u = json::array();
    for (const auto& [sq, gb] : c.u_data)
        u.push_back(json{{"square", to_int64(sq)}, {"genus", gb}});
    j["u"] = u;
    json ledger = json::object();
    for (const auto& [k, v] : c.ledger_used)
        ledger[std::to_string(k)] = v;
    j["ledger_used"] = ledger;
    j["seed"] = to_json(c.seed);
    if (c.member_report)
        j["member_report"] = to_json(*c.member_report);
    json members = json::array();
    for (const auto& m : c.members)
        members.push_back(json{{"name", m.name},
                               {"key", m.key},
                               {"s_member", to_int64(m.s_member)},
                               {"parity", to_string(m.parity)},
                               {"form_iso", matrix_to_json(m.form_iso)},
                               {"basics", to_json(m.basics)}});
    j["members"] = members;
    json obligations = json::array();
    for (const auto& o : c.obligations)
        obligations.push_back(to_json(o));
    j["obligations"] = obligations;
    json assumptions = json::array();
    for (const auto& a : c.assumptions)
        assumptions.push_back(to_json(a));
    j["assumptions"] = assumptions;
    j["query"] = json{{"q", matrix_to_json(c.query.q)},
                      {"d", invariant_factors_to_json(c.query.d)},
                      {"g", invariant_factors_to_json(c.query.g)},
                      {"lambda0", c.query.lambda0}};
    j["zigzag_policy"] = c.zigzag_policy;
    j["verdict"] = c.verdict;
    if (input_manifest) {
        std::string bytes = canonical_dump(*input_manifest);
        j["input"] = json{{"hash", content_hash(bytes)}, {"manifest", *input_manifest}};
    }
    return j;
}

inline ExoticaCertificate certificate_from_json(const json& j) {
    require(j.is_object(), "MalformedCertificate", "certificate must be a JSON object");
    require(j.value("schema", "") == cert_schema, "MalformedCertificate",
            "expected schema " + std::string(cert_schema));
    ExoticaCertificate c;
    try {
        c.construction = j.at("construction").get<std::string>();
        c.d_T = j.at("d_T").get<long long>();
        c.s = j.at("s").get<long long>();
        c.nucleus_parity =
            j.at("nucleus_parity").get<std::string>() == "even" ? Parity::even : Parity::odd;
        c.strengthened = j.at("strengthened").get<bool>();
        c.simple_type = j.at("simple_type").get<bool>();
        c.g_s1 = j.at("g_S1").get<long long>();
        c.keys = j.at("keys").get<std::vector<long long>>();
        for (const auto& u : j.at("u"))
            c.u_data.emplace_back(Int(u.at("square").get<long long>()),
                                  u.at("genus").get<long long>());
        for (const auto& [k, v] : j.at("ledger_used").items())
            c.ledger_used[std::stoll(k)] = v.get<long long>();
        c.seed = basic_set_from_json(j.at("seed"));
        for (const auto& m : j.at("members")) {
            MemberLedger mem;
            mem.name = m.at("name").get<std::string>();
            mem.key = m.at("key").get<long long>();
            mem.s_member = m.at("s_member").get<long long>();
            mem.parity = m.at("parity").get<std::string>() == "even" ? Parity::even : Parity::odd;
            mem.form_iso = matrix_from_json(m.at("form_iso"));
            mem.basics = basic_set_from_json(m.at("basics"));
            c.members.push_back(std::move(mem));
        }
        for (const auto& o : j.at("obligations"))
            c.obligations.push_back(obligation_from_json(o));
        for (const auto& a : j.at("assumptions"))
            c.assumptions.push_back(assumption_from_json(a));
        c.query.q = matrix_from_json(j.at("query").at("q"));
        for (const auto& x : j.at("query").at("d"))
            c.query.d.push_back(Int(x.get<long long>()));
        for (const auto& x : j.at("query").at("g"))
            c.query.g.push_back(Int(x.get<long long>()));
        c.query.lambda0 = j.at("query").at("lambda0").get<std::size_t>();
        if (j.contains("member_report"))
            c.member_report = homology_report_from_json(j.at("member_report"));
        c.zigzag_policy = j.at("zigzag_policy").get<std::string>();
        c.verdict = j.at("verdict").get<std::string>();
    } catch (const json::exception& e) {
        fail("MalformedCertificate", e.what());
    }
    if (j.contains("input")) {
        std::string bytes = canonical_dump(j.at("input").at("manifest"));
        require(content_hash(bytes) == j.at("input").at("hash").get<std::string>(),
                "MalformedCertificate", "embedded manifest hash mismatch");
    }
    return c;
}

// --- file helpers -----------------------------------------------------------------------

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "IoError", "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail("ParseError", std::string("invalid JSON in '") + path + "': " + e.what());
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), "IoError", "cannot write '" + path + "'");
    out << bytes;
}

inline void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, canonical_dump(j));
}

}  // namespace nf
