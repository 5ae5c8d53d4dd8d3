// nf: build and rewrite 4-dimensional 2-handlebodies, run the exotica
// pipelines, and emit or check machine-verifiable certificates.
//
// Exit codes: 0 success / accept / obstruction present; 1 reject / violations
// / no obstruction; 2 usage or parse error; 3 precondition violation.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nf/exotica.hpp"
#include "nf/legendrian.hpp"
#include "nf/manifest.hpp"
#include "nf/surgery.hpp"

namespace {

long long tietze_budget_from_env() {
    if (const char* env = std::getenv("NF_TIETZE_BUDGET"))
        return std::atoll(env);
    return 10000;
}

nf::Handlebody load_manifest(const std::string& path) {
    return nf::handlebody_from_json(nf::read_json_file(path));
}

nf::GenusLedger load_ledger(const std::string& path) {
    if (path.empty())
        return {};
    return nf::ledger_from_json(nf::read_json_file(path));
}

std::string default_marker(const nf::Handlebody& x, const std::string& requested) {
    if (!requested.empty())
        return requested;
    nf::require(!x.markers.empty(), "InvalidMarker", "manifest carries no nucleus marker");
    return x.markers.front().id;
}

void emit_manifest(const nf::Handlebody& x, const std::string& out) {
    if (out.empty())
        std::cout << nf::canonical_dump(nf::to_json(x));
    else
        nf::write_json_file(out, nf::to_json(x));
}

int run(int argc, char** argv) {
    CLI::App app{"nucleus calculus for 4-manifold handlebodies"};
    app.require_subcommand(1);

    std::string in_path, out_path, marker_id, ledger_path, knot_spec, handle, sign, op_kind;
    std::vector<std::string> cork_ids;
    std::string build_what, family_kind = "log", pipeline_kind = "stein-nonstein", outdir = ".";
    std::vector<std::string> sum_inputs;
    std::vector<long long> explicit_keys;
    long long n = 2, p = 1, m = 3, family_length = 3;
    bool strengthened = false, as_json = false, stamp = false;

    auto* build = app.add_subcommand("build", "construct a built-in handlebody");
    build->add_option("what", build_what, "gompf | cusp | sum")->required();
    build->add_option("inputs", sum_inputs, "manifests to boundary-sum (for sum)");
    build->add_option("--n", n, "parameter n for gompf");
    build->add_option("--out", out_path, "output manifest path");

    auto* homology_cmd = app.add_subcommand("homology", "homology report of a manifest");
    homology_cmd->add_option("manifest", in_path)->required();
    homology_cmd->add_flag("--json", as_json);

    auto* verify = app.add_subcommand("verify-nucleus", "per-condition nucleus report");
    verify->add_option("manifest", in_path)->required();
    verify->add_option("--marker", marker_id);

    auto* logt = app.add_subcommand("log-transform", "p-log transform along a marked nucleus");
    logt->add_option("manifest", in_path)->required();
    logt->add_option("--p", p, "multiplicity")->required();
    logt->add_option("--marker", marker_id);
    logt->add_option("--out", out_path);

    auto* knot = app.add_subcommand("knot-surgery", "knot surgery along a marked nucleus");
    knot->add_option("manifest", in_path)->required();
    knot->add_option("--knot", knot_spec, "unknot | torus(2,q) | twist(k)")->required();
    knot->add_option("--marker", marker_id);
    knot->add_option("--out", out_path);

    auto* wmod = app.add_subcommand("w-modify", "W+/W- modification of a 2-handle");
    wmod->add_option("manifest", in_path)->required();
    wmod->add_option("--handle", handle)->required();
    wmod->add_option("--sign", sign, "+ or -")->required();
    wmod->add_option("--p", p)->required();
    wmod->add_option("--out", out_path);

    auto* twist = app.add_subcommand("cork-twist", "twist a registered cork");
    twist->add_option("manifest", in_path)->required();
    twist->add_option("--cork", cork_ids, "cork id(s)")->required();
    twist->add_option("--out", out_path);

    auto* strip = app.add_subcommand("strip", "remove cork records and revert their effect");
    strip->add_option("manifest", in_path)->required();
    strip->add_option("--cork", cork_ids, "cork id(s)")->required();
    strip->add_option("--out", out_path);

    auto* steinify_cmd = app.add_subcommand("steinify", "add zig-zags until framing = tb - 1");
    steinify_cmd->add_option("manifest", in_path)->required();
    steinify_cmd->add_option("--out", out_path);

    auto* scheck = app.add_subcommand("stein-check", "check the Stein framing condition");
    scheck->add_option("manifest", in_path)->required();

    auto* genfam = app.add_subcommand("gen-family", "generate a family and its certificate");
    genfam->add_option("manifest", in_path)->required();
    genfam->add_option("--kind", family_kind, "log | knot");
    genfam->add_option("--n", n, "family length")->required();
    genfam->add_option("--ledger", ledger_path);
    genfam->add_option("--marker", marker_id);
    genfam->add_flag("--strengthened", strengthened);
    genfam->add_option("--out", out_path);

    auto* certify = app.add_subcommand("certify", "certify an explicitly given family");
    certify->add_option("manifest", in_path)->required();
    certify->add_option("--kind", family_kind, "log | knot");
    certify->add_option("--key", explicit_keys, "p values (log) or degrees (knot)")->required();
    certify->add_option("--ledger", ledger_path);
    certify->add_option("--marker", marker_id);
    certify->add_flag("--strengthened", strengthened);
    certify->add_option("--out", out_path);

    auto* checkc = app.add_subcommand("check-cert", "independently re-check a certificate");
    checkc->add_option("certificate", in_path)->required();

    auto* obstruct = app.add_subcommand("obstruct-stein", "non-Stein obstruction record");
    obstruct->add_option("manifest", in_path)->required();
    obstruct->add_option("--op", op_kind, "log | knot")->required();
    obstruct->add_option("--p", p, "multiplicity (log)");
    obstruct->add_option("--knot", knot_spec, "knot spec (knot)");
    obstruct->add_option("--m", m, "fiber-sphere intersection number (>= 3)");
    obstruct->add_option("--marker", marker_id);

    auto* pipeline = app.add_subcommand("pipeline", "run a full construction pipeline");
    pipeline->add_option("manifest", in_path)->required();
    pipeline->add_option("--kind", pipeline_kind, "stein-nonstein | w-plus");
    pipeline->add_option("--n", n, "number of Stein members");
    pipeline->add_option("--family", family_length, "log family length");
    pipeline->add_option("--ledger", ledger_path);
    pipeline->add_option("--marker", marker_id);
    pipeline->add_option("--outdir", outdir, "directory for emitted documents");

    app.add_flag("--stamp", stamp, "include a generation note in emitted documents");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const long long budget = tietze_budget_from_env();

    if (*build) {
        nf::Handlebody x;
        if (build_what == "gompf") {
            x = nf::gompf_nucleus(n);
        } else if (build_what == "cusp") {
            x = nf::cusp_neighborhood();
        } else if (build_what == "sum") {
            nf::require(sum_inputs.size() >= 2, "BadParameter",
                        "sum needs at least two manifests");
            x = load_manifest(sum_inputs[0]);
            for (std::size_t i = 1; i < sum_inputs.size(); ++i)
                x = nf::boundary_sum(x, load_manifest(sum_inputs[i]));
        } else {
            nf::fail("BadParameter", "unknown build target '" + build_what + "'");
        }
        emit_manifest(x, out_path);
        return 0;
    }

    if (*homology_cmd) {
        nf::Handlebody x = load_manifest(in_path);
        nf::HomologyReport r = nf::homology(x);
        if (as_json) {
            std::cout << nf::canonical_dump(nf::to_json(r));
        } else {
            auto factors = [](const std::vector<nf::Int>& f) {
                if (f.empty())
                    return std::string("0");
                std::string s;
                for (const auto& d : f) {
                    if (!s.empty())
                        s += " + ";
                    s += d == 0 ? "Z" : "Z/" + d.str();
                }
                return s;
            };
            std::cout << "H1 = " << factors(r.h1) << "\n";
            std::cout << "H2 = Z^" << r.h2_free_rank << "\n";
            std::cout << "form: rank " << r.form.rank << ", signature " << r.form.signature
                      << ", " << nf::to_string(r.form.parity) << ", "
                      << (r.form.unimodular ? "unimodular" : "non-unimodular") << ", "
                      << nf::to_string(r.form.definiteness) << "\n";
            std::cout << "boundary H1 = " << factors(r.boundary_h1)
                      << (r.boundary_homology_sphere() ? " (homology sphere)" : "") << "\n";
        }
        return 0;
    }

    if (*verify) {
        nf::Handlebody x = load_manifest(in_path);
        const auto& mk = x.marker(default_marker(x, marker_id));
        nf::NucleusReport r = nf::verify_nucleus(x, mk, budget);
        std::cout << nf::canonical_dump(nf::to_json(r));
        return r.no_failures() ? 0 : 1;
    }

    if (*logt) {
        nf::Handlebody x = load_manifest(in_path);
        nf::LogTransformResult r = nf::log_transform(x, default_marker(x, marker_id), p);
        std::cout << "s' = " << r.s_prime.str() << ", parity " << nf::to_string(r.parity)
                  << ", divisor of the parallel torus " << r.nucleus_marker.divisor_dT << "\n";
        emit_manifest(r.manifold, out_path);
        return 0;
    }

    if (*knot) {
        nf::Handlebody x = load_manifest(in_path);
        nf::KnotSurgeryResult r =
            nf::knot_surgery(x, default_marker(x, marker_id), nf::parse_knot_spec(knot_spec));
        std::cout << "knot surgery with " << r.knot.name()
                  << ": ledger preserved, [T] primitive\n";
        emit_manifest(r.manifold, out_path);
        return 0;
    }

    if (*wmod) {
        nf::require(sign == "+" || sign == "-", "BadParameter", "--sign must be + or -");
        nf::Handlebody x = load_manifest(in_path);
        emit_manifest(nf::w_modify(x, handle, sign[0], p), out_path);
        return 0;
    }

    if (*twist) {
        nf::Handlebody x = load_manifest(in_path);
        for (const auto& id : cork_ids)
            x = nf::cork_twist(x, id);
        emit_manifest(x, out_path);
        return 0;
    }

    if (*strip) {
        nf::Handlebody x = load_manifest(in_path);
        emit_manifest(nf::strip_corks(x, cork_ids), out_path);
        return 0;
    }

    if (*steinify_cmd) {
        nf::Handlebody x = load_manifest(in_path);
        emit_manifest(nf::steinify(x), out_path);
        return 0;
    }

    if (*scheck) {
        nf::Handlebody x = load_manifest(in_path);
        nf::SteinCheckResult r = nf::stein_check(x);
        std::cout << nf::canonical_dump(nf::to_json(r));
        return r.ok() ? 0 : 1;
    }

    if (*genfam || *certify) {
        nf::Handlebody x = load_manifest(in_path);
        nf::GenusLedger ledger = load_ledger(ledger_path);
        nf::DataSet ds =
            nf::build_data_set(x, default_marker(x, marker_id), std::nullopt, budget);
        std::vector<long long> keys;
        if (*genfam) {
            nf::SequenceResult seq = family_kind == "knot"
                                         ? nf::gen_knot_sequence(ds, n, strengthened, ledger)
                                         : nf::gen_p_sequence(ds, n, strengthened, ledger);
            keys = seq.keys;
        } else {
            keys = explicit_keys;
        }
        nf::ExoticaCertificate cert =
            nf::certify_family(ds, keys, family_kind, strengthened, ledger);
        cert.member_report = nf::homology(x);
        nf::json doc = nf::certificate_to_json(cert, nf::to_json(x));
        if (stamp)
            doc["note"] = "generated by the nf command line tool";
        if (!out_path.empty())
            nf::write_json_file(out_path, doc);
        else
            std::cout << nf::canonical_dump(doc);
        std::cout << "family:";
        for (long long k : keys)
            std::cout << " " << k;
        std::cout << "\nverdict: " << cert.verdict << "\n";
        return cert.verdict == "accept" ? 0 : 1;
    }

    if (*checkc) {
        nf::ExoticaCertificate cert = nf::certificate_from_json(nf::read_json_file(in_path));
        nf::CheckResult r = nf::check_certificate(cert);
        for (const auto& d : r.diffs)
            std::cout << d << "\n";
        std::cout << "verdict: " << r.verdict << "\n";
        return r.accepted() ? 0 : 1;
    }

    if (*obstruct) {
        nf::Handlebody x = load_manifest(in_path);
        std::string mid = default_marker(x, marker_id);
        nf::ObstructionRecord rec;
        if (op_kind == "log")
            rec = nf::nonstein_obstruction_log(x, mid, p, m);
        else if (op_kind == "knot")
            rec = nf::nonstein_obstruction_knot(x, mid, nf::parse_knot_spec(knot_spec), m);
        else
            nf::fail("BadParameter", "--op must be log or knot");
        std::cout << nf::canonical_dump(nf::to_json(rec));
        return rec.obstruction ? 0 : 1;
    }

    if (*pipeline) {
        nf::Handlebody x = load_manifest(in_path);
        nf::PipelineOptions opts;
        opts.n = n;
        opts.family_length = family_length;
        opts.ledger = load_ledger(ledger_path);
        opts.tietze_budget = budget;
        std::string mid = default_marker(x, marker_id);
        if (pipeline_kind == "stein-nonstein") {
            nf::PipelineResult r = nf::stein_nonstein_pipeline(x, mid, opts);
            nf::write_json_file(outdir + "/x0.json", nf::to_json(r.x0));
            for (std::size_t i = 0; i < r.stein_members.size(); ++i)
                nf::write_json_file(outdir + "/x" + std::to_string(i + 1) + ".json",
                                    nf::to_json(r.stein_members[i]));
            nf::write_json_file(outdir + "/x_tilde.json", nf::to_json(r.x_tilde));
            nf::write_json_file(outdir + "/x_tilde_n.json", nf::to_json(r.x_tilde_n));
            for (std::size_t i = 0; i < r.tail.size(); ++i) {
                nf::write_json_file(
                    outdir + "/tail_" + std::to_string(i + 1) + ".json",
                    nf::to_json(r.tail[i].manifold));
                nf::write_json_file(outdir + "/obstruction_" + std::to_string(i + 1) + ".json",
                                    nf::to_json(r.tail_obstructions[i]));
            }
            nf::json cert = nf::certificate_to_json(r.family_cert, nf::to_json(x));
            nf::json extra = nf::json::array();
            for (const auto& o : r.ledger_equalities)
                extra.push_back(nf::to_json(o));
            cert["ledger_equalities"] = extra;
            nf::json assumptions = nf::json::array();
            for (const auto& a : r.assumptions)
                assumptions.push_back(nf::to_json(a));
            cert["pipeline_assumptions"] = assumptions;
            cert["pipeline_verdict"] = r.verdict;
            nf::write_json_file(outdir + "/certificate.json", cert);
            std::cout << "stein members: " << r.stein_members.size()
                      << ", tail members: " << r.tail.size() << "\n";
            std::cout << "verdict: " << r.verdict << "\n";
            return r.verdict == "accept" ? 0 : 1;
        }
        if (pipeline_kind == "w-plus") {
            nf::WPlusResult r = nf::w_plus_exotica_pipeline(x, mid, opts);
            nf::write_json_file(outdir + "/x0.json", nf::to_json(r.x0));
            nf::write_json_file(outdir + "/x1.json", nf::to_json(r.x1));
            nf::write_json_file(outdir + "/certificate.json",
                                nf::certificate_to_json(r.family_cert, nf::to_json(x)));
            std::cout << "verdict: " << r.verdict << "\n";
            return r.verdict == "accept" ? 0 : 1;
        }
        nf::fail("BadParameter", "unknown pipeline kind '" + pipeline_kind + "'");
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const nf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.code() == "ParseError" || e.code() == "MalformedManifest")
            return 2;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
