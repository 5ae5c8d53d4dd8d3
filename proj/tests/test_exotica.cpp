#include <catch2/catch_amalgamated.hpp>

#include "nf/exotica.hpp"
#include "nf/manifest.hpp"
#include "oracles.hpp"

using namespace nf;

namespace {

Handlebody g2_with_companion() {
    Handlebody g = gompf_nucleus(2);
    TwoHandle t;
    t.name = "companion";
    t.framing = 0;
    t.seifert_genus = 1;
    t.legendrian = LegendrianData{1, 0};
    t.front = fronts::trefoil;
    g.two_handles.push_back(t);
    return g;
}

// Independent oracle: minimal-integer scan of the sequence conditions,
// written against the raw inequalities rather than the generator's loop.
std::vector<long long> p_sequence_oracle(long long d_t, long long s, long long g_s1,
                                         const std::map<long long, long long>& ledger,
                                         const std::vector<std::pair<long long, long long>>& u,
                                         long long n) {
    std::vector<long long> ps{1};
    bool parity = (s % 2 == 0) && (d_t % 2 == 1);
    while (static_cast<long long>(ps.size()) < n) {
        long long prev = ps.back();
        long long gp = prev == 1 ? g_s1 : ledger.at(prev);
        for (long long p = prev + 1;; ++p) {
            if (std::gcd(p, d_t) != 1)
                continue;
            if (parity && p % 2 == 0)
                continue;
            if (!(d_t * (p - 1) + s > 2 * gp - 2))
                continue;
            bool ok = true;
            if (ps.size() == 1)
                for (auto [sq, gb] : u)
                    if (!(d_t * (p - 1) + sq > 2 * gb - 2))
                        ok = false;
            if (!ok)
                continue;
            ps.push_back(p);
            break;
        }
    }
    return ps;
}

}  // namespace

TEST_CASE("build_data_set ledgers") {
    SECTION("G(2) alone") {
        Handlebody g = gompf_nucleus(2);
        DataSet ds = build_data_set(g, "nucleus");
        REQUIRE(ds.d_T == 1);
        REQUIRE(ds.s == -2);
        REQUIRE(ds.u.empty());
        REQUIRE(ds.g_s1 == 1);  // genus 0 carrier, square < 0: max{0,1}
        REQUIRE(ds.nucleus_parity == Parity::even);
    }
    SECTION("G(3) alone") {
        DataSet ds = build_data_set(gompf_nucleus(3), "nucleus");
        REQUIRE(ds.s == -3);
        REQUIRE(ds.g_s1 == 1);
        REQUIRE(ds.nucleus_parity == Parity::odd);
    }
    SECTION("G(2) with a 0-framed companion handle") {
        DataSet ds = build_data_set(g2_with_companion(), "nucleus");
        REQUIRE(ds.u.size() == 1);
        REQUIRE(ds.u[0].square == 0);
        REQUIRE(ds.u[0].genus_bound == 1);
        REQUIRE(ds.q == IntMatrix{{-2, 1, 0}, {1, 0, 0}, {0, 0, 0}});
    }
    SECTION("missing genus data is refused") {
        Handlebody g = g2_with_companion();
        g.two("companion").seifert_genus.reset();
        REQUIRE_THROWS_WITH(build_data_set(g, "nucleus"),
                            Catch::Matchers::ContainsSubstring("MissingGenusData"));
    }
    SECTION("default basic seed and assumptions") {
        DataSet ds = build_data_set(gompf_nucleus(2), "nucleus");
        REQUIRE(ds.basics.rank == 2);
        REQUIRE(ds.basics.classes.size() == 1);
        bool seed_noted = false, simple_noted = false;
        for (const auto& a : ds.assumptions) {
            if (a.id == "basic-class-seed")
                seed_noted = true;
            if (a.id == "simple-type")
                simple_noted = true;
        }
        REQUIRE(seed_noted);
        REQUIRE(simple_noted);
    }
}

TEST_CASE("p-sequence generation") {
    DataSet ds = build_data_set(gompf_nucleus(2), "nucleus");
    GenusLedger ledger;
    ledger.g_s_log[5] = 5;

    SECTION("G(2) with the declared ledger gives (1, 5, 13)") {
        SequenceResult seq = gen_p_sequence(ds, 3, false, ledger);
        REQUIRE(seq.keys == std::vector<long long>{1, 5, 13});
        REQUIRE(seq.keys == p_sequence_oracle(1, -2, 1, {{5, 5}}, {}, 3));
        for (const auto& o : seq.obligations)
            REQUIRE(o.holds);
    }
    SECTION("sequence is strictly increasing, coprime and parity-compliant") {
        GenusLedger big;
        big.g_s_log[5] = 5;
        big.g_s_log[13] = 13;
        big.g_s_log[29] = 20;
        SequenceResult seq = gen_p_sequence(ds, 5, false, big);
        for (std::size_t i = 1; i < seq.keys.size(); ++i) {
            REQUIRE(seq.keys[i] > seq.keys[i - 1]);
            REQUIRE(std::gcd(seq.keys[i], ds.d_T) == 1);
            REQUIRE(seq.keys[i] % 2 == 1);  // even form, d_T odd
        }
    }
    SECTION("missing ledger entry is refused") {
        REQUIRE_THROWS_WITH(gen_p_sequence(ds, 4, false, ledger),
                            Catch::Matchers::ContainsSubstring("LedgerIncomplete"));
    }
    SECTION("a registered provider fills the gap") {
        BoundProvider provider = [](long long key) { return std::optional<long long>(key); };
        SequenceResult seq = gen_p_sequence(ds, 4, false, GenusLedger{}, provider);
        REQUIRE(seq.keys.size() == 4);
        REQUIRE(seq.keys == p_sequence_oracle(1, -2, 1, {{5, 5}, {13, 13}}, {}, 4));
    }
    SECTION("d_T = 2 nucleus: coprimality forces odd members") {
        LogTransformResult two = log_transform(gompf_nucleus(2), "nucleus", 2);
        DataSet d2 = build_data_set(two.manifold, "nucleus", std::nullopt, 10000, 1);
        REQUIRE(d2.d_T == 2);
        BoundProvider provider = [](long long key) { return std::optional<long long>(key); };
        SequenceResult seq = gen_p_sequence(d2, 4, false, GenusLedger{}, provider);
        for (std::size_t i = 1; i < seq.keys.size(); ++i)
            REQUIRE(seq.keys[i] % 2 == 1);
    }
}

TEST_CASE("knot-sequence generation") {
    SECTION("G(1)-type data gives the trefoil as K_2") {
        DataSet ds = build_data_set(gompf_nucleus(1), "nucleus");
        REQUIRE(ds.s == -1);
        REQUIRE(ds.g_s1 == 1);
        SequenceResult seq = gen_knot_sequence(ds, 2, false, GenusLedger{});
        REQUIRE(seq.keys == std::vector<long long>{0, 1});
        REQUIRE(knot_for_degree(seq.keys[1]).name() == "torus(2,3)");
    }
    SECTION("n = 1 is just the unknot with no pair obligations") {
        DataSet ds = build_data_set(gompf_nucleus(1), "nucleus");
        SequenceResult seq = gen_knot_sequence(ds, 1, false, GenusLedger{});
        REQUIRE(seq.keys == std::vector<long long>{0});
        REQUIRE(seq.obligations.empty());
    }
    SECTION("strengthened conditions keep K_2 for S.S = -1") {
        DataSet ds = build_data_set(gompf_nucleus(1), "nucleus");
        SequenceResult seq = gen_knot_sequence(ds, 2, true, GenusLedger{});
        REQUIRE(seq.keys == std::vector<long long>{0, 1});
    }
    SECTION("degree growth across a longer family") {
        DataSet ds = build_data_set(gompf_nucleus(1), "nucleus");
        GenusLedger ledger;
        ledger.g_s_knot[1] = 2;
        ledger.g_s_knot[2] = 5;
        SequenceResult seq = gen_knot_sequence(ds, 4, false, ledger);
        // minimal scan: 2k - 1 > 2 forces k = 2, then 2k - 1 > 8 forces k = 5
        REQUIRE(seq.keys == std::vector<long long>{0, 1, 2, 5});
        for (std::size_t i = 1; i < seq.keys.size(); ++i)
            REQUIRE(seq.keys[i] > seq.keys[i - 1]);
    }
    SECTION("divisor two is rejected") {
        LogTransformResult two = log_transform(gompf_nucleus(2), "nucleus", 2);
        DataSet d2 = build_data_set(two.manifold, "nucleus", std::nullopt, 10000, 1);
        REQUIRE_THROWS_WITH(gen_knot_sequence(d2, 2, false, GenusLedger{}),
                            Catch::Matchers::ContainsSubstring("DivisorNotOne"));
    }
}

TEST_CASE("family certificates") {
    DataSet ds = build_data_set(gompf_nucleus(2), "nucleus");
    GenusLedger ledger;
    ledger.g_s_log[5] = 5;

    SECTION("generated family is accepted and round-trips") {
        ExoticaCertificate cert = certify_family(ds, {1, 5, 13}, "log", false, ledger);
        REQUIRE(cert.verdict == "accept");
        CheckResult check = check_certificate(cert);
        REQUIRE(check.accepted());
    }
    SECTION("member ledgers carry the transformed basic classes") {
        ExoticaCertificate cert = certify_family(ds, {1, 5}, "log", false, ledger);
        REQUIRE(cert.members.size() == 2);
        REQUIRE(cert.members[0].basics.classes.size() == 1);
        REQUIRE(cert.members[1].basics.classes.size() == 5);  // p classes in generic position
        REQUIRE(cert.members[1].s_member == log_framing(Int(-2), 1, 5));
    }
    SECTION("p_2 = 3 violates the S gap and is rejected by name") {
        GenusLedger padded = ledger;
        padded.g_s_log[3] = 5;  // the bad family still needs its ledger entry
        ExoticaCertificate cert = certify_family(ds, {1, 3, 13}, "log", false, padded);
        REQUIRE(cert.verdict == "reject");
        CheckResult check = check_certificate(cert);
        REQUIRE(check.verdict == "reject");
        bool named = false;
        for (const auto& d : check.diffs)
            if (d.find("sep-S[n=2]") != std::string::npos || d.find("S-gap[n=2]") != std::string::npos)
                named = true;
        REQUIRE(named);
    }
    SECTION("single-member family accepts vacuously") {
        ExoticaCertificate cert = certify_family(ds, {1}, "log", false, ledger);
        REQUIRE(cert.verdict == "accept");
        REQUIRE(check_certificate(cert).accepted());
    }
    SECTION("tampered obligation value is caught") {
        ExoticaCertificate cert = certify_family(ds, {1, 5, 13}, "log", false, ledger);
        cert.obligations[2].lhs += 1;
        CheckResult check = check_certificate(cert);
        REQUIRE(check.verdict == "reject");
    }
    SECTION("tampered parameter flips the verdict with the right id") {
        ExoticaCertificate cert = certify_family(ds, {1, 5, 13}, "log", false, ledger);
        cert.keys[1] = 3;  // forging a smaller member
        CheckResult check = check_certificate(cert);
        REQUIRE(check.verdict == "reject");
    }
    SECTION("failed assumption rejects regardless of the inequalities") {
        ExoticaCertificate cert = certify_family(ds, {1, 5, 13}, "log", false, ledger);
        cert.assumptions.push_back({"basic-class-seed", "failed", "declared seed withdrawn"});
        cert.verdict = "accept";  // stored verdict lies
        CheckResult check = check_certificate(cert);
        REQUIRE(check.verdict == "reject");
    }
    SECTION("knot family certificate") {
        DataSet d1 = build_data_set(gompf_nucleus(1), "nucleus");
        ExoticaCertificate cert = certify_family(d1, {0, 1}, "knot", false, GenusLedger{});
        REQUIRE(cert.verdict == "accept");
        REQUIRE(check_certificate(cert).accepted());
        REQUIRE(cert.members[1].basics.classes.size() == 3);  // trefoil has 3 terms
    }
    SECTION("relative genus query shape") {
        DataSet dc = build_data_set(g2_with_companion(), "nucleus");
        ExoticaCertificate cert = certify_family(dc, {1, 5}, "log", false, ledger);
        REQUIRE(cert.query.q.rows == 3);
        REQUIRE(cert.query.d == std::vector<Int>{1, 1, 1});
        REQUIRE(cert.query.g == std::vector<Int>{1, 1});
        REQUIRE(cert.query.lambda0 == 0);
    }
}

TEST_CASE("mutation testing on every member") {
    DataSet ds = build_data_set(gompf_nucleus(2), "nucleus");
    GenusLedger ledger;
    ledger.g_s_log[5] = 5;
    ExoticaCertificate good = certify_family(ds, {1, 5, 13}, "log", false, ledger);
    REQUIRE(good.verdict == "accept");

    for (std::size_t mutate = 1; mutate < good.keys.size(); ++mutate) {
        ExoticaCertificate cert = good;
        cert.keys[mutate] -= 2;  // the next parity-legal value below
        CheckResult check = check_certificate(cert);
        REQUIRE(check.verdict == "reject");
        std::string expect = "[n=" + std::to_string(mutate + 1) + "]";
        bool named = false;
        for (const auto& d : check.diffs)
            if (d.find("S-gap" + expect) != std::string::npos ||
                d.find("sep-S" + expect) != std::string::npos)
                named = true;
        REQUIRE(named);
    }
}

TEST_CASE("strengthened families add the reversed obligations") {
    DataSet ds = build_data_set(g2_with_companion(), "nucleus");
    GenusLedger ledger;
    ledger.g_s_log[5] = 5;
    SequenceResult seq = gen_p_sequence(ds, 3, true, ledger);
    REQUIRE(seq.keys == std::vector<long long>{1, 5, 13});
    ExoticaCertificate cert = certify_family(ds, seq.keys, "log", true, ledger);
    REQUIRE(cert.verdict == "accept");
    REQUIRE(check_certificate(cert).accepted());
    bool has_rev_s = false, has_rev_u = false;
    for (const auto& o : cert.obligations) {
        if (o.id.rfind("sep-S-reversed", 0) == 0)
            has_rev_s = true;
        if (o.id.rfind("sep-u-reversed", 0) == 0)
            has_rev_u = true;
    }
    REQUIRE(has_rev_s);
    REQUIRE(has_rev_u);
}

TEST_CASE("parity-illegal member yields a reject certificate, not a crash") {
    DataSet ds = build_data_set(gompf_nucleus(2), "nucleus");
    GenusLedger ledger;
    ledger.g_s_log[6] = 5;
    ExoticaCertificate cert = certify_family(ds, {1, 6}, "log", false, ledger);
    REQUIRE(cert.verdict == "reject");
    CheckResult check = check_certificate(cert);
    REQUIRE(check.verdict == "reject");
    bool named = false;
    for (const auto& d : check.diffs)
        if (d.find("parity") != std::string::npos)
            named = true;
    REQUIRE(named);
}

TEST_CASE("knot-family mutation is rejected by name") {
    DataSet ds = build_data_set(gompf_nucleus(1), "nucleus");
    GenusLedger ledger;
    ledger.g_s_knot[1] = 2;
    SequenceResult seq = gen_knot_sequence(ds, 3, false, ledger);
    ExoticaCertificate good = certify_family(ds, seq.keys, "knot", false, ledger);
    REQUIRE(good.verdict == "accept");
    REQUIRE(check_certificate(good).accepted());

    for (std::size_t mutate = 1; mutate < good.keys.size(); ++mutate) {
        ExoticaCertificate bad = good;
        bad.keys[mutate] -= 1;  // the next lower degree
        CheckResult check = check_certificate(bad);
        REQUIRE(check.verdict == "reject");
        std::string tag = "[n=" + std::to_string(mutate + 1) + "]";
        bool named = false;
        for (const auto& d : check.diffs)
            if (d.find(tag) != std::string::npos)
                named = true;
        REQUIRE(named);
    }
}

TEST_CASE("non-Stein obstruction records") {
    Handlebody g = gompf_nucleus(2);

    SECTION("p = 3, m = 3: the inequality pair is unsatisfiable") {
        ObstructionRecord rec = nonstein_obstruction_log(g, "nucleus", 3, 3);
        REQUIRE(rec.obstruction);
        REQUIRE(rec.q == 2);
        REQUIRE(rec.two_qm == 12);
        REQUIRE(rec.both_orientations);
    }
    SECTION("the whole certified grid") {
        for (long long p = 2; p <= 10; ++p)
            for (long long m = 3; m <= 6; ++m) {
                ObstructionRecord rec = nonstein_obstruction_log(g, "nucleus", p, m);
                REQUIRE(rec.obstruction);
                REQUIRE(rec.two_qm == Int(2) * (p - 1) * m);
                REQUIRE(rec.two_qm > 4);
            }
    }
    SECTION("p = 1 yields no obstruction") {
        ObstructionRecord rec = nonstein_obstruction_log(g, "nucleus", 1);
        REQUIRE_FALSE(rec.obstruction);
    }
    SECTION("trivial Alexander polynomial yields no obstruction") {
        ObstructionRecord rec = nonstein_obstruction_knot(g, "nucleus", KnotSpec::unknot());
        REQUIRE_FALSE(rec.obstruction);
    }
    SECTION("knot obstruction uses the doubled degree") {
        ObstructionRecord rec = nonstein_obstruction_knot(g, "nucleus", KnotSpec::torus(2, 5), 3);
        REQUIRE(rec.obstruction);
        REQUIRE(rec.q == 4);  // 2 * deg
        REQUIRE(rec.two_qm == 24);
    }
    SECTION("m below the sphere bound is rejected") {
        REQUIRE_THROWS_AS(nonstein_obstruction_log(g, "nucleus", 3, 2), Error);
    }
}

TEST_CASE("stein_nonstein_pipeline end to end") {
    Handlebody x = g2_with_companion();
    PipelineOptions opts;
    opts.n = 2;
    opts.family_length = 3;
    opts.ledger.g_s_log[5] = 5;

    PipelineResult res = stein_nonstein_pipeline(x, "nucleus", opts);

    SECTION("verdict and members") {
        REQUIRE(res.verdict == "accept");
        REQUIRE(res.stein_members.size() == 2);
        for (const auto& m : res.stein_members)
            REQUIRE(stein_check(m).ok());
        REQUIRE(stein_check(res.x_tilde).ok());
    }
    SECTION("tail members carry accepted obstruction records") {
        REQUIRE(res.tail.size() == 2);
        REQUIRE(res.tail_obstructions.size() == 2);
        for (const auto& rec : res.tail_obstructions)
            REQUIRE(rec.obstruction);
    }
    SECTION("all members share identical invariant ledgers") {
        for (const auto& o : res.ledger_equalities)
            REQUIRE(o.holds);
        HomologyReport base = homology(x);
        REQUIRE(homology(res.x0) == base);
        REQUIRE(homology(res.x_tilde_n) == base);
        for (const auto& t : res.tail)
            REQUIRE(homology(t.manifold) == base);
    }
    SECTION("family certificate round-trips") {
        REQUIRE(res.family_cert.verdict == "accept");
        REQUIRE(check_certificate(res.family_cert).accepted());
        ExoticaCertificate tampered = res.family_cert;
        tampered.keys[1] = 3;
        REQUIRE(check_certificate(tampered).verdict == "reject");
    }
    SECTION("X0 strips back to the original diagram") {
        std::vector<std::string> all_ids;
        for (const auto& c : res.x0.cork_registry)
            all_ids.push_back(c.id);
        REQUIRE(same_diagram(strip_corks(res.x0, all_ids), x));
    }
    SECTION("the stripped handlebody still contains the marked nucleus") {
        NucleusReport rep = verify_nucleus(res.x_tilde, res.x_tilde.marker("nucleus"));
        REQUIRE(rep.all_proved());
        NucleusReport rep_n = verify_nucleus(res.x_tilde_n, res.x_tilde_n.marker("nucleus"));
        REQUIRE(rep_n.all_proved());
    }
}

TEST_CASE("w_plus pipeline") {
    SECTION("a framing-3 companion needs W+(3)") {
        Handlebody x = gompf_nucleus(2);
        TwoHandle extra;
        extra.name = "steep";
        extra.framing = 3;
        extra.seifert_genus = 0;
        extra.legendrian = LegendrianData{1, 0};
        x.two_handles.push_back(extra);

        PipelineOptions opts;
        opts.family_length = 3;
        opts.ledger.g_s_log[5] = 5;
        WPlusResult res = w_plus_exotica_pipeline(x, "nucleus", opts);
        REQUIRE(stein_check(res.x1).ok());
        REQUIRE(res.x1.cork_registry.size() == 1);
        REQUIRE(res.x1.cork_registry[0].p == 3);
        REQUIRE(res.x1.cork_registry[0].sign == '+');
        REQUIRE(res.x0.cork_registry[0].sign == '-');
        REQUIRE(homology(res.x0) == homology(res.x1));
        REQUIRE(res.verdict == "accept");
    }
    SECTION("no extra handles degenerates to the identity plus the log family") {
        Handlebody g = gompf_nucleus(2);
        PipelineOptions opts;
        opts.family_length = 3;
        opts.ledger.g_s_log[5] = 5;
        WPlusResult res = w_plus_exotica_pipeline(g, "nucleus", opts);
        REQUIRE(same_diagram(res.x1, g));
        REQUIRE(same_diagram(res.x0, g));
        REQUIRE(res.family_cert.verdict == "accept");
        REQUIRE(res.verdict == "accept");
    }
}

TEST_CASE("pipeline preconditions") {
    SECTION("non-Legendrian input is refused") {
        Handlebody g = gompf_nucleus(1);  // no Legendrian data below n = 2
        PipelineOptions opts;
        REQUIRE_THROWS_WITH(stein_nonstein_pipeline(g, "nucleus", opts),
                            Catch::Matchers::ContainsSubstring("MissingLegendrianData"));
    }
    SECTION("non-Stein nucleus is refused") {
        Handlebody g = gompf_nucleus(2);
        g.two("trefoil").legendrian = LegendrianData{3, 0};  // framing 0 != tb - 1
        g.two("trefoil").front.reset();
        PipelineOptions opts;
        REQUIRE_THROWS_WITH(stein_nonstein_pipeline(g, "nucleus", opts),
                            Catch::Matchers::ContainsSubstring("NotGoodHandlebody"));
    }
    SECTION("an H2 class only reachable over a 1-handle breaks goodness") {
        Handlebody g = gompf_nucleus(2);
        g.one_handles.push_back("a");
        TwoHandle h1, h2;
        h1.name = "over1";
        h1.attaching_word = power_word("a", 1);
        h1.legendrian = LegendrianData{1, 0};
        h1.seifert_genus = 0;
        h2.name = "over2";
        h2.attaching_word = power_word("a", -1);
        h2.legendrian = LegendrianData{1, 0};
        h2.seifert_genus = 0;
        g.two_handles.push_back(h1);
        g.two_handles.push_back(h2);
        PipelineOptions opts;
        REQUIRE_THROWS_WITH(stein_nonstein_pipeline(g, "nucleus", opts),
                            Catch::Matchers::ContainsSubstring("NotGoodHandlebody"));
    }
}


TEST_CASE("randomized data sets: generate, certify, serialize, re-check") {
    std::mt19937_64 rng(8128);
    std::uniform_int_distribution<int> d_pick(1, 4), s_pick(-5, 5), u_count(0, 3),
        u_square(-3, 3), u_genus(0, 3), len(2, 5), coin(0, 1);
    BoundProvider provider = [](long long key) {
        return std::optional<long long>(key + 1);  // monotone declared bounds
    };

    for (int trial = 0; trial < 60; ++trial) {
        DataSet ds;
        ds.d_T = d_pick(rng);
        ds.s = s_pick(rng);
        ds.nucleus_parity = ds.s % 2 == 0 ? Parity::even : Parity::odd;
        ds.g_s1 = ds.s < 0 ? std::max(1, u_genus(rng)) : u_genus(rng);
        int k = u_count(rng);
        for (int i = 0; i < k; ++i) {
            ComplementClass cc;
            cc.cls = {{"u" + std::to_string(i), 1}};
            cc.square = u_square(rng);
            long long g = u_genus(rng);
            cc.genus_bound = cc.square < 0 ? std::max(g, 1LL) : g;
            ds.u.push_back(cc);
        }
        ds.basics = default_basic_seed(k);
        ds.q = IntMatrix(k + 2, k + 2);
        ds.q.at(0, 0) = ds.s;
        ds.q.at(0, 1) = ds.q.at(1, 0) = 1;
        for (int i = 0; i < k; ++i)
            ds.q.at(2 + i, 2 + i) = ds.u[i].square;
        bool strengthened = coin(rng) == 1;
        long long n = len(rng);

        SequenceResult seq = gen_p_sequence(ds, n, strengthened, GenusLedger{}, provider);
        REQUIRE(seq.keys.size() == static_cast<std::size_t>(n));
        bool parity_case = ds.nucleus_parity == Parity::even && ds.d_T % 2 == 1;
        for (std::size_t i = 1; i < seq.keys.size(); ++i) {
            long long key = seq.keys[i];
            REQUIRE(key > seq.keys[i - 1]);
            REQUIRE(std::gcd(key, ds.d_T) == 1);
            if (parity_case)
                REQUIRE(key % 2 == 1);
        }
        for (const auto& o : seq.obligations)
            REQUIRE(o.holds);

        ExoticaCertificate cert =
            certify_family(ds, seq.keys, "log", strengthened, GenusLedger{}, provider);
        REQUIRE(cert.verdict == "accept");
        REQUIRE(check_certificate(cert).accepted());

        // JSON round trip preserves checkability
        ExoticaCertificate back = certificate_from_json(certificate_to_json(cert));
        REQUIRE(check_certificate(back).accepted());

        // single-coordinate mutations that break a strict inequality reject
        ExoticaCertificate bad = cert;
        std::uniform_int_distribution<std::size_t> which(1, bad.keys.size() - 1);
        std::size_t at = which(rng);
        bad.keys[at] = bad.keys[at - 1];  // violates strict increase at least
        REQUIRE(check_certificate(bad).verdict == "reject");
    }
}
