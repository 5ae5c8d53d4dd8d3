// Acceptance suite: one line per criterion, exit 0 only when every criterion
// passes inside its time budget.

#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nf/exotica.hpp"
#include "nf/legendrian.hpp"
#include "nf/manifest.hpp"
#include "nf/surgery.hpp"
#include "oracles.hpp"

using namespace nf;

namespace {

struct Criterion {
    int number;
    std::string title;
    double limit_seconds;
    std::function<void()> body;
};

#define ACCEPT_CHECK(cond)                                                               \
    do {                                                                                 \
        if (!(cond))                                                                     \
            throw std::runtime_error("check failed at " + std::string(__FILE__) + ":" + \
                                     std::to_string(__LINE__) + ": " #cond);             \
    } while (0)

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

void criterion_gompf_ledger() {
    for (long long n = 1; n <= 10; ++n) {
        Handlebody g = gompf_nucleus(n);
        HomologyReport h = homology(g);
        ACCEPT_CHECK(h.h1.empty());
        ACCEPT_CHECK(h.h2_free_rank == 2);
        ACCEPT_CHECK(h.h2_torsion.empty());
        ACCEPT_CHECK(h.boundary_homology_sphere());
        IntMatrix expected_form{{0, 1}, {1, -n}};
        ACCEPT_CHECK(intersection_form_on_h2(g) == expected_form);
        ACCEPT_CHECK(h.form.parity == (n % 2 == 0 ? Parity::even : Parity::odd));
        ACCEPT_CHECK(h.form.unimodular);
        ACCEPT_CHECK(h.form.definiteness == Definiteness::indefinite);
    }
}

void criterion_log_algebra() {
    for (long long s = -5; s <= 5; ++s)
        for (long long d = 1; d <= 4; ++d)
            for (long long p = 1; p <= 7; ++p) {
                if (std::gcd(p, d) != 1)
                    continue;
                LogLedger l = log_transform_ledger(Int(s), d, p);
                ACCEPT_CHECK(l.s_prime == Int(p) * p * s + Int(d) * d * (p - 1));
                bool even = l.s_prime % 2 == 0;
                ACCEPT_CHECK(even == (s % 2 == 0 && (p % 2 == 1 || d % 2 == 0)));
                ACCEPT_CHECK(even == log_parity_even(Int(s), d, p));
            }
}

void criterion_sw_multipliers() {
    for (long long p = 1; p <= 50; ++p) {
        LaurentPoly m = log_multiplier(p);
        ACCEPT_CHECK(m.palindromic());
        ACCEPT_CHECK(m.term_count() == static_cast<std::size_t>(p));
        ACCEPT_CHECK(m.eval_at_one() == p);
        for (const auto& [e, c] : m.coeffs())
            ACCEPT_CHECK(c == 1);
        if (p > 1) {
            ACCEPT_CHECK(m.max_exp() == p - 1);
            ACCEPT_CHECK(m.min_exp() == -(p - 1));
        }
    }
    BasicClassSet sw = make_basic_set(2, {{{Int(1), Int(2)}, Int(3)}, {{Int(0), Int(0)}, Int(1)}});
    ACCEPT_CHECK(sw_log_transform(sw, {Int(1), Int(0)}, 1) == sw);
    ACCEPT_CHECK(sw_knot_surgery(sw, {Int(1), Int(0)}, LaurentPoly(1)) == sw);
}

void criterion_alexander() {
    ACCEPT_CHECK(alexander(IntMatrix(0, 0)) == LaurentPoly(1));
    // hand-expanded oracle: det(V - tV^T) = t^2 - t + 1 for the trefoil matrix
    LaurentPoly trefoil = alexander(IntMatrix{{-1, 1}, {0, -1}});
    LaurentPoly expect;
    expect.add_term(1, 1);
    expect.add_term(0, -1);
    expect.add_term(-1, 1);
    ACCEPT_CHECK(trefoil == expect);
    for (long long k = 1; k <= 20; ++k) {
        LaurentPoly d = KnotSpec::torus(2, 2 * k + 1).delta();
        ACCEPT_CHECK(d.palindromic());
        ACCEPT_CHECK(abs(d.eval_at_one()) == 1);
        ACCEPT_CHECK(d.degree() == k);
    }
}

void criterion_sequences() {
    DataSet ds = build_data_set(gompf_nucleus(2), "nucleus");
    ACCEPT_CHECK(ds.g_s1 == 1);
    GenusLedger ledger;
    ledger.g_s_log[5] = 5;
    SequenceResult seq = gen_p_sequence(ds, 3, false, ledger);
    std::vector<long long> expected_keys{1, 5, 13};
    ACCEPT_CHECK(seq.keys == expected_keys);

    // independent minimal-integer scan over the sequence conditions
    {
        std::vector<long long> ps{1};
        while (ps.size() < 3) {
            long long prev = ps.back();
            long long gp = prev == 1 ? 1 : ledger.g_s_log.at(prev);
            for (long long p = prev + 1;; ++p) {
                if (p % 2 == 0)
                    continue;  // even form, d_T odd
                if (!(1 * (p - 1) + (-2) > 2 * gp - 2))
                    continue;
                ps.push_back(p);
                break;
            }
        }
        ACCEPT_CHECK(seq.keys == ps);
    }

    ExoticaCertificate good = certify_family(ds, seq.keys, "log", false, ledger);
    ACCEPT_CHECK(good.verdict == "accept");
    ACCEPT_CHECK(check_certificate(good).accepted());

    // mutation: each p_n decremented to the next parity-legal value
    for (std::size_t i = 1; i < good.keys.size(); ++i) {
        ExoticaCertificate bad = good;
        bad.keys[i] -= 2;
        CheckResult check = check_certificate(bad);
        ACCEPT_CHECK(check.verdict == "reject");
        std::string expect = "sep-S[n=" + std::to_string(i + 1) + "]";
        bool named = false;
        for (const auto& d : check.diffs)
            if (d.find(expect) != std::string::npos)
                named = true;
        ACCEPT_CHECK(named);
    }
}

void criterion_w_invariance() {
    std::mt19937_64 rng(20260810);
    std::uniform_int_distribution<int> coeff(1, 5), sgn(0, 1);
    int slides = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Handlebody x = oracle::random_handlebody(rng);
        HomologyReport before = homology(x);
        std::uniform_int_distribution<std::size_t> pick(0, x.two_handles.size() - 1);
        std::string target = x.two_handles[pick(rng)].name;

        Handlebody mod = w_modify(x, target, sgn(rng) ? '+' : '-', coeff(rng));
        ACCEPT_CHECK(homology(mod) == before);

        Handlebody tw = cork_twist(mod, mod.cork_registry.back().id);
        ACCEPT_CHECK(homology(tw) == before);
        ACCEPT_CHECK(same_diagram(cork_twist(tw, tw.cork_registry.back().id), mod));
        ACCEPT_CHECK(same_diagram(strip_corks(mod, {mod.cork_registry.back().id}), x));

        if (x.two_handles.size() >= 2) {
            std::size_t i = pick(rng), j = pick(rng);
            if (i != j) {
                Handlebody slid = slide(x, x.two_handles[i].name, x.two_handles[j].name,
                                        sgn(rng) ? 1 : -1);
                ACCEPT_CHECK(homology(slid) == before);
                ++slides;
            }
        }
    }
    ACCEPT_CHECK(slides > 50);
}

void criterion_stein_suite() {
    for (long long n = 2; n <= 10; ++n) {
        Handlebody g = gompf_nucleus(n);
        ACCEPT_CHECK(stein_check(g).ok());
        Handlebody s = steinify(g);
        ACCEPT_CHECK(stein_check(s).ok());
        ACCEPT_CHECK(s.two_handles == g.two_handles);  // idempotent on Stein input
    }
    Handlebody x;
    TwoHandle h;
    h.name = "k";
    h.framing = -4;
    h.legendrian = LegendrianData{-1, 0};
    x.two_handles = {h};
    Handlebody once = steinify(x);
    ACCEPT_CHECK(stein_check(once).ok());
    ACCEPT_CHECK(steinify(once).two_handles == once.two_handles);

    for (long long framing : {4LL, 7LL})
        for (long long tb : {1LL, -2LL}) {
            Handlebody y;
            TwoHandle bad;
            bad.name = "k";
            bad.framing = framing;
            bad.legendrian = LegendrianData{tb, 0};
            y.two_handles = {bad};
            SteinifyPlan plan = plan_steinify(y);
            ACCEPT_CHECK(plan.deficits.size() == 1);
            ACCEPT_CHECK(plan.deficits[0].required_p == framing - tb + 1);
            bool threw = false;
            try {
                steinify(y);
            } catch (const Error& e) {
                threw = std::string(e.what()).find("FramingTooHigh") != std::string::npos;
            }
            ACCEPT_CHECK(threw);
        }
}

void criterion_obstruction() {
    Handlebody g = gompf_nucleus(2);
    for (long long p = 2; p <= 10; ++p)
        for (long long m = 3; m <= 6; ++m) {
            ObstructionRecord rec = nonstein_obstruction_log(g, "nucleus", p, m);
            ACCEPT_CHECK(rec.obstruction);
            ACCEPT_CHECK(rec.q == p - 1);
            ACCEPT_CHECK(rec.two_qm == Int(2) * (p - 1) * m);
            ACCEPT_CHECK(rec.two_qm > 4);
        }
    ACCEPT_CHECK(!nonstein_obstruction_log(g, "nucleus", 1).obstruction);
    ACCEPT_CHECK(!nonstein_obstruction_knot(g, "nucleus", KnotSpec::unknot()).obstruction);
}

void criterion_pipeline() {
    Handlebody x = g2_with_companion();
    PipelineOptions opts;
    opts.n = 2;
    opts.family_length = 3;
    opts.ledger.g_s_log[5] = 5;

    PipelineResult res = stein_nonstein_pipeline(x, "nucleus", opts);
    ACCEPT_CHECK(res.verdict == "accept");
    ACCEPT_CHECK(res.stein_members.size() == 2);
    for (const auto& m : res.stein_members)
        ACCEPT_CHECK(stein_check(m).ok());
    ACCEPT_CHECK(res.tail.size() == 2);
    for (const auto& rec : res.tail_obstructions)
        ACCEPT_CHECK(rec.obstruction);

    HomologyReport base = homology(x);
    ACCEPT_CHECK(homology(res.x0) == base);
    ACCEPT_CHECK(homology(res.x_tilde) == base);
    ACCEPT_CHECK(homology(res.x_tilde_n) == base);
    for (const auto& m : res.stein_members)
        ACCEPT_CHECK(homology(m) == base);
    for (const auto& t : res.tail)
        ACCEPT_CHECK(homology(t.manifold) == base);

    ACCEPT_CHECK(res.family_cert.verdict == "accept");
    ACCEPT_CHECK(check_certificate(res.family_cert).accepted());

    // serialization round trip through the certificate document
    json doc = certificate_to_json(res.family_cert, to_json(x));
    ExoticaCertificate back = certificate_from_json(doc);
    ACCEPT_CHECK(check_certificate(back).accepted());

    // any single tampered obligation value flips the verdict
    for (std::size_t i = 0; i < res.family_cert.obligations.size(); ++i) {
        ExoticaCertificate tampered = res.family_cert;
        tampered.obligations[i].lhs += 1;
        ACCEPT_CHECK(check_certificate(tampered).verdict == "reject");
    }
}

void criterion_snf_oracle() {
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 500; ++trial) {
        IntMatrix m = oracle::random_matrix(rng, 4, -5, 5);
        SNFResult r = smith_normal_form(m);
        Int prod = 1;
        for (const Int& d : r.diagonal)
            prod *= d;
        Int dm = oracle::cofactor_det(m);
        ACCEPT_CHECK(prod == dm || prod == -dm);
        ACCEPT_CHECK(abs(oracle::cofactor_det(r.left_transform)) == 1);
        ACCEPT_CHECK(abs(oracle::cofactor_det(r.right_transform)) == 1);
        for (std::size_t i = 0; i + 1 < r.diagonal.size(); ++i)
            if (r.diagonal[i + 1] != 0)
                ACCEPT_CHECK(r.diagonal[i] != 0 && r.diagonal[i + 1] % r.diagonal[i] == 0);
    }
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "Gompf nucleus ledger for n = 1..10", 1.0, criterion_gompf_ledger},
        {2, "log-transform framing and parity grid", 1.0, criterion_log_algebra},
        {3, "SW multipliers and transform identities", 1.0, criterion_sw_multipliers},
        {4, "Alexander polynomial suite", 1.0, criterion_alexander},
        {5, "sequence generation and mutation rejection", 1.0, criterion_sequences},
        {6, "W-modification/cork/slide invariance on 200 random diagrams", 10.0,
         criterion_w_invariance},
        {7, "Stein suite: models, idempotence, deficits", 1.0, criterion_stein_suite},
        {8, "non-Stein obstruction grid", 1.0, criterion_obstruction},
        {9, "end-to-end Stein/non-Stein pipeline", 30.0, criterion_pipeline},
        {10, "Smith normal form against the cofactor oracle", 5.0, criterion_snf_oracle},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::string error;
        try {
            c.body();
        } catch (const std::exception& e) {
            error = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool ok = error.empty() && secs < c.limit_seconds;
        std::ostringstream line;
        line << (ok ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title << " ["
             << secs << "s < " << c.limit_seconds << "s]";
        if (!error.empty())
            line << " -- " << error;
        else if (secs >= c.limit_seconds)
            line << " -- time budget exceeded";
        std::cout << line.str() << "\n";
        if (!ok)
            ++failures;
    }
    return failures == 0 ? 0 : 1;
}
