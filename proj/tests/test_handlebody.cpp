#include <catch2/catch_amalgamated.hpp>

#include "nf/handlebody.hpp"
#include "oracles.hpp"

using namespace nf;

namespace {

Word w(std::initializer_list<std::pair<const char*, int>> letters) {
    Word out;
    for (auto [g, s] : letters)
        out.push_back({g, s});
    return out;
}

}  // namespace

TEST_CASE("gompf nucleus ledger") {
    for (long long n = 1; n <= 10; ++n) {
        Handlebody g = gompf_nucleus(n);
        HomologyReport h = homology(g);
        CHECK(h.h1.empty());
        CHECK(h.h2_free_rank == 2);
        CHECK(h.h2_torsion.empty());
        CHECK(h.form.unimodular);
        CHECK(h.form.definiteness == Definiteness::indefinite);
        CHECK(h.form.parity == (n % 2 == 0 ? Parity::even : Parity::odd));
        CHECK(h.boundary_homology_sphere());
        CHECK(intersection_form_on_h2(g) == IntMatrix{{0, 1}, {1, -n}});
    }
    REQUIRE_THROWS_AS(gompf_nucleus(0), Error);
}

TEST_CASE("gompf nucleus Legendrian model") {
    REQUIRE_FALSE(gompf_nucleus(1).two("trefoil").legendrian.has_value());
    Handlebody g2 = gompf_nucleus(2);
    REQUIRE(g2.two("trefoil").legendrian == LegendrianData{1, 0});
    REQUIRE(g2.two("unknot").legendrian == LegendrianData{-1, 0});
    Handlebody g5 = gompf_nucleus(5);
    REQUIRE(g5.two("unknot").legendrian == LegendrianData{-4, -1});
    REQUIRE(g5.two("unknot").framing == -5);
}

TEST_CASE("cusp neighborhood ledger") {
    Handlebody c = cusp_neighborhood();
    HomologyReport h = homology(c);
    CHECK(h.h1.empty());
    CHECK(h.h2_free_rank == 1);
    CHECK(intersection_form_on_h2(c) == IntMatrix{{0}});
    CHECK_FALSE(h.boundary_homology_sphere());
    CHECK(h.boundary_h1 == std::vector<Int>{0});  // 0-surgery on the trefoil
}

TEST_CASE("homology with 1-handles") {
    // One 1-handle killed by a relator a^2: H1 = Z/2.
    Handlebody x;
    x.one_handles = {"a"};
    TwoHandle h;
    h.name = "k";
    h.attaching_word = w({{"a", 1}, {"a", 1}});
    h.framing = 0;
    x.two_handles = {h};
    HomologyReport rep = homology(x);
    REQUIRE(rep.h1 == std::vector<Int>{2});
    REQUIRE(rep.h2_free_rank == 0);
}

TEST_CASE("boundary sum homology is the direct sum") {
    Handlebody g2 = gompf_nucleus(2);
    Handlebody sum = boundary_sum(g2, g2);
    REQUIRE(sum.two_handles.size() == 4);
    HomologyReport h = homology(sum);
    CHECK(h.h2_free_rank == 4);
    CHECK(h.h1.empty());
    CHECK(h.boundary_homology_sphere());

    // Oracle: independently assemble the block-diagonal linking matrix and
    // compare the kernel form classification.
    IntMatrix block(4, 4);
    IntMatrix q = gompf_nucleus(2).linking_matrix();
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            block.at(i, j) = q.at(i, j);
            block.at(i + 2, j + 2) = q.at(i, j);
        }
    CHECK(h.form == classify_form(block));
    CHECK(intersection_form_on_h2(sum) == block);
}

TEST_CASE("boundary sum renames clashing handles") {
    Handlebody sum = boundary_sum(gompf_nucleus(2), gompf_nucleus(3));
    REQUIRE_NOTHROW(sum.two("trefoil_2"));
    REQUIRE_NOTHROW(sum.two("unknot_2"));
    REQUIRE(sum.markers.size() == 2);
    REQUIRE(sum.markers[1].class_T.count("trefoil_2") == 1);
    REQUIRE(sum.lk("trefoil_2", "unknot_2") == 1);
    REQUIRE(sum.lk("trefoil", "trefoil_2") == 0);
}

TEST_CASE("malformed diagrams are rejected") {
    Handlebody x;
    TwoHandle h;
    h.name = "k";
    h.attaching_word = w({{"ghost", 1}});
    x.two_handles = {h};
    REQUIRE_THROWS_AS(homology(x), Error);

    Handlebody y;
    TwoHandle a, b;
    a.name = "a";
    b.name = "b";
    a.linking["b"] = 1;  // asymmetric on purpose
    y.two_handles = {a, b};
    REQUIRE_THROWS_AS(homology(y), Error);
}

TEST_CASE("pi1 simplification") {
    SECTION("no generators is trivial") {
        Presentation p;
        REQUIRE(simplify_presentation(p) == SimplifyVerdict::trivial);
    }
    SECTION("single generator with a length-1 relator") {
        Presentation p;
        p.generators = {"a"};
        p.relators = {w({{"a", 1}})};
        REQUIRE(simplify_presentation(p) == SimplifyVerdict::trivial);
    }
    SECTION("a^2 has nontrivial abelianization") {
        Presentation p;
        p.generators = {"a"};
        p.relators = {w({{"a", 1}, {"a", 1}})};
        REQUIRE(simplify_presentation(p) == SimplifyVerdict::nontrivial_abelianization);
    }
    SECTION("coprime powers reduce to trivial via Euclid") {
        Presentation p;
        p.generators = {"a"};
        p.relators = {power_word("a", 5), power_word("a", -3)};
        REQUIRE(simplify_presentation(p) == SimplifyVerdict::trivial);
    }
    SECTION("commutator plus one generator relator") {
        Presentation p;
        p.generators = {"a", "b"};
        p.relators = {w({{"a", 1}, {"b", 1}, {"a", -1}, {"b", -1}}), w({{"b", 1}})};
        // abelianization is Z, caught before any rewriting
        REQUIRE(simplify_presentation(p) == SimplifyVerdict::nontrivial_abelianization);
    }
    SECTION("trefoil-style relator with a solvable generator") {
        // <a, b | a b a b^{-1} a^{-1} b^{-1}, a> reduces to trivial
        Presentation p;
        p.generators = {"a", "b"};
        p.relators = {w({{"a", 1}, {"b", 1}, {"a", 1}, {"b", -1}, {"a", -1}, {"b", -1}}),
                      w({{"a", 1}})};
        REQUIRE(simplify_presentation(p) == SimplifyVerdict::trivial);
    }
    SECTION("budget exhaustion reports unknown") {
        // Trivial abelianization, no length-1 relator, no single-occurrence
        // generator: the rewriter has work to do and no budget to do it.
        Presentation p;
        p.generators = {"a", "b"};
        p.relators = {w({{"a", 1}, {"b", 1}, {"a", -1}, {"b", -1}, {"b", -1}}),
                      w({{"b", 1}, {"a", 1}, {"b", -1}, {"a", -1}, {"a", -1}})};
        REQUIRE(simplify_presentation(p, 0) == SimplifyVerdict::unknown);
    }
}

TEST_CASE("simplify never claims trivial when abelianization is nonzero") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> len(0, 6), pick(0, 2), sgn(0, 1);
    const std::vector<std::string> gens{"a", "b", "c"};
    for (int trial = 0; trial < 200; ++trial) {
        Presentation p;
        p.generators = gens;
        for (int r = 0; r < 3; ++r) {
            Word word;
            int L = len(rng);
            for (int i = 0; i < L; ++i)
                word.push_back({gens[pick(rng)], sgn(rng) ? 1 : -1});
            p.relators.push_back(word);
        }
        // independent abelianization oracle
        IntMatrix e(3, p.relators.size());
        for (std::size_t j = 0; j < p.relators.size(); ++j) {
            auto ab = abelianize(p.relators[j]);
            for (std::size_t i = 0; i < 3; ++i)
                if (ab.count(gens[i]))
                    e.at(i, j) = ab[gens[i]];
        }
        bool ab_trivial = cokernel_invariant_factors(e).empty();
        SimplifyVerdict v = simplify_presentation(p, 2000);
        if (!ab_trivial)
            REQUIRE(v != SimplifyVerdict::trivial);
    }
}

TEST_CASE("verify_nucleus on built-ins") {
    for (long long n = 1; n <= 20; ++n) {
        Handlebody g = gompf_nucleus(n);
        NucleusReport rep = verify_nucleus(g, g.marker("nucleus"));
        CHECK(rep.all_proved());
        CHECK(rep.d_T == 1);
    }
}

TEST_CASE("verify_nucleus failure cases") {
    SECTION("H1 != 0 fails condition (i)") {
        Handlebody x;
        x.one_handles = {"a"};
        TwoHandle k, t;
        t.name = "t";
        t.framing = 0;
        t.seifert_genus = 1;
        k.name = "k";
        k.attaching_word = w({{"a", 1}, {"a", 1}});
        x.two_handles = {t, k};
        NucleusMarker m;
        m.id = "m";
        m.torus_handles = {"t"};
        m.sub_two_handles = {"t", "k"};
        m.sub_one_handles = {"a"};
        m.class_T = {{"t", 1}};
        m.divisor_dT = 1;
        x.markers.push_back(m);
        NucleusReport rep = verify_nucleus(x, x.marker("m"));
        REQUIRE(rep.simply_connected == CondStatus::failed);
    }
    SECTION("cusp neighborhood is not a nucleus") {
        Handlebody c = cusp_neighborhood();
        NucleusReport rep = verify_nucleus(c, c.marker("cusp"));
        REQUIRE(rep.homology_rank2 == CondStatus::failed);
        REQUIRE(rep.c_embedded_torus == CondStatus::proved);
    }
    SECTION("wrong declared divisor fails condition (iv)") {
        Handlebody g = gompf_nucleus(2);
        g.marker("nucleus").divisor_dT = 3;
        NucleusReport rep = verify_nucleus(g, g.marker("nucleus"));
        REQUIRE(rep.divisor == CondStatus::failed);
    }
    SECTION("inconsistent marker pairing is rejected") {
        Handlebody g = gompf_nucleus(2);
        g.marker("nucleus").class_S = {{{"unknot", 2}}};
        REQUIRE_THROWS_AS(verify_nucleus(g, g.marker("nucleus")), Error);
    }
}

TEST_CASE("nucleus invariants hold per built-in instance") {
    for (long long n : {1LL, 2LL, 3LL, 7LL}) {
        Handlebody g = gompf_nucleus(n);
        HomologyReport h = homology(g);
        REQUIRE(h.h1.empty());
        REQUIRE(h.h2_free_rank == 2);
        REQUIRE(h.form.unimodular);
        REQUIRE(h.boundary_homology_sphere());
        REQUIRE(class_pairing(g, g.marker("nucleus").class_T, g.marker("nucleus").class_T) == 0);
    }
}
