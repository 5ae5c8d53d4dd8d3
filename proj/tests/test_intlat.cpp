#include <catch2/catch_amalgamated.hpp>

#include "nf/intlat.hpp"
#include "oracles.hpp"

using namespace nf;

namespace {

bool divisibility_chain_ok(const std::vector<Int>& d) {
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        if (d[i] < 0)
            return false;
        if (d[i + 1] != 0 && d[i] == 0)
            return false;
        if (d[i] != 0 && d[i + 1] % d[i] != 0)
            return false;
    }
    return true;
}

IntMatrix diag_of(const SNFResult& r, std::size_t rows, std::size_t cols) {
    IntMatrix d(rows, cols);
    for (std::size_t i = 0; i < r.diagonal.size(); ++i)
        d.at(i, i) = r.diagonal[i];
    return d;
}

}  // namespace

TEST_CASE("smith normal form on unimodular and diagonal inputs") {
    SNFResult r1 = smith_normal_form(IntMatrix{{0, 1}, {1, -2}});
    REQUIRE(r1.diagonal == std::vector<Int>{1, 1});

    SNFResult r2 = smith_normal_form(IntMatrix{{2, 0}, {0, 4}});
    REQUIRE(r2.diagonal == std::vector<Int>{2, 4});
}

TEST_CASE("smith normal form product identity and unimodular transforms") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 500; ++trial) {
        IntMatrix m = oracle::random_matrix(rng, 4, -5, 5);
        SNFResult r = smith_normal_form(m);
        REQUIRE(divisibility_chain_ok(r.diagonal));
        REQUIRE(abs(oracle::cofactor_det(r.left_transform)) == 1);
        REQUIRE(abs(oracle::cofactor_det(r.right_transform)) == 1);
        REQUIRE(mul(mul(r.left_transform, m), r.right_transform) == diag_of(r, m.rows, m.cols));

        Int prod = 1;
        for (const Int& d : r.diagonal)
            prod *= d;
        Int dm = oracle::cofactor_det(m);
        REQUIRE((prod == dm || prod == -dm));
    }
}

TEST_CASE("smith normal form on non-square matrices") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dist(-4, 4);
    for (int trial = 0; trial < 50; ++trial) {
        IntMatrix m(2, 5);
        for (auto& e : m.entries)
            e = dist(rng);
        SNFResult r = smith_normal_form(m);
        REQUIRE(divisibility_chain_ok(r.diagonal));
        REQUIRE(mul(mul(r.left_transform, m), r.right_transform) == diag_of(r, m.rows, m.cols));
    }
}

TEST_CASE("kernel basis spans the integer kernel saturatedly") {
    IntMatrix m{{0, 3, -2}};  // gcd(3,2)=1: kernel rank 2
    IntMatrix k = kernel_basis(m);
    REQUIRE(k.cols == 2);
    IntMatrix prod = mul(m, k);
    for (const Int& e : prod.entries)
        REQUIRE(e == 0);
}

TEST_CASE("cokernel invariant factors") {
    REQUIRE(cokernel_invariant_factors(IntMatrix{{2, 0}, {0, 4}}) == std::vector<Int>{2, 4});
    // Z^2 / im([[1,0],[0,0]]) = Z
    REQUIRE(cokernel_invariant_factors(IntMatrix{{1, 0}, {0, 0}}) == std::vector<Int>{0});
    REQUIRE(cokernel_invariant_factors(IntMatrix{{0, 1}, {1, -3}}).empty());
}

TEST_CASE("classify_form on the G(n) fixtures") {
    for (int n = 1; n <= 9; n += 2) {
        FormClass fc = classify_form(IntMatrix{{0, 1}, {1, -n}});
        CHECK(fc.parity == Parity::odd);
        CHECK(fc.unimodular);
        CHECK(fc.definiteness == Definiteness::indefinite);
    }
    FormClass even = classify_form(IntMatrix{{0, 1}, {1, -2}});
    CHECK(even.parity == Parity::even);
    CHECK(even.unimodular);
    CHECK(even.definiteness == Definiteness::indefinite);
    CHECK(even.signature == 0);  // frozen from the 2x2 det/trace oracle

    FormClass one = classify_form(IntMatrix{{1}});
    CHECK(one.parity == Parity::odd);
    CHECK(one.unimodular);
    CHECK(one.definiteness == Definiteness::positive);
}

TEST_CASE("classify_form rejects non-symmetric input") {
    REQUIRE_THROWS_AS(classify_form(IntMatrix{{0, 1}, {2, 0}}), Error);
}

TEST_CASE("signature matches the 2x2 oracle on random symmetric matrices") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        IntMatrix q = oracle::random_symmetric(rng, 2, -6, 6);
        auto [pos, neg] = symmetric_inertia(q);
        Int d = oracle::cofactor_det(q);
        if (d != 0)
            REQUIRE(pos - neg == oracle::signature_2x2(q));
        REQUIRE(pos + neg == (d != 0 ? 2 : (q.at(0, 0) == 0 && q.at(0, 1) == 0 && q.at(1, 1) == 0 ? 0 : 1)));
    }
}

TEST_CASE("parity equals all-diagonal-even on random symmetric matrices") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 1000; ++trial) {
        IntMatrix q = oracle::random_symmetric(rng, 4, -5, 5);
        bool all_even = true;
        for (std::size_t i = 0; i < 4; ++i)
            if (q.at(i, i) % 2 != 0)
                all_even = false;
        REQUIRE((classify_form(q).parity == Parity::even) == all_even);
    }
}

TEST_CASE("signature is stable under random congruence") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> pick(0, 3), sgn(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        IntMatrix q = oracle::random_symmetric(rng, 4, -4, 4);
        auto before = symmetric_inertia(q);
        IntMatrix u = IntMatrix::identity(4);
        for (int k = 0; k < 6; ++k) {
            int i = pick(rng), j = pick(rng);
            if (i == j)
                continue;
            IntMatrix shear = IntMatrix::identity(4);
            shear.at(i, j) = sgn(rng) ? 1 : -1;
            u = mul(u, shear);
        }
        IntMatrix conj = mul(mul(transpose(u), q), u);
        REQUIRE(symmetric_inertia(conj) == before);
    }
}

TEST_CASE("divisibility_split") {
    auto [d1, v1] = divisibility_split({2, 4, 6});
    REQUIRE(d1 == 2);
    REQUIRE(v1 == std::vector<Int>{1, 2, 3});

    auto [d2, v2] = divisibility_split({0, 5});
    REQUIRE(d2 == 5);
    REQUIRE(v2 == std::vector<Int>{0, 1});

    // (p * d_T, 0) with p = 3, d_T = 2: gcd oracle gives 6
    auto [d3, v3] = divisibility_split({6, 0});
    REQUIRE(d3 == 6);
    REQUIRE(v3 == std::vector<Int>{1, 0});

    REQUIRE_THROWS_AS(divisibility_split({0, 0}), Error);
}

TEST_CASE("divisibility_split round trip on random vectors") {
    std::mt19937_64 rng(55);
    std::uniform_int_distribution<int> dist(-9, 9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Int> v(4);
        bool all_zero = true;
        for (auto& x : v) {
            x = dist(rng);
            if (x != 0)
                all_zero = false;
        }
        if (all_zero)
            v[0] = 1;
        auto [d, vhat] = divisibility_split(v);
        REQUIRE(content(vhat) == 1);
        for (std::size_t i = 0; i < v.size(); ++i)
            REQUIRE(d * vhat[i] == v[i]);
    }
}
