#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "quartica/lattice.hpp"

using namespace quartica;

namespace {

LatticeClass basis_vec(size_t i) {
    LatticeClass g{std::vector<Int>(LatticeData::kRank, Int(0))};
    g.coords[i] = 1;
    return g;
}

LatticeClass random_class(qt::Rng& rng) {
    std::uniform_int_distribution<int> d(-5, 5);
    LatticeClass g{std::vector<Int>(LatticeData::kRank)};
    for (auto& c : g.coords) c = d(rng);
    return g;
}

LatticeClass add(const LatticeClass& a, const LatticeClass& b) {
    LatticeClass out = a;
    for (size_t i = 0; i < out.coords.size(); ++i)
        out.coords[i] += b.coords[i];
    return out;
}

LatticeClass negate(const LatticeClass& a) {
    LatticeClass out = a;
    for (auto& c : out.coords) c = -c;
    return out;
}

} // namespace

TEST_CASE("the reference lattice validates and h has square 4") {
    const LatticeData L = standard_k3_lattice();
    REQUIRE(pair(L.h(), L.h(), L) == 4);
}

TEST_CASE("pairing is symmetric, bilinear, and even on the diagonal") {
    const LatticeData L = standard_k3_lattice();
    qt::Rng rng(17);
    for (int t = 0; t < 50; ++t) {
        const LatticeClass a = random_class(rng), b = random_class(rng),
                           c = random_class(rng);
        REQUIRE(pair(a, b, L) == pair(b, a, L));
        REQUIRE(pair(add(a, b), c, L) == pair(a, c, L) + pair(b, c, L));
        REQUIRE(mpz_even_p(pair(a, a, L).get_mpz_t()));
    }
}

TEST_CASE("discriminant values") {
    const LatticeData L = standard_k3_lattice();
    REQUIRE(discriminant(L.h(), L) == 0);

    // γ = f₁ + (first root of the E₈(−1) block): γ·h = 1, γ·γ = −2 → Δ = 9
    LatticeClass g1 = basis_vec(1);
    g1.coords[6] = 1;
    REQUIRE(pair(g1, L.h(), L) == 1);
    REQUIRE(pair(g1, g1, L) == -2);
    REQUIRE(discriminant(g1, L) == 9);

    // γ = h + root: γ·h = 4, γ·γ = 2 → Δ = 8
    LatticeClass g2 = L.h();
    g2.coords[6] += 1;
    REQUIRE(pair(g2, L.h(), L) == 4);
    REQUIRE(pair(g2, g2, L) == 2);
    REQUIRE(discriminant(g2, L) == 8);
}

TEST_CASE("discriminant symmetries") {
    const LatticeData L = standard_k3_lattice();
    qt::Rng rng(23);
    for (int t = 0; t < 50; ++t) {
        const LatticeClass g = random_class(rng);
        const Int d = discriminant(g, L);
        REQUIRE(discriminant(add(g, L.h()), L) == d);
        REQUIRE(discriminant(negate(g), L) == d);
    }
}

TEST_CASE("admissible discriminants") {
    REQUIRE(is_admissible_delta(Int(9)));
    REQUIRE(is_admissible_delta(Int(8)));
    REQUIRE(is_admissible_delta(Int(4)));
    REQUIRE(is_admissible_delta(Int(1)));
    REQUIRE(is_admissible_delta(Int(12)));
    REQUIRE(is_admissible_delta(Int(17)));
    REQUIRE_FALSE(is_admissible_delta(Int(3)));
    REQUIRE_FALSE(is_admissible_delta(Int(0)));
    REQUIRE_FALSE(is_admissible_delta(Int(-8)));
    REQUIRE_FALSE(is_admissible_delta(Int(2)));
    REQUIRE_FALSE(is_admissible_delta(Int(7)));
}

TEST_CASE("validation rejects broken lattices") {
    const LatticeData L = standard_k3_lattice();
    auto gram = L.gram();
    auto h = L.h_coords();

    SECTION("odd diagonal") {
        auto g = gram;
        g[6][6] = -3;
        REQUIRE_THROWS_AS(LatticeData::create(g, h), NotEven);
    }
    SECTION("not unimodular") {
        auto g = gram;
        g[0][1] = 2;
        g[1][0] = 2;
        REQUIRE_THROWS_AS(LatticeData::create(g, h), NotUnimodular);
    }
    SECTION("wrong signature") {
        auto g = gram;
        // flip the second E₈(−1) block to E₈(+1): still even and unimodular
        for (size_t i = 14; i < 22; ++i)
            for (size_t j = 14; j < 22; ++j) g[i][j] = -g[i][j];
        REQUIRE_THROWS_AS(LatticeData::create(g, h), WrongSignature);
    }
    SECTION("wrong h square") {
        auto hb = h;
        hb[1] = 3;  // h = e₁ + 3f₁ has square 6
        REQUIRE_THROWS_AS(LatticeData::create(gram, hb), WrongHSquare);
        hb[1] = 0;  // isotropic
        REQUIRE_THROWS_AS(LatticeData::create(gram, hb), WrongHSquare);
    }
    SECTION("asymmetric gram") {
        auto g = gram;
        g[0][2] = 1;
        REQUIRE_THROWS_AS(LatticeData::create(g, h), InvalidInput);
    }
    SECTION("wrong shape") {
        auto g = gram;
        g.pop_back();
        REQUIRE_THROWS_AS(LatticeData::create(g, h), ShapeMismatch);
    }
}

TEST_CASE("projection orthogonal to h") {
    const LatticeData L = standard_k3_lattice();
    qt::Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        const LatticeClass g = random_class(rng);
        const auto q = project_orthogonal_to_h(g, L);
        // q·h = 0 in rational arithmetic
        Rat qh(0);
        for (size_t i = 0; i < LatticeData::kRank; ++i) {
            Rat row(0);
            for (size_t j = 0; j < LatticeData::kRank; ++j)
                row += Rat(L.gram()[i][j]) * Rat(L.h_coords()[j]);
            qh += q[i] * row;
        }
        REQUIRE(qh == 0);
        // and γ = q + ¼(γ·h)·h coordinatewise
        const Rat t4 = Rat(pair(g, L.h(), L), Int(4));
        for (size_t i = 0; i < LatticeData::kRank; ++i)
            REQUIRE(Rat(g.coords[i]) == q[i] + t4 * Rat(L.h_coords()[i]));
    }
}
