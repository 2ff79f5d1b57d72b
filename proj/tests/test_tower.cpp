#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "quartica/tower.hpp"

using namespace quartica;

namespace {

TowerReal tw_int(long x, RoundDir d = RoundDir::Up) {
    return TowerReal::of_int(Int(x), d);
}

} // namespace

TEST_CASE("levels agree on exact powers of two") {
    const TowerReal a = tw_int(1024);
    const TowerReal b = TowerReal::from_log2(Real::of_long(10, 128),
                                             RoundDir::Up);
    REQUIRE(tower_cmp(a, b) == 0);
    REQUIRE(tower_cmp(b, a) == 0);

    const TowerReal c = TowerReal::from_log2log2(Real::of_long(3, 128),
                                                 RoundDir::Up);
    REQUIRE(tower_cmp(c, tw_int(256)) == 0);  // 2^2^3
    REQUIRE(tower_cmp(c, tw_int(257)) < 0);
    REQUIRE(tower_cmp(c, tw_int(255)) > 0);
}

TEST_CASE("values past 2^53 promote automatically") {
    const Real big = Real::pow2(60, 1, 128);  // 2^60 at level 0
    const TowerReal t = TowerReal::of_real(big, RoundDir::Up, 0);
    REQUIRE(t.level() == 1);
    REQUIRE(Real::cmp_long(t.stored(), 60) == 0);

    const TowerReal u = TowerReal::from_log2(big, RoundDir::Up);
    REQUIRE(u.level() == 2);
    REQUIRE(Real::cmp_long(u.stored(), 60) == 0);

    REQUIRE(tw_int(1000).level() == 0);
}

TEST_CASE("multiplication across levels") {
    REQUIRE(tower_cmp(tower_mul(tw_int(3), tw_int(5)), tw_int(15)) == 0);

    const TowerReal p10 = TowerReal::from_log2(Real::of_long(10, 128),
                                               RoundDir::Up);
    const TowerReal p20 = TowerReal::from_log2(Real::of_long(20, 128),
                                               RoundDir::Up);
    const TowerReal p30 = tower_mul(p10, p20);
    REQUIRE(p30.level() == 1);
    REQUIRE(tower_cmp(p30, TowerReal::of_int(Int(1) << 30, RoundDir::Up)) ==
            0);

    // mixed level: 4 · 2^3 = 2^5
    const TowerReal m = tower_mul(
        tw_int(4), TowerReal::from_log2(Real::of_long(3, 128), RoundDir::Up));
    REQUIRE(tower_cmp(m, tw_int(32)) == 0);

    // level 2: (2^2^20)² has log₂log₂ exactly 2^20 + 1
    const TowerReal huge = TowerReal::from_log2log2(
        Real::pow2(20, 1, 128), RoundDir::Up);
    const TowerReal sq = tower_mul(huge, huge);
    REQUIRE(sq.level() == 2);
    REQUIRE(real_to_rat(sq.stored()) == Rat(1048577));
}

TEST_CASE("powers") {
    const TowerReal two = tw_int(2);
    const TowerReal up = tower_pow(two, Rat(9, 2));
    const TowerReal down = tower_pow(tw_int(2, RoundDir::Down), Rat(9, 2));
    const TowerReal exact =
        TowerReal::from_log2(Real::of_rat(Rat(9, 2), 128, MPFR_RNDN),
                             RoundDir::Up);
    REQUIRE(tower_cmp(down, exact) <= 0);  // 2^(9/2) bracketed tightly:
    REQUIRE(tower_cmp(up, exact) >= 0);
    const TowerReal barely_more = TowerReal::from_log2(
        Real::add(Real::of_rat(Rat(9, 2), 128, MPFR_RNDN),
                  Real::pow2(-100, 1, 128), 128, MPFR_RNDU),
        RoundDir::Up);
    REQUIRE(tower_cmp(up, barely_more) < 0);

    const TowerReal p7 = TowerReal::from_log2(Real::of_long(7, 128),
                                              RoundDir::Up);
    REQUIRE(tower_cmp(tower_pow(p7, Rat(3)),
                      TowerReal::from_log2(Real::of_long(21, 128),
                                           RoundDir::Up)) == 0);

    const TowerReal l2 = TowerReal::from_log2log2(Real::of_long(4, 128),
                                                  RoundDir::Up);
    REQUIRE(tower_cmp(tower_pow(l2, Rat(2)),
                      TowerReal::from_log2log2(Real::of_long(5, 128),
                                               RoundDir::Up)) == 0);

    REQUIRE_THROWS_AS(tower_pow(two, Rat(-1)), InvalidInput);
    REQUIRE_THROWS_AS(tower_pow(tw_int(-2), Rat(2)), InvalidInput);
}

TEST_CASE("addition") {
    REQUIRE(tower_cmp(tower_add(tw_int(2), tw_int(3)), tw_int(5)) == 0);

    const TowerReal p10u = TowerReal::from_log2(Real::of_long(10, 128),
                                                RoundDir::Up);
    REQUIRE(tower_cmp(tower_add(p10u, p10u), tw_int(2048)) == 0);

    // level 2 brackets: down ≤ exact(512) ≤ up for 256 + 256
    const TowerReal du = TowerReal::from_log2log2(Real::of_long(3, 128),
                                                  RoundDir::Up);
    const TowerReal dd = TowerReal::from_log2log2(Real::of_long(3, 128),
                                                  RoundDir::Down);
    const TowerReal exact = tw_int(512);
    REQUIRE(tower_cmp(tower_add(du, du), exact) >= 0);
    REQUIRE(tower_cmp(tower_add(dd, dd), exact) <= 0);
}

TEST_CASE("mixed rounding directions are rejected") {
    const TowerReal a = tw_int(2, RoundDir::Up);
    const TowerReal b = tw_int(3, RoundDir::Down);
    REQUIRE_THROWS_AS(tower_mul(a, b), InvalidInput);
    REQUIRE_THROWS_AS(tower_add(a, b), InvalidInput);
}

TEST_CASE("comparisons agree with exact evaluation on random cross-level pairs") {
    qt::Rng rng(9001);
    std::uniform_int_distribution<long> num(2, 1L << 40);
    std::uniform_int_distribution<int> lv(0, 2);

    auto rep = [&](const Rat& q, int level) {
        // a faithful enclosure of q at the requested level
        Real v = Real::of_rat(q, 256, MPFR_RNDN);
        for (int l = 0; l < level; ++l) v = Real::log2(v, 256, MPFR_RNDN);
        return TowerReal::of_real(v, RoundDir::Up, level);
    };

    int done = 0;
    while (done < 1000) {
        const Rat qa(num(rng), 1 + (num(rng) & 1023));
        const Rat qb(num(rng), 1 + (num(rng) & 1023));
        if (qa == qb || qa <= 1 || qb <= 1) continue;
        const int la = lv(rng), lb = lv(rng);
        const int got = tower_cmp(rep(qa, la), rep(qb, lb));
        const int want = qa < qb ? -1 : 1;
        REQUIRE(got == want);
        ++done;
    }
}

TEST_CASE("min and max") {
    const TowerReal a = tw_int(100);
    const TowerReal b = TowerReal::from_log2(Real::of_long(10, 128),
                                             RoundDir::Up);  // 1024
    REQUIRE(tower_cmp(tower_max(a, b), b) == 0);
    REQUIRE(tower_cmp(tower_min(a, b), a) == 0);
}

TEST_CASE("description names the level") {
    REQUIRE(tw_int(7).describe().find("level 0") != std::string::npos);
    const TowerReal t = TowerReal::from_log2log2(Real::of_long(9, 128),
                                                 RoundDir::Up);
    REQUIRE(t.describe().find("level 2") != std::string::npos);
    REQUIRE(t.describe().find("log2(log2(x))") != std::string::npos);
}
