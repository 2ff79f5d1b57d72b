#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "helpers.hpp"
#include "quartica/fixtures.hpp"
#include "quartica/io.hpp"

using namespace quartica;

namespace {

bool same_real(const Real& a, const Real& b) { return Real::cmp(a, b) == 0; }

bool same_ball(const Ball& a, const Ball& b) {
    return same_real(a.re, b.re) && same_real(a.im, b.im) &&
           same_real(a.rad, b.rad);
}

/** Fresh scratch directory, cleaned up per run. */
std::filesystem::path scratch_dir() {
    const auto dir =
        std::filesystem::temp_directory_path() / "quartica_io_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

const SyntheticFixture& default_fixture() {
    static const SyntheticFixture fx = make_synthetic_fixture();
    return fx;
}

const PeriodData& default_period_data() {
    static const PeriodData P = make_period_data(
        default_fixture().lattice, default_fixture().f, default_fixture().A,
        default_fixture().prec);
    return P;
}

}  // namespace

TEST_CASE("rational strings round-trip and reject junk") {
    for (const char* s : {"0", "-7", "3/4", "-22/7", "123456789012345678901/7"})
        CHECK(rat_to_string(parse_rat(s)) == s);
    CHECK(parse_rat("6/4") == Rat(3, 2));  // canonicalized on input

    CHECK_THROWS_AS(parse_rat(""), ParseError);
    CHECK_THROWS_AS(parse_rat("3/0"), ParseError);
    CHECK_THROWS_AS(parse_rat("1.5"), ParseError);
    CHECK_THROWS_AS(parse_rat("two"), ParseError);

    CHECK(parse_int("-42") == Int(-42));
    CHECK_THROWS_AS(parse_int("4e2"), ParseError);
}

TEST_CASE("dyadic decimals round-trip exactly, others are rejected") {
    for (const Rat& q : {Rat(0), Rat(3, 8), Rat(-1, Int(1) << 40), Rat(25)}) {
        const Real v = Real::of_rat(q, 128, MPFR_RNDN);
        const Real back = real_from_dyadic_decimal(to_exact_decimal(v));
        CHECK(real_to_rat(back) == q);
    }
    CHECK_THROWS_AS(real_from_dyadic_decimal("0.1"), ParseError);
    CHECK_THROWS_AS(real_from_dyadic_decimal("x"), ParseError);
}

TEST_CASE("polynomial records preserve terms and validate structure") {
    qt::Rng rng(20260814);

    SECTION("round-trips across degrees") {
        for (int deg : {4, 8, 12}) {
            const QPoly p = qt::random_poly(rng, deg, 12);
            const QPoly back = poly_from_json(poly_to_json(p));
            CHECK(back == p);
            CHECK(back.degree() == deg);
        }
        const QPoly f = qt::fermat_quartic();
        CHECK(poly_from_json(poly_to_json(f)) == f);
    }

    SECTION("serialization is deterministic and ordered") {
        const QPoly p = qt::random_poly(rng, 8, 10);
        CHECK(poly_to_json(p).dump() == poly_to_json(p).dump());
        // graded-lex descending: first record is the leading monomial
        const Json j = poly_to_json(qt::fermat_quartic());
        CHECK(j[0]["e"] == Json::array({4, 0, 0, 0}));
        CHECK(j[3]["e"] == Json::array({0, 0, 0, 4}));
    }

    SECTION("empty lists need an explicit degree") {
        CHECK_THROWS_AS(poly_from_json(Json::array()), ParseError);
        const QPoly z = poly_from_json(Json::array(), 9);
        CHECK(z.is_zero());
        CHECK(z.degree() == 9);
    }

    SECTION("malformed records are rejected with context") {
        Json bad = Json::array();
        bad.push_back(Json{{"e", Json::array({4, 0, 0, 0})}, {"c", "1"}});
        bad.push_back(Json{{"e", Json::array({1, 0, 0, 0})}, {"c", "1"}});
        CHECK_THROWS_AS(poly_from_json(bad), ParseError);  // inhomogeneous

        Json dup = Json::array();
        dup.push_back(Json{{"e", Json::array({4, 0, 0, 0})}, {"c", "1"}});
        dup.push_back(Json{{"e", Json::array({4, 0, 0, 0})}, {"c", "2"}});
        CHECK_THROWS_AS(poly_from_json(dup), ParseError);

        Json neg = Json::array();
        neg.push_back(Json{{"e", Json::array({5, -1, 0, 0})}, {"c", "1"}});
        CHECK_THROWS_AS(poly_from_json(neg), ParseError);

        Json zero = Json::array();
        zero.push_back(Json{{"e", Json::array({4, 0, 0, 0})}, {"c", "0"}});
        CHECK_THROWS_AS(poly_from_json(zero), ParseError);

        Json short_e = Json::array();
        short_e.push_back(Json{{"e", Json::array({4, 0, 0})}, {"c", "1"}});
        CHECK_THROWS_AS(poly_from_json(short_e), ParseError);

        CHECK_THROWS_AS(poly_from_json(Json{{"not", "an array"}}), ParseError);

        // degree mismatch against an explicitly requested slice
        CHECK_THROWS_AS(poly_from_json(poly_to_json(qt::fermat_quartic()), 9),
                        ParseError);
    }
}

TEST_CASE("lattice files round-trip through full validation") {
    const LatticeData L = standard_k3_lattice();
    const Json j = lattice_to_json(L);
    const LatticeData back = lattice_from_json(j);
    CHECK(back.gram() == L.gram());
    CHECK(back.h_coords() == L.h_coords());

    SECTION("structural junk is a parse error") {
        Json bad = j;
        bad.erase("h");
        CHECK_THROWS_AS(lattice_from_json(bad), ParseError);
        Json bad2 = j;
        bad2["gram"][0][0] = "one";
        CHECK_THROWS_AS(lattice_from_json(bad2), ParseError);
    }

    SECTION("semantic junk still hits lattice validation") {
        Json odd = j;
        odd["gram"][0][0] = 1;  // odd diagonal breaks evenness
        CHECK_THROWS(lattice_from_json(odd));
    }

    SECTION("classes are plain coordinate arrays") {
        const LatticeClass g = L.h();
        const LatticeClass back_g = lattice_class_from_json(lattice_class_to_json(g));
        CHECK(back_g.coords == g.coords);
        CHECK_THROWS_AS(lattice_class_from_json(Json{{"x", 1}}), ParseError);
    }
}

TEST_CASE("ball records round-trip exactly at matching precision") {
    SECTION("dyadic midpoints and radii are preserved bit for bit") {
        const Ball b(Real::of_rat(Rat(5, 16), 128, MPFR_RNDN),
                     Real::of_rat(Rat(-3, 4), 128, MPFR_RNDN),
                     Real::pow2(-40, 1, kRadPrec));
        const Ball back = ball_from_json(ball_to_json(b), 128);
        CHECK(same_ball(back, b));
    }

    SECTION("exact zero stays exact") {
        const Ball z = Ball::zero(256);
        const Ball back = ball_from_json(ball_to_json(z), 256);
        CHECK(back.is_exact());
        CHECK(back.re.is_zero());
    }

    SECTION("loading at lower precision widens, never narrows") {
        // 2^-100 is not representable below ~100 bits together with 1
        const Real mid = Real::add(Real::of_long(1, 128),
                                   Real::pow2(-100, 1, 128), 128, MPFR_RNDN);
        const Ball b = Ball::exact(mid, Real(128));
        const Ball back = ball_from_json(ball_to_json(b), 64);
        CHECK(back.rad.sgn() > 0);  // conversion slack keeps the enclosure
        CHECK(ball_contains_zero(ball_sub(back, b, 256)));
    }

    SECTION("negative radius rejected") {
        Json j = ball_to_json(Ball::one(64));
        j["rad"] = "-0.5";
        CHECK_THROWS_AS(ball_from_json(j, 64), ParseError);
        Json j2 = ball_to_json(Ball::one(64));
        j2.erase("mid_im");
        CHECK_THROWS_AS(ball_from_json(j2, 64), ParseError);
    }
}

TEST_CASE("period matrices round-trip with a validated header") {
    const SyntheticFixture& fx = default_fixture();
    const Json j = period_matrix_to_json(fx.A);
    const BallMat back = period_matrix_from_json(j, fx.prec);
    REQUIRE(back.rows == fx.A.rows);
    REQUIRE(back.cols == fx.A.cols);
    for (size_t i = 0; i < back.rows; ++i)
        for (size_t k = 0; k < back.cols; ++k)
            CHECK(same_ball(back.at(i, k), fx.A.at(i, k)));

    SECTION("monomial order is checked entry by entry") {
        Json bad = j;
        std::swap(bad["monomials"][0], bad["monomials"][1]);
        CHECK_THROWS_AS(period_matrix_from_json(bad, fx.prec), ParseError);
    }

    SECTION("shape mismatches are rejected") {
        Json bad = j;
        bad["rows"] = 21;
        CHECK_THROWS_AS(period_matrix_from_json(bad, fx.prec), ShapeMismatch);
        Json bad2 = j;
        bad2["entries"][3].erase(0);
        CHECK_THROWS_AS(period_matrix_from_json(bad2, fx.prec), ShapeMismatch);
    }

    SECTION("custom basis labels must cover every row") {
        CHECK_THROWS_AS(period_matrix_to_json(fx.A, {"e1", "e2"}),
                        ShapeMismatch);
    }
}

TEST_CASE("period data loads from its three files end to end") {
    const auto dir = scratch_dir();
    const SyntheticFixture& fx = default_fixture();
    const std::string f_path = (dir / "f.json").string();
    const std::string lat_path = (dir / "lattice.json").string();
    const std::string per_path = (dir / "periods.json").string();

    save_json_file(f_path, poly_to_json(fx.f));
    save_json_file(lat_path, lattice_to_json(fx.lattice));
    save_json_file(per_path, period_matrix_to_json(fx.A));

    const PeriodData P = load_period_data(f_path, lat_path, per_path, fx.prec);
    const PeriodData& direct = default_period_data();
    REQUIRE(P.pairings.size() == direct.pairings.size());
    for (size_t i = 0; i < P.pairings.size(); ++i)
        CHECK(same_ball(P.pairings[i], direct.pairings[i]));
    CHECK(same_real(P.omega_norm_lower, direct.omega_norm_lower));

    SECTION("saved files are byte-stable") {
        const Json again = load_json_file(per_path);
        CHECK(again.dump(1) == period_matrix_to_json(fx.A).dump(1));
    }

    SECTION("file errors carry the path") {
        CHECK_THROWS_WITH(load_poly_file((dir / "missing.json").string()),
                          Catch::Matchers::ContainsSubstring("missing.json"));
        std::ofstream((dir / "junk.json").string()) << "{ not json";
        CHECK_THROWS_AS(load_json_file((dir / "junk.json").string()),
                        ParseError);
    }

    SECTION("period validation fires on inconsistent inputs") {
        qt::Rng rng(7);
        // wrong base quartic: the planted form no longer satisfies the
        // omega constraints of the serialized pairing map
        save_json_file((dir / "f2.json").string(),
                       poly_to_json(qt::random_dense_poly(rng, 4)));
        CHECK_THROWS(load_period_data((dir / "f2.json").string(), lat_path,
                                      per_path, fx.prec));
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("division-table caches reload without recomputation") {
    const QPoly f = qt::fermat_quartic();
    const DivisionMap Q = DivisionMap::build(f);
    const Json j = division_map_to_json(Q);
    const DivisionMap back = division_map_from_json(j);

    CHECK(back.base() == f);
    CHECK(back.operator_norm() == Q.operator_norm());
    CHECK(back.verify());

    // reloaded table divides like the original
    qt::Rng rng(31);
    const QPoly probe = qt::random_poly(rng, 12, 6);
    const auto got = back.divide(probe);
    const auto want = Q.divide(probe);
    for (int i = 0; i < 4; ++i) CHECK(got[i] == want[i]);

    SECTION("stored norm is cross-checked") {
        Json bad = j;
        bad["norm"] = "7/3";
        CHECK_THROWS_AS(division_map_from_json(bad), LedgerInconsistency);
    }

    SECTION("verify() catches corrupted columns") {
        std::vector<std::array<QPoly, 4>> cols;
        for (size_t m = 0; m < Q.basis12().size(); ++m) cols.push_back(Q.column(m));
        // wipe the first genuinely nonzero cofactor; the sparse table leaves
        // most slots empty, and zeroing those would keep the identity intact
        bool wiped = false;
        for (auto& quad : cols) {
            for (auto& b : quad)
                if (!b.is_zero()) {
                    b = QPoly(9);
                    wiped = true;
                    break;
                }
            if (wiped) break;
        }
        REQUIRE(wiped);
        bool tampered_ok = true;
        try {
            const DivisionMap t = DivisionMap::from_columns(f, std::move(cols));
            tampered_ok = t.verify();
        } catch (const Error&) {
            tampered_ok = false;  // norm/shape checks may fire first
        }
        CHECK_FALSE(tampered_ok);
    }

    SECTION("column counts are enforced") {
        Json bad = j;
        bad["columns"].erase(0);
        CHECK_THROWS(division_map_from_json(bad));
    }
}

TEST_CASE("constants caches reload bit for bit and stay idempotent") {
    const PeriodData& P = default_period_data();

    SECTION("production constants") {
        const SeparationConstants sc =
            assemble_constants(P, 1, Real::of_long(0), 128, false);
        const Json j = constants_to_json(sc);
        const std::string s1 = j.dump(1);
        const SeparationConstants rt = constants_from_json(j);

        CHECK(rt.precision == sc.precision);
        CHECK(rt.test_mode == sc.test_mode);
        CHECK(rt.field_degree == sc.field_degree);
        CHECK(same_real(rt.height_h, sc.height_h));
        CHECK(same_real(rt.c_lemma, sc.c_lemma));
        CHECK(same_real(rt.gamma_up, sc.gamma_up));
        CHECK(same_real(rt.c_f, sc.c_f));
        CHECK(same_real(rt.eps_f, sc.eps_f));
        CHECK(same_real(rt.log2_c, sc.log2_c));
        // the derived bound is recomputed the same way assembly produced it
        CHECK(same_real(rt.c_up, sc.c_up));

        CHECK(constants_to_json(rt).dump(1) == s1);
    }

    SECTION("test-mode constants keep the flag and a sound c bound") {
        const SeparationConstants sc =
            assemble_constants(P, 1, Real::of_long(0), 128, true);
        const SeparationConstants rt = constants_from_json(constants_to_json(sc));
        CHECK(rt.test_mode);
        CHECK(same_real(rt.log2_c, sc.log2_c));
        // c_up is recomputed from log2_c; it may sit one step above the
        // assembly value but never below it (both bound c = 1 + 2^-20)
        CHECK(Real::cmp(rt.c_up, sc.c_up) >= 0);
        const Real c_exact = Real::of_rat(Rat((Int(1) << 20) + 1, Int(1) << 20),
                                          128, MPFR_RNDN);
        CHECK(Real::cmp(rt.c_up, c_exact) >= 0);
    }

    SECTION("impossible stored values are rejected") {
        const SeparationConstants sc =
            assemble_constants(P, 1, Real::of_long(0), 128, true);
        Json bad = constants_to_json(sc);
        bad["c_lemma"] = "0";
        CHECK_THROWS_AS(constants_from_json(bad), ParseError);
        Json bad2 = constants_to_json(sc);
        bad2["provenance"]["precision"] = 0;
        CHECK_THROWS_AS(constants_from_json(bad2), ParseError);
        Json bad3 = constants_to_json(sc);
        bad3["field_degree"] = 0;
        CHECK_THROWS_AS(constants_from_json(bad3), ParseError);
    }
}

TEST_CASE("theta chains round-trip both exact and tower entries") {
    std::vector<ThetaEntry> chain;
    chain.push_back(ThetaEntry::of_int(Int(3)));
    chain.push_back(ThetaEntry::of_int(Int(1) << 500));  // arbitrary precision
    chain.push_back(ThetaEntry::of_tower(
        TowerReal::from_log2(Real::of_rat(Rat(1 << 14), 64, MPFR_RNDN),
                             RoundDir::Up)));
    chain.push_back(ThetaEntry::of_tower(
        TowerReal::from_log2log2(Real::of_rat(Rat(45), 64, MPFR_RNDN),
                                 RoundDir::Down)));

    const Json j = theta_chain_to_json(chain);
    const auto back = theta_chain_from_json(j);
    REQUIRE(back.size() == chain.size());

    CHECK(*back[0].exact == Int(3));
    CHECK(*back[1].exact == (Int(1) << 500));
    REQUIRE(back[2].tower.has_value());
    CHECK(back[2].tower->level() == 1);
    CHECK(back[2].tower->dir() == RoundDir::Up);
    CHECK(same_real(back[2].tower->stored(), chain[2].tower->stored()));
    REQUIRE(back[3].tower.has_value());
    CHECK(back[3].tower->level() == 2);
    CHECK(back[3].tower->dir() == RoundDir::Down);

    SECTION("plain JSON integers are accepted on input") {
        const auto small = theta_chain_from_json(Json::array({2, 5}));
        CHECK(*small[1].exact == Int(5));
    }

    SECTION("junk entries are rejected") {
        CHECK_THROWS_AS(theta_chain_from_json(Json::array({"abc"})), ParseError);
        CHECK_THROWS_AS(theta_chain_from_json(Json::array(
                            {Json{{"level", 3}, {"log2", "4"}, {"dir", "up"}}})),
                        ParseError);
        CHECK_THROWS_AS(theta_chain_from_json(Json::array(
                            {Json{{"level", 1}, {"log2", "0.3"}, {"dir", "up"}}})),
                        ParseError);
        CHECK_THROWS_AS(
            theta_chain_from_json(Json::array(
                {Json{{"level", 1}, {"log2", "4"}, {"dir", "sideways"}}})),
            ParseError);
        CHECK_THROWS_AS(theta_chain_from_json(Json::array({"0"})), InvalidInput);
        CHECK_THROWS_AS(theta_chain_from_json(Json{{"k", 1}}), ParseError);
    }

    SECTION("descriptors survive a growth check round-trip") {
        // θ_{i+1} = θ_i^10 witnesses: a passing chain stays passing on reload
        std::vector<ThetaEntry> ok;
        ok.push_back(ThetaEntry::of_int(Int(16)));
        Int t = 16;
        for (int i = 0; i < 3; ++i) {
            Int next;
            mpz_pow_ui(next.get_mpz_t(), t.get_mpz_t(), 10);
            t = next;
            ok.push_back(ThetaEntry::of_int(t));
        }
        const auto reloaded = theta_chain_from_json(theta_chain_to_json(ok));
        CHECK(liouville_growth_check(ok).pass ==
              liouville_growth_check(reloaded).pass);
    }
}
