// quartica — certified Picard-membership toolkit for quartic K3 surfaces.
//
// Subcommands wire the library into file-driven workflows: smoothness
// certification via exact Macaulay division, separation-constant assembly,
// the Picard membership decision, Noether–Lefschetz degree/height ledgers,
// modular-form degree bounds, and Liouville growth checks.
//
// Contract: identical inputs, flags, and precision produce byte-identical
// output.  Exit codes: 0 = success/conclusive positive, 1 = negative or
// inconclusive result, 2 = usage or data error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quartica/fixtures.hpp"
#include "quartica/io.hpp"
#include "quartica/mp_series.hpp"
#include "quartica/nl_bounds.hpp"
#include "quartica/pipeline.hpp"

using namespace quartica;

namespace {

enum class Format { Text, Csv, JsonLike };

struct RunConfig {
    mpfr_prec_t precision = 256;
    long order = 64;
    bool test_mode = false;
    Format format = Format::Text;
};

/** Deterministic short rendering of a Real (10 significant digits). */
std::string real_brief(const Real& v) {
    char buf[64];
    mpfr_snprintf(buf, sizeof buf, "%.10Rg", v.raw());
    return buf;
}

/** Tower rendering always states the level; exact values print in full. */
std::string tower_brief(const TowerReal& t) {
    if (t.level() == 0) return "level 0, x = " + real_brief(t.stored());
    return t.describe();
}

Json tower_json(const TowerReal& t) {
    const char* key[] = {"x", "log2", "log2log2"};
    return Json{{"level", t.level()},
                {key[t.level()], real_brief(t.stored())},
                {"dir", t.dir() == RoundDir::Up ? "up" : "down"}};
}

void echo_test_mode(const RunConfig& cfg) {
    if (cfg.test_mode)
        std::cout << "# test-mode: separation base c replaced by 1 + 2^-20 "
                     "(diagnostics only)\n";
}

/** Parse "c0,c1,...,c21" or the literal "h" into a lattice class. */
LatticeClass parse_class(const std::string& s, const LatticeData& L) {
    if (s == "h") return L.h();
    LatticeClass g;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t a = tok.find_first_not_of(" \t");
        size_t b = tok.find_last_not_of(" \t");
        if (a == std::string::npos)
            throw ParseError("class: empty coordinate in '" + s + "'");
        g.coords.push_back(parse_int(tok.substr(a, b - a + 1)));
    }
    if (g.coords.size() != LatticeData::kRank)
        throw ParseError("class: expected " +
                         std::to_string(LatticeData::kRank) +
                         " comma-separated coordinates or 'h', got " +
                         std::to_string(g.coords.size()));
    return g;
}

// ---------------------------------------------------------------------------
// smoothness: exact Macaulay division on the Jacobian ideal
// ---------------------------------------------------------------------------

int cmd_smoothness(const RunConfig& cfg, const std::string& f_path) {
    echo_test_mode(cfg);
    const QPoly f = load_poly_file(f_path);
    try {
        const DivisionMap Q = DivisionMap::build(f);
        if (cfg.format == Format::Csv) {
            std::cout << "status,norm\nSMOOTH," << rat_to_string(Q.operator_norm())
                      << "\n";
        } else if (cfg.format == Format::JsonLike) {
            std::cout << Json{{"status", "SMOOTH"},
                              {"norm", rat_to_string(Q.operator_norm())},
                              {"test_mode", cfg.test_mode}}
                             .dump(1)
                      << "\n";
        } else {
            std::cout << "SMOOTH  (division-map norm = "
                      << rat_to_string(Q.operator_norm()) << ")\n";
        }
        return 0;
    } catch (const SingularSurface&) {
        if (cfg.format == Format::Csv)
            std::cout << "status,norm\nSINGULAR,\n";
        else if (cfg.format == Format::JsonLike)
            std::cout << Json{{"status", "SINGULAR"},
                              {"test_mode", cfg.test_mode}}
                             .dump(1)
                      << "\n";
        else
            std::cout << "SINGULAR\n";
        return 1;
    }
}

// ---------------------------------------------------------------------------
// constants: assemble the separation constants and cache them with provenance
// ---------------------------------------------------------------------------

int cmd_constants(const RunConfig& cfg, const std::string& f_path,
                  const std::string& lat_path, const std::string& per_path,
                  const std::string& out_path, long field_degree,
                  const std::string& height_str) {
    echo_test_mode(cfg);
    const PeriodData P =
        load_period_data(f_path, lat_path, per_path, cfg.precision);
    Real height = height_str.empty()
                      ? weil_height_rational(P.f)
                      : Real::of_rat(parse_rat(height_str), 128, MPFR_RNDU);
    const SeparationConstants sc = assemble_constants(
        P, field_degree, height, cfg.precision, cfg.test_mode);
    save_json_file(out_path, constants_to_json(sc));

    if (cfg.format == Format::JsonLike) {
        std::cout << constants_to_json(sc).dump(1) << "\n";
    } else if (cfg.format == Format::Csv) {
        std::cout << "field,value\n"
                  << "c_lemma," << real_brief(sc.c_lemma) << "\n"
                  << "gamma_up," << real_brief(sc.gamma_up) << "\n"
                  << "c_f," << real_brief(sc.c_f) << "\n"
                  << "eps_f," << real_brief(sc.eps_f) << "\n"
                  << "log2_c," << real_brief(sc.log2_c) << "\n"
                  << "field_degree," << sc.field_degree << "\n"
                  << "height_h," << real_brief(sc.height_h) << "\n"
                  << "precision," << sc.precision << "\n"
                  << "test_mode," << (sc.test_mode ? "true" : "false") << "\n";
    } else {
        std::cout << "wrote " << out_path << "\n"
                  << "  c_lemma  >= surjectivity constant, = "
                  << real_brief(sc.c_lemma) << " (rounded down)\n"
                  << "  gamma    <= " << real_brief(sc.gamma_up)
                  << " (rounded up)\n"
                  << "  c_f      <= " << real_brief(sc.c_f)
                  << " (rounded up)\n"
                  << "  eps_f    >= " << real_brief(sc.eps_f)
                  << " (rounded down)\n"
                  << "  log2(c)  <= " << real_brief(sc.log2_c)
                  << " (rounded up)\n"
                  << "  field degree D = " << sc.field_degree
                  << ", height H <= " << real_brief(sc.height_h) << "\n"
                  << "  precision = " << sc.precision << " bits, test-mode = "
                  << (sc.test_mode ? "on" : "off") << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// decide: certified Picard membership for one lattice class
// ---------------------------------------------------------------------------

int cmd_decide(const RunConfig& cfg, const std::string& f_path,
               const std::string& lat_path, const std::string& per_path,
               const std::string& class_str, const std::string& cache_path,
               long field_degree, const std::string& height_str) {
    echo_test_mode(cfg);
    const PeriodData P =
        load_period_data(f_path, lat_path, per_path, cfg.precision);
    SeparationConstants sc;
    if (!cache_path.empty()) {
        sc = constants_from_json(load_json_file(cache_path));
        if (sc.test_mode != cfg.test_mode)
            throw InvalidInput(
                "constants cache disagrees with the --test-mode flag");
    } else {
        Real height = height_str.empty()
                          ? weil_height_rational(P.f)
                          : Real::of_rat(parse_rat(height_str), 128, MPFR_RNDU);
        sc = assemble_constants(P, field_degree, height, cfg.precision,
                                cfg.test_mode);
    }
    const LatticeClass g = parse_class(class_str, P.lattice);
    const Decision d = decide(g, P, sc);

    // keep the headline reason compact: "hyperplane class (rational multiple
    // of h)" collapses to its first clause
    std::string reason = d.detail;
    if (size_t p = reason.find(" ("); p != std::string::npos)
        reason = reason.substr(0, p);

    if (cfg.format == Format::JsonLike) {
        Json j{{"verdict", to_string(d.verdict)},
               {"detail", d.detail},
               {"delta", d.delta.get_str()},
               {"test_mode", cfg.test_mode}};
        if (d.required) j["required_bits"] = tower_json(*d.required);
        if (d.pairing_abs_lower)
            j["pairing_abs_lower"] = real_brief(*d.pairing_abs_lower);
        if (d.pairing_abs_upper)
            j["pairing_abs_upper"] = real_brief(*d.pairing_abs_upper);
        std::cout << j.dump(1) << "\n";
    } else {
        std::cout << to_string(d.verdict) << " (" << reason << ")\n";
        std::cout << "  discriminant = " << d.delta.get_str() << "\n";
        if (d.pairing_abs_lower && d.pairing_abs_upper)
            std::cout << "  |gamma.omega| in [" << real_brief(*d.pairing_abs_lower)
                      << ", " << real_brief(*d.pairing_abs_upper) << "]\n";
        if (d.required)
            std::cout << "  required certified bits of |gamma.omega|: "
                      << tower_brief(*d.required) << "\n";
    }

    switch (d.verdict) {
        case Verdict::InPicard: return 0;
        case Verdict::NotInPicard: return 1;
        case Verdict::Inconclusive: return 1;
        default: return 2;  // InternalInconsistency: data/constants are bad
    }
}

// ---------------------------------------------------------------------------
// nl-bound: degree/height ledgers for Noether–Lefschetz loci
// ---------------------------------------------------------------------------

int cmd_nl_bound(const RunConfig& cfg, long delta_lo, long delta_hi) {
    echo_test_mode(cfg);
    if (delta_hi < delta_lo) delta_hi = delta_lo;
    const long order = std::max(cfg.order, delta_hi);
    const IntSeries theta = theta_series(order);
    const IntSeries psi = psi_series(order);

    if (cfg.format == Format::Csv)
        std::cout << "delta,d,g,r,exponent,mp_degree,"
                     "deg_ledger_level,deg_ledger_log2,"
                     "deg_closed_level,deg_closed_log2,"
                     "height_ledger_level,height_ledger_log2\n";

    bool any = false;
    Json rows = Json::array();
    for (long delta = delta_lo; delta <= delta_hi; ++delta) {
        const auto dg = delta_to_dg(Int(delta));
        if (!dg) {
            if (cfg.format == Format::Text)
                std::cout << "Delta = " << delta
                          << ": not admissible (Delta mod 8 not in {0,1,4})\n";
            continue;
        }
        any = true;
        const HilbertDims hd = hilbert_dims(*dg);
        const TowerReal deg_l = deg_bound_ledger(*dg);
        const TowerReal deg_c = deg_bound_closed(Int(delta));
        const TowerReal ht_l = height_bound_ledger(*dg);
        const Int mp = theta[delta] - psi[delta];

        if (cfg.format == Format::Csv) {
            auto cell = [](const TowerReal& t) {
                return std::to_string(t.level()) + "," + real_brief(t.stored());
            };
            std::cout << delta << "," << dg->d.get_str() << ","
                      << dg->g.get_str() << "," << hd.r.get_str() << ","
                      << hd.exponent().get_str() << "," << mp.get_str() << ","
                      << cell(deg_l) << "," << cell(deg_c) << ","
                      << cell(ht_l) << "\n";
        } else if (cfg.format == Format::JsonLike) {
            rows.push_back(Json{{"delta", delta},
                                {"d", dg->d.get_str()},
                                {"g", dg->g.get_str()},
                                {"r", hd.r.get_str()},
                                {"exponent", hd.exponent().get_str()},
                                {"mp_degree", mp.get_str()},
                                {"deg_ledger", tower_json(deg_l)},
                                {"deg_closed", tower_json(deg_c)},
                                {"height_ledger", tower_json(ht_l)}});
        } else {
            std::cout << "Delta = " << delta << ": (d, g) = ("
                      << dg->d.get_str() << ", " << dg->g.get_str()
                      << "), Gotzmann r = " << hd.r.get_str()
                      << ", ambient exponent = " << hd.exponent().get_str()
                      << "\n"
                      << "  MP degree (theta - psi)[Delta] = " << mp.get_str()
                      << "\n"
                      << "  deg ledger bound:    " << tower_brief(deg_l) << "\n"
                      << "  deg closed form:     " << tower_brief(deg_c) << "\n"
                      << "  height ledger bound: " << tower_brief(ht_l) << "\n";
        }
    }
    if (cfg.format == Format::JsonLike)
        std::cout << Json{{"rows", std::move(rows)},
                          {"test_mode", cfg.test_mode}}
                         .dump(1)
                  << "\n";
    return any ? 0 : 1;
}

// ---------------------------------------------------------------------------
// mp-degree: exact modular-form degree bound coefficient
// ---------------------------------------------------------------------------

int cmd_mp_degree(const RunConfig& cfg, long delta) {
    echo_test_mode(cfg);
    const long order = std::max(cfg.order, delta);
    const Int v = mp_degree_upper(delta, order);
    if (cfg.format == Format::Csv)
        std::cout << "delta,mp_degree\n" << delta << "," << v.get_str() << "\n";
    else if (cfg.format == Format::JsonLike)
        std::cout << Json{{"delta", delta},
                          {"mp_degree", v.get_str()},
                          {"test_mode", cfg.test_mode}}
                         .dump(1)
                  << "\n";
    else
        std::cout << "MP degree bound at Delta = " << delta << ": "
                  << v.get_str() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// liouville: growth check of a denominator chain
// ---------------------------------------------------------------------------

int cmd_liouville(const RunConfig& cfg, const std::string& chain_path) {
    echo_test_mode(cfg);
    const std::vector<ThetaEntry> chain =
        theta_chain_from_json(load_json_file(chain_path));
    const GrowthReport rep = liouville_growth_check(chain);
    if (cfg.format == Format::JsonLike) {
        std::cout << Json{{"pass", rep.pass},
                          {"first_violation", rep.first_violation},
                          {"reason", rep.reason},
                          {"entries", chain.size()},
                          {"test_mode", cfg.test_mode}}
                         .dump(1)
                  << "\n";
    } else if (cfg.format == Format::Csv) {
        std::cout << "pass,first_violation,reason\n"
                  << (rep.pass ? "true" : "false") << ","
                  << rep.first_violation << "," << rep.reason << "\n";
    } else if (rep.pass) {
        std::cout << "PASS (" << chain.size() << " entries)\n";
    } else {
        std::cout << "FAIL at index " << rep.first_violation << " ("
                  << rep.reason << ")\n";
    }
    return rep.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// gen-fixture: synthetic period bundle for exercising the pipeline
// ---------------------------------------------------------------------------

int cmd_gen_fixture(const RunConfig& cfg, const std::string& out_dir,
                    const std::string& scale_str) {
    echo_test_mode(cfg);
    SyntheticOptions opt;
    opt.prec = cfg.precision;
    if (!scale_str.empty()) opt.scale = parse_rat(scale_str);
    const SyntheticFixture fx = make_synthetic_fixture(opt);
    save_json_file(out_dir + "/f.json", poly_to_json(fx.f));
    save_json_file(out_dir + "/lattice.json", lattice_to_json(fx.lattice));
    save_json_file(out_dir + "/periods.json", period_matrix_to_json(fx.A));
    std::cout << "wrote " << out_dir << "/f.json, " << out_dir
              << "/lattice.json, " << out_dir << "/periods.json\n"
              << "  precision = " << cfg.precision << " bits, scale = "
              << rat_to_string(fx.scale) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Certified Picard-membership toolkit for smooth quartic surfaces"};
    app.require_subcommand(1);

    RunConfig cfg;
    long precision_flag = 256;
    app.add_option("--precision", precision_flag,
                   "working precision in bits (>= 8)")
        ->check(CLI::Range(8L, 1L << 20));
    app.add_option("--order", cfg.order,
                   "series truncation order for theta computations")
        ->check(CLI::Range(1L, 100000L));
    app.add_flag("--test-mode", cfg.test_mode,
                 "replace the separation base c by 1 + 2^-20 (diagnostics "
                 "only; echoed in every output)");
    std::string fmt = "text";
    app.add_option("--format", fmt, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}));

    // smoothness
    std::string f_path;
    auto* sm = app.add_subcommand(
        "smoothness", "certify smoothness via exact Macaulay division")->fallthrough();
    sm->add_option("f", f_path, "quartic polynomial file")->required();

    // constants
    std::string c_f, c_lat, c_per, c_out, c_height;
    long c_degree = 1;
    auto* co = app.add_subcommand(
        "constants", "assemble and cache the separation constants")->fallthrough();
    co->add_option("f", c_f, "quartic polynomial file")->required();
    co->add_option("lattice", c_lat, "lattice file")->required();
    co->add_option("periods", c_per, "period matrix file")->required();
    co->add_option("-o,--out", c_out, "output cache file")->required();
    co->add_option("--field-degree", c_degree,
                   "degree D of the coefficient number field")
        ->check(CLI::PositiveNumber);
    co->add_option("--height", c_height,
                   "rational upper bound on the log Weil height of f "
                   "(default: computed from f)");

    // decide
    std::string d_f, d_lat, d_per, d_class, d_cache, d_height;
    long d_degree = 1;
    auto* de = app.add_subcommand(
        "decide", "decide Picard membership of a lattice class")->fallthrough();
    de->add_option("f", d_f, "quartic polynomial file")->required();
    de->add_option("lattice", d_lat, "lattice file")->required();
    de->add_option("periods", d_per, "period matrix file")->required();
    de->add_option("--class", d_class,
                   "22 comma-separated integers, or 'h' for the hyperplane "
                   "class")
        ->required();
    de->add_option("--constants", d_cache,
                   "constants cache file (default: assemble in-process)");
    de->add_option("--field-degree", d_degree,
                   "degree D of the coefficient number field")
        ->check(CLI::PositiveNumber);
    de->add_option("--height", d_height,
                   "rational upper bound on the log Weil height of f");

    // nl-bound
    long nl_delta = 0, nl_delta_to = -1;
    auto* nl = app.add_subcommand(
        "nl-bound", "degree/height bounds for a Noether-Lefschetz locus")->fallthrough();
    nl->add_option("--delta", nl_delta, "discriminant (start of range)")
        ->required()
        ->check(CLI::PositiveNumber);
    nl->add_option("--to", nl_delta_to, "end of the discriminant range");

    // mp-degree
    long mp_delta = 0;
    auto* mp = app.add_subcommand(
        "mp-degree", "exact modular-form degree bound at one discriminant")->fallthrough();
    mp->add_option("--delta", mp_delta, "discriminant")
        ->required()
        ->check(CLI::PositiveNumber);

    // liouville
    std::string li_path;
    auto* li = app.add_subcommand(
        "liouville", "growth check of a Liouville denominator chain")->fallthrough();
    li->add_option("chain", li_path, "chain file")->required();

    // gen-fixture
    std::string gf_dir, gf_scale;
    auto* gf = app.add_subcommand(
        "gen-fixture", "write a synthetic period bundle for testing")->fallthrough();
    gf->add_option("-o,--out-dir", gf_dir, "output directory")->required();
    gf->add_option("--scale", gf_scale, "rational scale of the planted form");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }
    cfg.precision = static_cast<mpfr_prec_t>(precision_flag);
    cfg.format = fmt == "csv" ? Format::Csv
                              : (fmt == "json" ? Format::JsonLike : Format::Text);

    try {
        if (*sm) return cmd_smoothness(cfg, f_path);
        if (*co)
            return cmd_constants(cfg, c_f, c_lat, c_per, c_out, c_degree,
                                 c_height);
        if (*de)
            return cmd_decide(cfg, d_f, d_lat, d_per, d_class, d_cache,
                              d_degree, d_height);
        if (*nl) return cmd_nl_bound(cfg, nl_delta, nl_delta_to);
        if (*mp) return cmd_mp_degree(cfg, mp_delta);
        if (*li) return cmd_liouville(cfg, li_path);
        if (*gf) return cmd_gen_fixture(cfg, gf_dir, gf_scale);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
