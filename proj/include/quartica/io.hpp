#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "quartica/errors.hpp"
#include "quartica/lattice.hpp"
#include "quartica/pipeline.hpp"
#include "quartica/qpoly.hpp"
#include "quartica/rational.hpp"
#include "quartica/real.hpp"
#include "quartica/reduction.hpp"
#include "quartica/tower.hpp"

/**
 * JSON file formats for every persistent artifact: polynomials, lattices,
 * complex balls, period matrices, division-table caches, separation-constant
 * caches, Liouville chain files.  Numeric payloads are exact: rationals as
 * "p/q" strings, dyadic reals as exact finite decimals, so save/load
 * round-trips reproduce values (and files) bit for bit.
 */

namespace quartica {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

inline const Json& json_field(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(std::string("missing field \"") + key + "\"");
    return *it;
}

inline std::string json_string(const Json& j, const char* key) {
    const Json& v = json_field(j, key);
    if (!v.is_string())
        throw ParseError(std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
}

inline long json_long(const Json& j, const char* key) {
    const Json& v = json_field(j, key);
    if (!v.is_number_integer())
        throw ParseError(std::string("field \"") + key +
                         "\" must be an integer");
    return v.get<long>();
}

inline Int parse_int(const std::string& s) {
    if (s.empty()) throw ParseError("empty integer");
    Int z;
    if (mpz_set_str(z.get_mpz_t(), s.c_str(), 10) != 0)
        throw ParseError("bad integer: " + s);
    return z;
}

/** Exact reconstruction of a dyadic decimal as a Real; ParseError otherwise. */
inline Real real_from_dyadic_decimal(const std::string& s) {
    const Rat q = parse_decimal(s);
    if (q == 0) return Real(64);
    const mpfr_prec_t bits = static_cast<mpfr_prec_t>(
        mpz_sizeinbase(mpq_numref(q.get_mpq_t()), 2));
    const Real v = Real::of_rat(q, std::max<mpfr_prec_t>(bits, 64), MPFR_RNDN);
    if (!(real_to_rat(v) == q))
        throw ParseError("decimal is not dyadic: " + s);
    return v;
}

// ---------------------------------------------------------------------------
// Polynomials: [{"e": [e_w,e_x,e_y,e_z], "c": "p/q"}, ...]
// ---------------------------------------------------------------------------

inline Json poly_to_json(const QPoly& p) {
    Json out = Json::array();
    for (const auto& [m, c] : p.terms()) {
        Json rec;
        rec["e"] = Json::array({m[0], m[1], m[2], m[3]});
        rec["c"] = rat_to_string(c);
        out.push_back(std::move(rec));
    }
    return out;
}

/**
 * Inverse of poly_to_json.  The degree is inferred from the records and
 * homogeneity validated; an empty list is only accepted when the degree is
 * supplied (the zero polynomial of a known slice).
 */
inline QPoly poly_from_json(const Json& j, int degree = -1) {
    if (!j.is_array()) throw ParseError("polynomial must be a JSON array");
    if (j.empty()) {
        if (degree < 0)
            throw ParseError("cannot infer the degree of an empty polynomial");
        return QPoly(degree);
    }
    int deg = degree;
    QPoly out(0);
    bool first = true;
    size_t index = 0;
    for (const Json& rec : j) {
        const Json& ej = json_field(rec, "e");
        if (!ej.is_array() || ej.size() != 4)
            throw ParseError("record " + std::to_string(index) +
                             ": \"e\" must have 4 exponents");
        Mono m;
        for (int i = 0; i < 4; ++i) {
            if (!ej[i].is_number_integer() || ej[i].get<long>() < 0)
                throw ParseError("record " + std::to_string(index) +
                                 ": exponents must be nonnegative integers");
            m[i] = static_cast<int>(ej[i].get<long>());
        }
        const int d = mono_degree(m);
        if (first) {
            if (deg < 0) deg = d;
            out = QPoly(deg);
            first = false;
        }
        if (d != deg)
            throw ParseError("record " + std::to_string(index) +
                             ": degree " + std::to_string(d) +
                             " breaks homogeneity (expected " +
                             std::to_string(deg) + ")");
        if (out.terms().count(m))
            throw ParseError("record " + std::to_string(index) +
                             ": duplicate monomial");
        const Rat c = parse_rat(json_string(rec, "c"));
        if (c == 0)
            throw ParseError("record " + std::to_string(index) +
                             ": zero coefficient");
        out.add_coeff(m, c);
        ++index;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lattice: {"gram": 22×22 integers, "h": 22 integers}
// ---------------------------------------------------------------------------

inline Json lattice_to_json(const LatticeData& L) {
    Json g = Json::array();
    for (const auto& row : L.gram()) {
        Json r = Json::array();
        for (const Int& v : row) r.push_back(v.get_si());
        g.push_back(std::move(r));
    }
    Json h = Json::array();
    for (const Int& v : L.h_coords()) h.push_back(v.get_si());
    return Json{{"gram", std::move(g)}, {"h", std::move(h)}};
}

inline LatticeData lattice_from_json(const Json& j) {
    const Json& gj = json_field(j, "gram");
    const Json& hj = json_field(j, "h");
    if (!gj.is_array() || !hj.is_array())
        throw ParseError("\"gram\" and \"h\" must be arrays");
    std::vector<std::vector<Int>> gram;
    gram.reserve(gj.size());
    for (const Json& rowj : gj) {
        if (!rowj.is_array()) throw ParseError("gram rows must be arrays");
        std::vector<Int> row;
        row.reserve(rowj.size());
        for (const Json& v : rowj) {
            if (!v.is_number_integer())
                throw ParseError("gram entries must be integers");
            row.emplace_back(v.get<long>());
        }
        gram.push_back(std::move(row));
    }
    std::vector<Int> h;
    h.reserve(hj.size());
    for (const Json& v : hj) {
        if (!v.is_number_integer())
            throw ParseError("h entries must be integers");
        h.emplace_back(v.get<long>());
    }
    return LatticeData::create(std::move(gram), std::move(h));
}

inline Json lattice_class_to_json(const LatticeClass& g) {
    Json out = Json::array();
    for (const Int& v : g.coords) out.push_back(v.get_si());
    return out;
}

inline LatticeClass lattice_class_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("lattice class must be an array");
    LatticeClass g;
    g.coords.reserve(j.size());
    for (const Json& v : j) {
        if (!v.is_number_integer())
            throw ParseError("class coordinates must be integers");
        g.coords.emplace_back(v.get<long>());
    }
    return g;
}

// ---------------------------------------------------------------------------
// Balls: {"mid_re": dec, "mid_im": dec, "rad": dec}, exact dyadic decimals
// ---------------------------------------------------------------------------

inline Json ball_to_json(const Ball& b) {
    return Json{{"mid_re", to_exact_decimal(b.re)},
                {"mid_im", to_exact_decimal(b.im)},
                {"rad", to_exact_decimal(b.rad)}};
}

/**
 * Reconstruct at the requested precision.  Dyadic decimals are recovered
 * exactly; any midpoint rounding on conversion is added to the radius, so
 * the result always encloses the stored ball.
 */
inline Ball ball_from_json(const Json& j, mpfr_prec_t prec) {
    const Rat re = parse_decimal(json_string(j, "mid_re"));
    const Rat im = parse_decimal(json_string(j, "mid_im"));
    const Rat rq = parse_decimal(json_string(j, "rad"));
    if (rq < 0) throw ParseError("negative ball radius");
    Ball b = Ball::of_rat(re, im, prec);
    b.rad = rad_add(b.rad, Real::of_rat(rq, kRadPrec, MPFR_RNDU));
    return b;
}

// ---------------------------------------------------------------------------
// Period matrix: 22×165 balls + header (monomial order, basis labels)
// ---------------------------------------------------------------------------

inline Json period_matrix_to_json(const BallMat& A,
                                  std::vector<std::string> basis_labels = {}) {
    const auto basis8 = monomial_basis(8);
    if (A.rows != LatticeData::kRank || A.cols != basis8.size())
        throw ShapeMismatch("period matrix must be 22×165");
    if (basis_labels.empty())
        for (size_t i = 0; i < A.rows; ++i)
            basis_labels.push_back("gamma" + std::to_string(i));
    if (basis_labels.size() != A.rows)
        throw ShapeMismatch("need one basis label per lattice row");
    Json mons = Json::array();
    for (const Mono& m : basis8)
        mons.push_back(Json::array({m[0], m[1], m[2], m[3]}));
    Json rows = Json::array();
    for (size_t i = 0; i < A.rows; ++i) {
        Json row = Json::array();
        for (size_t jx = 0; jx < A.cols; ++jx)
            row.push_back(ball_to_json(A.at(i, jx)));
        rows.push_back(std::move(row));
    }
    return Json{{"rows", A.rows},
                {"cols", A.cols},
                {"monomials", std::move(mons)},
                {"basis_labels", std::move(basis_labels)},
                {"entries", std::move(rows)}};
}

inline BallMat period_matrix_from_json(const Json& j, mpfr_prec_t prec) {
    const auto basis8 = monomial_basis(8);
    if (json_long(j, "rows") != static_cast<long>(LatticeData::kRank) ||
        json_long(j, "cols") != static_cast<long>(basis8.size()))
        throw ShapeMismatch("period matrix must be 22×165");
    const Json& mons = json_field(j, "monomials");
    if (!mons.is_array() || mons.size() != basis8.size())
        throw ParseError("monomial header must list all 165 monomials");
    for (size_t k = 0; k < basis8.size(); ++k) {
        const Json& m = mons[k];
        if (!m.is_array() || m.size() != 4)
            throw ParseError("monomial header entries must have 4 exponents");
        for (int i = 0; i < 4; ++i)
            if (!m[i].is_number_integer() ||
                m[i].get<long>() != basis8[k][i])
                throw ParseError(
                    "monomial order mismatch at index " + std::to_string(k));
    }
    const Json& rows = json_field(j, "entries");
    if (!rows.is_array() || rows.size() != LatticeData::kRank)
        throw ShapeMismatch("period matrix must have 22 entry rows");
    BallMat A(LatticeData::kRank, basis8.size(), prec);
    for (size_t i = 0; i < A.rows; ++i) {
        const Json& row = rows[i];
        if (!row.is_array() || row.size() != A.cols)
            throw ShapeMismatch("period matrix rows must have 165 entries");
        for (size_t jx = 0; jx < A.cols; ++jx)
            A.at(i, jx) = ball_from_json(row[jx], prec);
    }
    return A;
}

// ---------------------------------------------------------------------------
// Division-table cache: columns in monomial_basis(12) order, header = f, norm
// ---------------------------------------------------------------------------

inline Json division_map_to_json(const DivisionMap& Q) {
    Json cols = Json::array();
    for (size_t m = 0; m < Q.basis12().size(); ++m) {
        Json quad = Json::array();
        for (int i = 0; i < 4; ++i)
            quad.push_back(poly_to_json(Q.column(m)[i]));
        cols.push_back(std::move(quad));
    }
    return Json{{"base", poly_to_json(Q.base())},
                {"norm", rat_to_string(Q.operator_norm())},
                {"columns", std::move(cols)}};
}

inline DivisionMap division_map_from_json(const Json& j) {
    const QPoly f = poly_from_json(json_field(j, "base"));
    const Json& cols = json_field(j, "columns");
    if (!cols.is_array()) throw ParseError("\"columns\" must be an array");
    std::vector<std::array<QPoly, 4>> columns;
    columns.reserve(cols.size());
    for (const Json& quad : cols) {
        if (!quad.is_array() || quad.size() != 4)
            throw ParseError("each division column must hold 4 polynomials");
        columns.push_back({poly_from_json(quad[0], 9), poly_from_json(quad[1], 9),
                           poly_from_json(quad[2], 9),
                           poly_from_json(quad[3], 9)});
    }
    DivisionMap Q = DivisionMap::from_columns(f, std::move(columns));
    if (!(Q.operator_norm() == parse_rat(json_string(j, "norm"))))
        throw LedgerInconsistency(
            "division cache: stored norm disagrees with the columns");
    return Q;
}

// ---------------------------------------------------------------------------
// Separation-constants cache with provenance
// ---------------------------------------------------------------------------

inline Json constants_to_json(const SeparationConstants& sc) {
    Json rounding{{"c_lemma", "down"}, {"gamma_up", "up"}, {"c_f", "up"},
                  {"eps_f", "down"},   {"log2_c", "up"},   {"height_h", "up"}};
    return Json{
        {"provenance",
         Json{{"precision", static_cast<long>(sc.precision)},
              {"test_mode", sc.test_mode},
              {"rounding", std::move(rounding)}}},
        {"field_degree", sc.field_degree},
        {"height_h", to_exact_decimal(sc.height_h)},
        {"c_lemma", to_exact_decimal(sc.c_lemma)},
        {"gamma_up", to_exact_decimal(sc.gamma_up)},
        {"c_f", to_exact_decimal(sc.c_f)},
        {"eps_f", to_exact_decimal(sc.eps_f)},
        {"log2_c", to_exact_decimal(sc.log2_c)}};
}

/** The derived field c_up is recomputed (2^log2_c rounded up) on load. */
inline SeparationConstants constants_from_json(const Json& j) {
    const Json& prov = json_field(j, "provenance");
    SeparationConstants sc;
    sc.precision = static_cast<mpfr_prec_t>(json_long(prov, "precision"));
    const Json& tm = json_field(prov, "test_mode");
    if (!tm.is_boolean())
        throw ParseError("provenance.test_mode must be a boolean");
    sc.test_mode = tm.get<bool>();
    sc.field_degree = json_long(j, "field_degree");
    if (sc.field_degree < 1)
        throw ParseError("field_degree must be a positive integer");
    sc.height_h = real_from_dyadic_decimal(json_string(j, "height_h"));
    sc.c_lemma = real_from_dyadic_decimal(json_string(j, "c_lemma"));
    sc.gamma_up = real_from_dyadic_decimal(json_string(j, "gamma_up"));
    sc.c_f = real_from_dyadic_decimal(json_string(j, "c_f"));
    sc.eps_f = real_from_dyadic_decimal(json_string(j, "eps_f"));
    sc.log2_c = real_from_dyadic_decimal(json_string(j, "log2_c"));
    if (sc.c_lemma.sgn() <= 0 || sc.eps_f.sgn() <= 0 || sc.c_f.sgn() <= 0 ||
        sc.log2_c.sgn() < 0 || sc.height_h.sgn() < 0)
        throw ParseError("constants cache: a field has an impossible sign");
    if (sc.precision < 8)
        throw ParseError("provenance.precision must be at least 8");
    // c itself is astronomically large; only log₂ c is stored, and the
    // convenience upper bound is recomputed the same way assembly does.
    sc.c_up = detail::quantize(Real::exp2(sc.log2_c, sc.precision, MPFR_RNDU),
                               MPFR_RNDU);
    return sc;
}

// ---------------------------------------------------------------------------
// Liouville chains: entries are exact integer strings or tower descriptors
//   "12345"                                — exact value
//   {"level": 2, "log2log2": "45", "dir": "up"} — descriptor 2^2^45
// ---------------------------------------------------------------------------

inline Json theta_chain_to_json(const std::vector<ThetaEntry>& th) {
    Json out = Json::array();
    for (const ThetaEntry& e : th) {
        if (e.exact) {
            out.push_back(e.exact->get_str());
            continue;
        }
        if (!e.tower) throw InvalidInput("theta entry holds no value");
        const TowerReal& t = *e.tower;
        const char* key = t.level() == 2 ? "log2log2" : "log2";
        if (t.level() == 0)
            throw InvalidInput(
                "level-0 tower entries should be stored as exact integers");
        out.push_back(Json{{"level", t.level()},
                           {key, to_exact_decimal(t.stored())},
                           {"dir", t.dir() == RoundDir::Up ? "up" : "down"}});
    }
    return out;
}

inline std::vector<ThetaEntry> theta_chain_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("theta chain must be an array");
    std::vector<ThetaEntry> out;
    out.reserve(j.size());
    for (const Json& e : j) {
        if (e.is_string()) {
            out.push_back(ThetaEntry::of_int(parse_int(e.get<std::string>())));
            continue;
        }
        if (e.is_number_integer()) {
            const long v = e.get<long>();
            out.push_back(ThetaEntry::of_int(Int(v)));
            continue;
        }
        if (!e.is_object())
            throw ParseError("theta entries must be integers or descriptors");
        const long level = json_long(e, "level");
        const std::string dir_s = json_string(e, "dir");
        if (dir_s != "up" && dir_s != "down")
            throw ParseError("descriptor dir must be \"up\" or \"down\"");
        const RoundDir dir = dir_s == "up" ? RoundDir::Up : RoundDir::Down;
        if (level == 1) {
            out.push_back(ThetaEntry::of_tower(TowerReal::from_log2(
                real_from_dyadic_decimal(json_string(e, "log2")), dir)));
        } else if (level == 2) {
            out.push_back(ThetaEntry::of_tower(TowerReal::from_log2log2(
                real_from_dyadic_decimal(json_string(e, "log2log2")), dir)));
        } else {
            throw ParseError("descriptor level must be 1 or 2");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Convert the byte offset into a line/column and quote the line.
        size_t pos = e.byte > 0 ? std::min(e.byte - 1, text.size()) : 0;
        size_t line = 1, bol = 0;
        for (size_t i = 0; i < pos; ++i)
            if (text[i] == '\n') {
                ++line;
                bol = i + 1;
            }
        size_t eol = text.find('\n', bol);
        if (eol == std::string::npos) eol = text.size();
        std::string snippet = text.substr(bol, std::min<size_t>(eol - bol, 80));
        throw ParseError(path + ":" + std::to_string(line) + ":" +
                         std::to_string(pos - bol + 1) + ": " + e.what() +
                         "\n  | " + snippet);
    }
}

inline void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << j.dump(1) << '\n';
    if (!out) throw ParseError("write failed: " + path);
}

namespace detail {

/** Attach the file path to messages that do not already carry it. */
[[noreturn]] inline void rethrow_with_path(const std::string& path,
                                           const ParseError& e) {
    if (std::string(e.what()).find(path) != std::string::npos) throw e;
    throw ParseError(path + ": " + e.what());
}

}  // namespace detail

inline QPoly load_poly_file(const std::string& path) {
    try {
        return poly_from_json(load_json_file(path));
    } catch (const ParseError& e) {
        detail::rethrow_with_path(path, e);
    }
}

inline LatticeData load_lattice_file(const std::string& path) {
    try {
        return lattice_from_json(load_json_file(path));
    } catch (const ParseError& e) {
        detail::rethrow_with_path(path, e);
    }
}

inline BallMat load_period_matrix_file(const std::string& path,
                                       mpfr_prec_t prec) {
    try {
        return period_matrix_from_json(load_json_file(path), prec);
    } catch (const ParseError& e) {
        detail::rethrow_with_path(path, e);
    }
}

/** Ingest and fully validate period data from its three input files. */
inline PeriodData load_period_data(const std::string& f_path,
                                   const std::string& lattice_path,
                                   const std::string& periods_path,
                                   mpfr_prec_t prec) {
    QPoly f = load_poly_file(f_path);
    LatticeData lattice = load_lattice_file(lattice_path);
    BallMat A = load_period_matrix_file(periods_path, prec);
    return make_period_data(std::move(lattice), std::move(f), std::move(A),
                            prec);
}

} // namespace quartica
