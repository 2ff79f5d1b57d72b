#pragma once
// End-to-end decision pipeline: validated period data for a quartic surface,
// certified separation constants, and the Picard-membership decision
// procedure, plus the Liouville-chain checks used to exhibit transcendental
// counterexample candidates.
//
// Soundness convention: every Real stored in a constants record is tagged by
// direction — lower bounds are rounded down, upper bounds rounded up — and
// quantized to a 64-bit significand grid so that serialized constants are
// reproducible bit-for-bit across runs at the same working precision.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quartica/ball.hpp"
#include "quartica/errors.hpp"
#include "quartica/lattice.hpp"
#include "quartica/qpoly.hpp"
#include "quartica/rational.hpp"
#include "quartica/real.hpp"
#include "quartica/reduction.hpp"
#include "quartica/tower.hpp"

namespace quartica {

// ---------------------------------------------------------------------------
// Gram inverse and coordinate conversions
// ---------------------------------------------------------------------------

/** Exact inverse of the (unimodular) Gram matrix, as an integer matrix.
 *  Computed by rational Gauss-Jordan elimination; throws NotUnimodular if a
 *  non-integer entry survives (impossible for a validated lattice). */
inline std::vector<std::vector<Int>> gram_inverse(const LatticeData& L) {
    const size_t n = LatticeData::kRank;
    std::vector<std::vector<Rat>> work(n, std::vector<Rat>(2 * n, Rat(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) work[i][j] = Rat(L.gram()[i][j]);
        work[i][n + i] = 1;
    }
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && work[piv][col] == 0) ++piv;
        if (piv == n) throw NotUnimodular("gram_inverse: singular Gram matrix");
        std::swap(work[piv], work[col]);
        const Rat d = work[col][col];
        for (size_t j = col; j < 2 * n; ++j) work[col][j] /= d;
        for (size_t i = 0; i < n; ++i) {
            if (i == col || work[i][col] == 0) continue;
            const Rat m = work[i][col];
            for (size_t j = col; j < 2 * n; ++j)
                work[i][j] -= m * work[col][j];
        }
    }
    std::vector<std::vector<Int>> inv(n, std::vector<Int>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Rat e = work[i][n + j];
            e.canonicalize();
            if (e.get_den() != 1)
                throw NotUnimodular("gram_inverse: non-integer inverse entry");
            inv[i][j] = e.get_num();
        }
    return inv;
}

/** Exact ball vector from integer coordinates. */
inline BallVec int_vector_balls(const std::vector<Int>& v, mpfr_prec_t prec) {
    BallVec out;
    out.reserve(v.size());
    for (const Int& z : v) out.push_back(Ball::of_int(z, prec));
    return out;
}

/** Exact ball matrix from an integer matrix. */
inline BallMat int_matrix_balls(const std::vector<std::vector<Int>>& m,
                                mpfr_prec_t prec) {
    const size_t r = m.size(), c = r ? m[0].size() : 0;
    BallMat out(r, c, prec);
    for (size_t i = 0; i < r; ++i) {
        if (m[i].size() != c)
            throw ShapeMismatch("int_matrix_balls: ragged matrix");
        for (size_t j = 0; j < c; ++j) out.at(i, j) = Ball::of_int(m[i][j], prec);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Period data
// ---------------------------------------------------------------------------

/** A validated bundle (f, lattice, A) describing the holomorphic 2-form of a
 *  smooth quartic: A maps degree-8 coefficient vectors to the 22 pairings
 *  γ_i·ω, and the cached quantities below are certified enclosures derived
 *  from A applied to f².  Construct through make_period_data only. */
struct PeriodData {
    LatticeData lattice;
    QPoly f;                               // the defining quartic
    BallMat A;                             // 22 × dim R_8 period-pairing map
    std::vector<std::vector<Int>> gram_inv;
    mpfr_prec_t prec = 0;

    BallVec pairings;      // p_i = γ_i·ω, computed as A·vec(f²)
    BallVec coords;        // c with ω = Σ c_i γ_i, i.e. c = G⁻¹p
    Ball omega_sq;         // ω·ω   (encloses zero)
    Ball omega_herm;       // ω·ω̄  (real part certified positive)
    Real omega_herm_lower; // certified lower bound on Re(ω·ω̄)
    Real omega_norm_lower; // ‖c‖₂ bounds
    Real omega_norm_upper;
};

/** Applies the 22 × dim R_8 pairing map to a degree-8 form. */
inline BallVec apply_pairing_map(const BallMat& A, const QPoly& g,
                                 mpfr_prec_t prec) {
    if (g.degree() != 8)
        throw DegreeMismatch("apply_pairing_map: form must have degree 8");
    const auto basis8 = monomial_basis(8);
    if (A.rows != LatticeData::kRank || A.cols != basis8.size())
        throw ShapeMismatch(
            "apply_pairing_map: pairing map must be 22 x dim R_8");
    const std::vector<Rat> dense = g.dense_coeffs(basis8);
    BallVec x;
    x.reserve(dense.size());
    for (const Rat& q : dense) x.push_back(Ball::of_rat(q, Rat(0), prec));
    return mat_vec(A, x, prec);
}

/** Pairing vector p = A·vec(f²) of the 2-form against the lattice basis. */
inline BallVec omega_from_A(const QPoly& f, const BallMat& A,
                            mpfr_prec_t prec) {
    if (f.degree() != 4)
        throw DegreeMismatch("omega_from_A: defining form must have degree 4");
    return apply_pairing_map(A, f * f, prec);
}

inline BallVec omega_from_A(const PeriodData& P) {
    return omega_from_A(P.f, P.A, P.prec);
}

/** Validates the compatibility constraints a genuine period vector must
 *  satisfy — ω·h = 0, ω·ω = 0 (both as enclosures of zero) and ω·ω̄ > 0
 *  (certified) — and caches the derived quantities.
 *
 *  Throws OmegaConstraintViolated naming the failed constraint when an
 *  enclosure provably violates it, and PrecisionTooLow when positivity of
 *  ω·ω̄ cannot be certified at this radius. */
inline PeriodData make_period_data(LatticeData lattice, QPoly f, BallMat A,
                                   mpfr_prec_t prec) {
    if (prec < 8) throw InvalidInput("make_period_data: precision too small");
    auto ginv = gram_inverse(lattice);
    PeriodData P{std::move(lattice), std::move(f), std::move(A),
                 std::move(ginv),    prec,         {},
                 {},                 Ball::zero(prec), Ball::zero(prec),
                 Real(),             Real(),       Real()};
    P.pairings = omega_from_A(P.f, P.A, prec);

    const BallMat ginv_b = int_matrix_balls(P.gram_inv, prec);
    P.coords = mat_vec(ginv_b, P.pairings, prec);

    const BallVec h_b = int_vector_balls(P.lattice.h_coords(), prec);
    const Ball omega_h = dot_bilinear(h_b, P.pairings, prec);
    if (!ball_contains_zero(omega_h))
        throw OmegaConstraintViolated(
            "make_period_data: pairing omega·h does not enclose zero");

    P.omega_sq = dot_bilinear(P.pairings, P.coords, prec);
    if (!ball_contains_zero(P.omega_sq))
        throw OmegaConstraintViolated(
            "make_period_data: self-pairing omega·omega does not enclose zero");

    BallVec coords_conj;
    coords_conj.reserve(P.coords.size());
    for (const Ball& b : P.coords) coords_conj.push_back(ball_conj(b));
    P.omega_herm = dot_bilinear(P.pairings, coords_conj, prec);
    const Real herm_hi =
        Real::add(P.omega_herm.re, P.omega_herm.rad, prec, MPFR_RNDU);
    if (herm_hi.sgn() <= 0)
        throw OmegaConstraintViolated(
            "make_period_data: omega·conj(omega) is not positive");
    P.omega_herm_lower =
        Real::sub(P.omega_herm.re, P.omega_herm.rad, prec, MPFR_RNDD);
    if (P.omega_herm_lower.sgn() <= 0)
        throw PrecisionTooLow(
            "make_period_data: cannot certify omega·conj(omega) > 0");

    auto nb = vec_norm_bounds(P.coords);
    P.omega_norm_lower = std::move(nb.first);
    P.omega_norm_upper = std::move(nb.second);
    return P;
}

// ---------------------------------------------------------------------------
// Lemma constant: lower bound on the restricted period-derivative form
// ---------------------------------------------------------------------------

/** Certified lower bound C ≤ min(1, ½·sqrt(λ_min/dim R_4)) where λ_min is
 *  the smallest eigenvalue of the Hermitian form Q(x) = Σ_m |x·d_m|² on the
 *  orthocomplement E of {h, ω̄}, with d_m = −A·vec(m·f) over the degree-4
 *  monomials m.  Q measures the first-order movement of the periods under
 *  perturbations of f, and C > 0 witnesses local surjectivity.
 *
 *  Throws PrecisionTooLow (via the eigenvalue bound or the orthocomplement
 *  construction) when positivity is not certifiable at this precision. */
inline Real lemma_constant_C(const PeriodData& P, mpfr_prec_t prec) {
    const auto basis4 = monomial_basis(4);
    const size_t n = LatticeData::kRank, m4 = basis4.size();

    BallMat D(n, m4, prec);
    for (size_t j = 0; j < m4; ++j) {
        QPoly mono(4);
        mono.add_coeff(basis4[j], Rat(1));
        const BallVec col = apply_pairing_map(P.A, mono * P.f, prec);
        for (size_t i = 0; i < n; ++i) D.at(i, j) = ball_neg(col[i]);
    }

    // Hermitian Gram matrix M with x^H M x = Q(x):  M = conj(D)·Dᵀ.
    BallMat Dbar(n, m4, prec), Dt(m4, n, prec);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m4; ++j) {
            Dbar.at(i, j) = ball_conj(D.at(i, j));
            Dt.at(j, i) = D.at(i, j);
        }
    const BallMat M = mat_mul(Dbar, Dt, prec);

    BallVec coords_conj;
    coords_conj.reserve(P.coords.size());
    for (const Ball& b : P.coords) coords_conj.push_back(ball_conj(b));
    const std::vector<BallVec> W = orthocomplement_basis(
        {int_vector_balls(P.lattice.h_coords(), prec), coords_conj},
        P.lattice.gram(), prec);

    const size_t k = W.size();
    BallMat T(k, k, prec);
    for (size_t b = 0; b < k; ++b) {
        const BallVec Mw = mat_vec(M, W[b], prec);
        for (size_t a = 0; a < k; ++a) T.at(a, b) = dot_herm(W[a], Mw, prec);
    }

    const Real lam = hermitian_lambda_min_lower(T, prec, true);
    Real t = Real::div(lam, Real::of_long(static_cast<long>(m4)), prec,
                       MPFR_RNDD);
    t = Real::sqrt(t, prec, MPFR_RNDD);
    t = Real::mul(t, Real::pow2(-1), prec, MPFR_RNDD);
    if (Real::cmp_long(t, 1) > 0) return Real::of_long(1);
    return t;
}

// ---------------------------------------------------------------------------
// Separation constants
// ---------------------------------------------------------------------------

/** Certified constants entering the separation bound.  Lower bounds
 *  (c_lemma, eps_f) are rounded down; upper bounds (gamma_up, c_f, log2_c,
 *  c_up, height_h) are rounded up; all are quantized to 64-bit significands
 *  for reproducibility. */
struct SeparationConstants {
    Real c_lemma;        // ≤ the surjectivity constant C of the pairing form
    Real gamma_up;       // ≥ Γ, the higher-derivative bound of the period map
    Real c_f;            // ≥ 2/C, the local Lipschitz constant
    Real eps_f;          // ≤ admissible perturbation radius of f
    Real log2_c;         // ≥ log₂(c) for the separation base c
    Real c_up;           // ≥ c
    long field_degree = 1;  // degree D of the number field of the coefficients
    Real height_h;       // ≥ the logarithmic Weil height H of f
    bool test_mode = false; // c replaced by 1 + 2^-20 (diagnostics only)
    mpfr_prec_t precision = 0;
};

namespace detail {

inline Real quantize(const Real& x, mpfr_rnd_t rnd) {
    return Real::round_to(x, 64, rnd);
}

inline Real max_with_zero(const Real& x, mpfr_prec_t prec) {
    return x.sgn() > 0 ? Real::round_to(x, prec, MPFR_RNDU) : Real::of_long(0);
}

}  // namespace detail

/** Assembles the separation constants for a validated period bundle.
 *
 *  field_degree is the degree D of the number field generated by the
 *  coefficients of f, and height_up an upper bound on the logarithmic Weil
 *  height H of f (see weil_height_rational).  In test mode the astronomically
 *  large separation base c is replaced by 1 + 2^-20 so that the decision
 *  branch taking effect for realistic bounds can be exercised. */
inline SeparationConstants assemble_constants(const PeriodData& P,
                                              long field_degree,
                                              const Real& height_up,
                                              mpfr_prec_t prec,
                                              bool test_mode = false) {
    if (field_degree < 1)
        throw InvalidInput("assemble_constants: field degree must be >= 1");
    if (height_up.sgn() < 0 || !height_up.is_finite())
        throw InvalidInput("assemble_constants: height must be finite, >= 0");

    SeparationConstants sc;
    sc.field_degree = field_degree;
    sc.test_mode = test_mode;
    sc.precision = prec;
    sc.height_h = detail::quantize(height_up, MPFR_RNDU);

    sc.c_lemma = detail::quantize(lemma_constant_C(P, prec), MPFR_RNDD);
    if (sc.c_lemma.sgn() <= 0)
        throw PrecisionTooLow("assemble_constants: lemma constant not positive");

    // Γ ≤ C·max(‖A‖·C², 1) with C = max(4‖Q12‖, 1); ‖A‖ is the exact
    // ℓ¹→ℓ² operator norm, i.e. the largest column 2-norm, rounded up.
    const DivisionMap dm = DivisionMap::build(P.f);
    Real normA = Real::of_long(0);
    for (size_t j = 0; j < P.A.cols; ++j) {
        BallVec col;
        col.reserve(P.A.rows);
        for (size_t i = 0; i < P.A.rows; ++i) col.push_back(P.A.at(i, j));
        Real hi = vec_norm_bounds(col).second;
        if (Real::cmp(hi, normA) > 0) normA = std::move(hi);
    }
    sc.gamma_up = detail::quantize(gamma_upper_bound(dm.operator_norm(), normA),
                                   MPFR_RNDU);

    sc.c_f = detail::quantize(
        Real::div(Real::of_long(2), sc.c_lemma, prec, MPFR_RNDU), MPFR_RNDU);

    // eps_f = min( C²/(34·Γ),  (ω·ω̄)/(2‖ω‖) ), both rounded down.
    const Real eps1 = Real::div(
        Real::mul(sc.c_lemma, sc.c_lemma, prec, MPFR_RNDD),
        Real::mul(Real::of_long(34), sc.gamma_up, prec, MPFR_RNDU), prec,
        MPFR_RNDD);
    const Real eps2 = Real::div(
        P.omega_herm_lower,
        Real::mul(Real::of_long(2), P.omega_norm_upper, prec, MPFR_RNDU), prec,
        MPFR_RNDD);
    sc.eps_f = detail::quantize(Real::cmp(eps1, eps2) <= 0 ? eps1 : eps2,
                                MPFR_RNDD);
    if (sc.eps_f.sgn() <= 0)
        throw PrecisionTooLow(
            "assemble_constants: perturbation radius not positive");

    if (test_mode) {
        const Int den = Int(1) << 20;
        const Int num = den + 1;
        const Real c = Real::of_rat(Rat(num, den), prec, MPFR_RNDU);
        sc.log2_c = detail::quantize(Real::log2(c, prec, MPFR_RNDU), MPFR_RNDU);
        sc.c_up = detail::quantize(c, MPFR_RNDU);
        return sc;
    }

    // log₂ c = max(0, log₂(K + K')) + 5·log₂ 61 + 21^{9/2}·log₂ 3 + M with
    //   K  = 2D + D·H·log₂e + log₂(‖f‖₁ + 1),
    //   K' = max(0, log₂ C_f) + 2,
    //   M  = max(0, 2 + log₂(1/eps_f), 2 + log₂ C_f),
    // every term rounded up.
    const Real log2e =
        Real::div(Real::of_long(1), Real::ln2(prec, MPFR_RNDD), prec, MPFR_RNDU);
    Real K = Real::of_long(2 * field_degree);
    K = Real::add(K,
                  Real::mul(Real::mul(Real::of_long(field_degree), sc.height_h,
                                      prec, MPFR_RNDU),
                            log2e, prec, MPFR_RNDU),
                  prec, MPFR_RNDU);
    K = Real::add(K,
                  Real::log2(Real::of_rat(P.f.one_norm() + 1, prec, MPFR_RNDU),
                             prec, MPFR_RNDU),
                  prec, MPFR_RNDU);

    const Real log2_cf = Real::log2(sc.c_f, prec, MPFR_RNDU);
    const Real Kp = Real::add(detail::max_with_zero(log2_cf, prec),
                              Real::of_long(2), prec, MPFR_RNDU);

    const Real log2_inv_eps = Real::neg(Real::log2(sc.eps_f, prec, MPFR_RNDD));
    Real M = Real::add(Real::of_long(2), log2_inv_eps, prec, MPFR_RNDU);
    const Real M2 = Real::add(Real::of_long(2), log2_cf, prec, MPFR_RNDU);
    if (Real::cmp(M2, M) > 0) M = M2;
    if (M.sgn() < 0) M = Real::of_long(0);

    Real total = detail::max_with_zero(
        Real::log2(Real::add(K, Kp, prec, MPFR_RNDU), prec, MPFR_RNDU), prec);
    total = Real::add(
        total,
        Real::mul(Real::of_long(5),
                  Real::log2(Real::of_long(61), prec, MPFR_RNDU), prec,
                  MPFR_RNDU),
        prec, MPFR_RNDU);
    total = Real::add(
        total,
        Real::mul(Real::pow(Real::of_long(21),
                            Real::of_rat(Rat(9, 2), prec, MPFR_RNDU), prec,
                            MPFR_RNDU),
                  Real::log2(Real::of_long(3), prec, MPFR_RNDU), prec,
                  MPFR_RNDU),
        prec, MPFR_RNDU);
    total = Real::add(total, M, prec, MPFR_RNDU);

    sc.log2_c = detail::quantize(total, MPFR_RNDU);
    sc.c_up = detail::quantize(Real::exp2(sc.log2_c, prec, MPFR_RNDU),
                               MPFR_RNDU);
    return sc;
}

/** Upper bound (rounded up, 128 bits) on the logarithmic Weil height of a
 *  quartic with rational coefficients: clear denominators to coprime integer
 *  coefficients c_i and return ln(max|c_i|).  Zero for ±1 coefficient forms
 *  such as the Fermat quartic. */
inline Real weil_height_rational(const QPoly& f) {
    Int lcm = 1;
    bool any = false;
    for (const auto& [m, c] : f.terms()) {
        (void)m;
        any = true;
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    if (!any) throw InvalidInput("weil_height_rational: zero polynomial");
    Int gcd = 0, maxabs = 0;
    for (const auto& [m, c] : f.terms()) {
        (void)m;
        Rat scaled = c * lcm;
        scaled.canonicalize();
        Int z = scaled.get_num();
        mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), z.get_mpz_t());
        Int a = abs(z);
        if (a > maxabs) maxabs = a;
    }
    maxabs /= gcd;
    const mpfr_prec_t p = 128;
    if (maxabs == 1) return Real::of_long(0);
    const Real lg = Real::log2(Real::of_int(maxabs, p, MPFR_RNDU), p, MPFR_RNDU);
    return Real::mul(lg, Real::ln2(p, MPFR_RNDU), p, MPFR_RNDU);
}

// ---------------------------------------------------------------------------
// Required precision and the decision procedure
// ---------------------------------------------------------------------------

/** Upper bound on log₂(1/ε(Δ)) = Δ^{9/2}·log₂(c), as a tower-represented
 *  value (level ≥ 1; automatically promoted when the exponent overflows a
 *  double significand).  This is the number of certified bits of |γ·ω|
 *  required before a zero pairing may be concluded. */
inline TowerReal required_bits(const Int& delta,
                               const SeparationConstants& sc) {
    if (delta <= 0)
        throw InvalidInput("required_bits: discriminant must be positive");
    const mpfr_prec_t p = sc.precision ? sc.precision : 128;
    const Real d = Real::of_int(delta, p, MPFR_RNDU);
    const Real d92 = Real::pow(d, Real::of_rat(Rat(9, 2), p, MPFR_RNDU), p,
                               MPFR_RNDU);
    return TowerReal::from_log2(Real::mul(d92, sc.log2_c, p, MPFR_RNDU),
                                RoundDir::Up);
}

/** Smale-style certification: given upper bounds β ≥ |approx step| and
 *  γ ≥ the higher-derivative ratio at a point, certifies an exact root
 *  within radius 2β when β·γ ≤ 1/34 (exact rational comparison on the dyadic
 *  bounds).  Returns the radius on success, std::nullopt otherwise. */
inline std::optional<Real> smale_alpha_test(const Real& beta_up,
                                            const Real& gamma_up) {
    if (beta_up.sgn() < 0 || gamma_up.sgn() < 0)
        throw InvalidInput("smale_alpha_test: bounds must be nonnegative");
    if (!beta_up.is_finite() || !gamma_up.is_finite())
        throw InvalidInput("smale_alpha_test: bounds must be finite");
    const Rat prod = real_to_rat(beta_up) * real_to_rat(gamma_up) * 34;
    if (prod > 1) return std::nullopt;
    return Real::mul(beta_up, Real::of_long(2), beta_up.prec(), MPFR_RNDU);
}

enum class Verdict { InPicard, NotInPicard, Inconclusive, InternalInconsistency };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::InPicard: return "InPicard";
        case Verdict::NotInPicard: return "NotInPicard";
        case Verdict::Inconclusive: return "Inconclusive";
        default: return "InternalInconsistency";
    }
}

struct Decision {
    Verdict verdict = Verdict::Inconclusive;
    std::string detail;
    Int delta = 0;
    std::optional<TowerReal> required;   // bits demanded by the separation bound
    std::optional<Real> pairing_abs_lower, pairing_abs_upper;
};

/** Decides whether the integral class γ lies in the Picard group of the
 *  surface described by P, using the separation constants sc.
 *
 *  Branches, in order:
 *   - γ a rational multiple of h  → InPicard (hyperplane class);
 *   - Δ(γ) = (γ·h)² − 4γ·γ ≤ 0    → NotInPicard (the orthogonal complement
 *     of h in the Picard lattice is negative definite, so no primitive class
 *     with nonpositive Δ can be algebraic unless proportional to h);
 *   - |γ·ω| bounded away from 0   → NotInPicard;
 *   - |γ·ω| certified below ε(Δ)  → InPicard (separation bound);
 *   - otherwise                   → Inconclusive, carrying the bit demand. */
inline Decision decide(const LatticeClass& g, const PeriodData& P,
                       const SeparationConstants& sc) {
    if (g.coords.size() != LatticeData::kRank)
        throw ShapeMismatch("decide: class has wrong rank");

    Decision out;
    const Int gh = pair(g, P.lattice.h(), P.lattice);
    const Int gg = pair(g, g, P.lattice);
    out.delta = gh * gh - 4 * gg;

    bool parallel = true;
    for (size_t i = 0; i < g.coords.size(); ++i)
        if (4 * g.coords[i] != gh * P.lattice.h_coords()[i]) {
            parallel = false;
            break;
        }
    if (parallel) {
        out.verdict = Verdict::InPicard;
        out.detail = "hyperplane class (rational multiple of h)";
        return out;
    }
    if (out.delta <= 0) {
        out.verdict = Verdict::NotInPicard;
        out.detail =
            "nonpositive discriminant: h-complement in the Picard lattice is "
            "negative definite";
        return out;
    }

    const mpfr_prec_t prec = std::max(P.prec, sc.precision);
    const Ball b =
        dot_bilinear(int_vector_balls(g.coords, prec), P.pairings, prec);
    auto [lo, hi] = ball_abs_bounds(b);
    const bool not_in = lo.sgn() > 0;

    const TowerReal req = required_bits(out.delta, sc);
    bool in_pic = false;
    if (hi.sgn() <= 0) {
        in_pic = true;  // pairing is exactly zero
    } else if (Real::cmp_long(hi, 1) < 0) {
        // rhs = certified lower bound on −log₂|γ·ω|.
        const Real rhs = Real::neg(Real::log2(hi, prec, MPFR_RNDU));
        const bool liftable =
            rhs.sgn() > 0 && (req.level() < 2 || Real::cmp_long(rhs, 1) > 0);
        if (liftable &&
            tower_cmp(TowerReal::of_real(rhs, RoundDir::Down), req) > 0)
            in_pic = true;
    }

    out.pairing_abs_lower = lo;
    out.pairing_abs_upper = hi;
    out.required = req;
    if (not_in && in_pic) {
        out.verdict = Verdict::InternalInconsistency;
        out.detail = "pairing certified both nonzero and below the separation "
                     "bound";
    } else if (not_in) {
        out.verdict = Verdict::NotInPicard;
        out.detail = "pairing with omega bounded away from zero";
    } else if (in_pic) {
        out.verdict = Verdict::InPicard;
        out.detail = "pairing certified below the separation bound";
    } else {
        out.verdict = Verdict::Inconclusive;
        out.detail = "pairing enclosure straddles zero above the separation "
                     "threshold";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Liouville chains
// ---------------------------------------------------------------------------

/** One denominator θ_i of a Liouville chain: either an exact integer or a
 *  tower descriptor for values too large to materialize.  Descriptors should
 *  be Up-tagged so the growth check errs on the conservative side. */
struct ThetaEntry {
    std::optional<Int> exact;
    std::optional<TowerReal> tower;

    static ThetaEntry of_int(Int n) {
        if (n < 1) throw InvalidInput("ThetaEntry: denominators must be >= 1");
        ThetaEntry e;
        e.exact = std::move(n);
        return e;
    }
    static ThetaEntry of_tower(TowerReal t) {
        ThetaEntry e;
        e.tower = std::move(t);
        return e;
    }
};

struct GrowthReport {
    bool pass = true;
    long first_violation = -1;  // index i of the failing pair (θ_i, θ_{i+1})
    std::string reason;         // "growth", "divisor", or "strictness"
};

namespace detail {

/** Tower value of log₂log₂(θ), rounded down; a nonpositive level-0 sentinel
 *  when θ ≤ 2 so the growth comparison fails against any positive demand. */
inline TowerReal log2log2_tower(const ThetaEntry& e) {
    const mpfr_prec_t p = 192;
    if (e.exact) {
        if (*e.exact <= 2) return TowerReal::of_real(Real::of_long(0), RoundDir::Down);
        const Real l2 =
            Real::log2(Real::of_int(*e.exact, p, MPFR_RNDD), p, MPFR_RNDD);
        return TowerReal::of_real(Real::log2(l2, p, MPFR_RNDD), RoundDir::Down);
    }
    const TowerReal& t = *e.tower;
    if (t.level() == 2) return TowerReal::of_real(t.stored(), RoundDir::Down);
    if (t.level() == 1) {
        if (t.stored().sgn() <= 0)
            return TowerReal::of_real(Real::of_long(0), RoundDir::Down);
        return TowerReal::of_real(Real::log2(t.stored(), p, MPFR_RNDD),
                                  RoundDir::Down);
    }
    if (Real::cmp_long(t.stored(), 2) <= 0)
        return TowerReal::of_real(Real::of_long(0), RoundDir::Down);
    const Real l2 = Real::log2(t.stored(), p, MPFR_RNDD);
    return TowerReal::of_real(Real::log2(l2, p, MPFR_RNDD), RoundDir::Down);
}

/** Tower value of θ^10 (conservative: rounded up for exact integers). */
inline TowerReal pow10_tower(const ThetaEntry& e) {
    if (e.exact) {
        Int z;
        mpz_pow_ui(z.get_mpz_t(), e.exact->get_mpz_t(), 10);
        return TowerReal::of_int(z, RoundDir::Up);
    }
    return tower_pow(*e.tower, Rat(10));
}

}  // namespace detail

/** Checks a Liouville denominator chain.  Each consecutive pair must satisfy
 *  the strict divisor condition θ_i | θ_{i+1}, θ_{i+1} > θ_i (verifiable only
 *  for exact entries) and, when check_growth is set, the growth condition
 *  θ_{i+1} ≥ 2^2^(θ_i^10), compared as log₂log₂(θ_{i+1}) ≥ θ_i^10 so that
 *  tower descriptors never need to be materialized. */
inline GrowthReport liouville_growth_check(const std::vector<ThetaEntry>& th,
                                           bool check_growth = true) {
    if (th.empty())
        throw InvalidInput("liouville_growth_check: empty chain");
    for (const ThetaEntry& e : th) {
        if (e.exact.has_value() == e.tower.has_value())
            throw InvalidInput(
                "liouville_growth_check: entry must be exactly one of "
                "integer or tower descriptor");
        if (e.exact && *e.exact < 1)
            throw InvalidInput(
                "liouville_growth_check: denominators must be >= 1");
    }
    GrowthReport r;
    for (size_t i = 0; i + 1 < th.size(); ++i) {
        if (th[i].exact && th[i + 1].exact) {
            if (!mpz_divisible_p(th[i + 1].exact->get_mpz_t(),
                                 th[i].exact->get_mpz_t()))
                return {false, static_cast<long>(i), "divisor"};
            if (*th[i + 1].exact <= *th[i].exact)
                return {false, static_cast<long>(i), "strictness"};
        }
        if (!check_growth) continue;
        const TowerReal lhs = detail::log2log2_tower(th[i + 1]);
        const TowerReal rhs = detail::pow10_tower(th[i]);
        if (tower_cmp(lhs, rhs) < 0)
            return {false, static_cast<long>(i), "growth"};
    }
    return r;
}

/** Exact partial sum Σ_i 1/θ_i of an exact chain, reported as u/θ_k with
 *  u = Σ_i θ_k/θ_i (each term an exact division by chain divisibility).
 *  Throws ChainViolation when divisibility, strictness, or the classical
 *  bound u ≤ 2θ_k fails. */
struct LiouvillePartial {
    Rat value;   // canonical u/θ_k
    Int u;       // numerator over the common denominator θ_k
    Int theta_k; // last denominator
};

inline LiouvillePartial liouville_partial_sum(const std::vector<Int>& th) {
    if (th.empty())
        throw InvalidInput("liouville_partial_sum: empty chain");
    for (const Int& t : th)
        if (t < 1)
            throw InvalidInput(
                "liouville_partial_sum: denominators must be >= 1");
    for (size_t i = 0; i + 1 < th.size(); ++i) {
        if (!mpz_divisible_p(th[i + 1].get_mpz_t(), th[i].get_mpz_t()))
            throw ChainViolation(
                "liouville_partial_sum: entry " + std::to_string(i) +
                " does not divide its successor");
        if (th[i + 1] <= th[i])
            throw ChainViolation(
                "liouville_partial_sum: chain not strictly increasing at "
                "entry " + std::to_string(i));
    }
    LiouvillePartial out;
    out.theta_k = th.back();
    out.u = 0;
    for (const Int& t : th) {
        Int q;
        mpz_divexact(q.get_mpz_t(), out.theta_k.get_mpz_t(), t.get_mpz_t());
        out.u += q;
    }
    if (out.u > 2 * out.theta_k)
        throw ChainViolation(
            "liouville_partial_sum: partial sum exceeds twice the last "
            "denominator");
    out.value = Rat(out.u, out.theta_k);
    out.value.canonicalize();
    return out;
}

}  // namespace quartica
