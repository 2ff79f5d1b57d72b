#pragma once

#include <optional>

#include "quartica/errors.hpp"
#include "quartica/rational.hpp"
#include "quartica/tower.hpp"

namespace quartica {

/** Index (d, g) of a Noether–Lefschetz locus: γ·h = d, γ·γ = 2g−2. */
struct DGIndex {
    Int d, g;

    static DGIndex make(Int d, Int g) {
        if (d < 1 || g < 0)
            throw InvalidIndex("DGIndex: need d ≥ 1 and g ≥ 0, got (" +
                               d.get_str() + "," + g.get_str() + ")");
        return DGIndex{std::move(d), std::move(g)};
    }

    Int delta() const { return d * d - 8 * g + 8; }
};

/**
 * The unique reduced locus of discriminant Δ > 0: the (d,g) case split on
 * Δ mod 8 with t = ⌈¼√Δ⌉, or nothing when no even class of that
 * discriminant exists (Δ ≢ 0, 1, 4 mod 8).
 */
inline std::optional<DGIndex> delta_to_dg(const Int& delta) {
    if (delta <= 0) throw InvalidInput("delta_to_dg: Δ must be positive");
    const unsigned long m = mpz_fdiv_ui(delta.get_mpz_t(), 8);
    if (m != 0 && m != 1 && m != 4) return std::nullopt;

    Int s;
    mpz_sqrt(s.get_mpz_t(), delta.get_mpz_t());  // ⌊√Δ⌋
    Int t = (s + 3) / 4;                         // ≈ ⌈√Δ/4⌉, then adjust
    while (t > 1 && 16 * (t - 1) * (t - 1) >= delta) --t;
    while (16 * t * t < delta) ++t;

    Int d, g;
    if (m == 0) {
        d = 4 * t;
        g = 2 * t * t + (8 - delta) / 8;
    } else if (m == 1) {
        d = 4 * t + 1;
        g = 2 * t * t + t + (9 - delta) / 8;
    } else {
        d = 4 * t + 2;
        g = 2 * t * t + 2 * t + (12 - delta) / 8;
    }
    return DGIndex::make(std::move(d), std::move(g));
}

/**
 * Canonical representative under the index symmetries
 * NL_{d,g} = NL_{d+4, g+d+2} = NL_{−d,g}: take |d|, then descend
 * (d,g) → (d−4, g−d+2) while that keeps d ≥ 1 and g ≥ 0.  The
 * discriminant d² − 8g + 8 is unchanged by every step.
 */
inline DGIndex normalize_dg(Int d, Int g) {
    if (d == 0) throw InvalidIndex("normalize_dg: d must be nonzero");
    if (d < 0) d = -d;
    while (d - 4 >= 1 && g - d + 2 >= 0) {
        g = g - d + 2;
        d = d - 4;
    }
    return DGIndex::make(std::move(d), std::move(g));
}

/** Gotzmann regularity bound max(C(d,2) + 1 − g, 4). */
inline Int gotzmann_r(const DGIndex& dg) {
    Int r = dg.d * (dg.d - 1) / 2 + 1 - dg.g;
    if (r < 4) r = 4;
    return r;
}

/**
 * The dimension ledger behind the degree/height bounds: Hilbert-function
 * values of degree-d genus-g space curves and their Hilbert-scheme ambient
 * dimensions at the Gotzmann bound r.  N_m = dim of degree-m forms in four
 * variables, p(m) = dm + 1 − g, q(m) = N_m − p(m).
 */
struct HilbertDims {
    Int r, N_r, N_rm3, N_rm4, N_rp1, p_rp1, q_r;
    Int alpha, beta, alpha_prime, beta_prime, s, L;

    /** Exponent α + β − α′ − β′ + 1 of the ambient product. */
    Int exponent() const {
        return alpha + beta - alpha_prime - beta_prime + 1;
    }
};

inline Int forms_dim(const Int& m) {  // N_m = C(m+3, 3)
    if (m < 0) return Int(0);
    if (!m.fits_ulong_p() && m > 0)
        throw LedgerInconsistency("forms_dim: degree out of range");
    return binomial(mpz_get_ui(m.get_mpz_t()) + 3, 3);
}

inline HilbertDims hilbert_dims(const DGIndex& dg) {
    HilbertDims h;
    h.r = gotzmann_r(dg);
    h.N_r = forms_dim(h.r);
    h.N_rm3 = forms_dim(h.r - 3);
    h.N_rm4 = forms_dim(h.r - 4);
    h.N_rp1 = forms_dim(h.r + 1);
    h.p_rp1 = dg.d * (h.r + 1) + 1 - dg.g;
    h.q_r = h.N_r - (dg.d * h.r + 1 - dg.g);
    const Int qn = h.q_r - h.N_rm4;

    h.alpha = qn * h.N_r - 1;
    h.beta = h.p_rp1 * h.N_rp1 - 1;
    h.beta_prime = h.p_rp1 * h.p_rp1 - 1;
    h.alpha_prime = qn * h.q_r - 1;
    h.s = h.p_rp1 * h.N_rm3 + 4 * h.p_rp1 * qn;
    h.L = h.N_r;

    for (const Int* v : std::initializer_list<const Int*>{
             &h.p_rp1, &h.q_r, &qn, &h.alpha, &h.beta, &h.alpha_prime,
             &h.beta_prime, &h.s})
        if (*v < 0)
            throw LedgerInconsistency(
                "hilbert_dims: negative intermediate for (d,g) = (" +
                dg.d.get_str() + "," + dg.g.get_str() + ")");

    Int cap = dg.d + 2;
    mpz_pow_ui(cap.get_mpz_t(), cap.get_mpz_t(), 15);
    if (h.s * h.L > cap)
        throw LedgerInconsistency("hilbert_dims: s·L exceeds (d+2)^15");
    return h;
}

/**
 * Exact coefficient of η^{e_η}·θ₁^{e₁}·θ₂^{e₂}·θ₃^{e₃} in
 * (L·η + θ₁ + θ₂ + θ₃)^N, i.e. L^{e_η}·N!/(e_η!·e₁!·e₂!·e₃!), as an
 * up-tagged TowerReal.  Small exponents are computed exactly; large ones
 * through directed log-gamma, which is what makes the astronomically large
 * ledger entries affordable.
 */
inline TowerReal chow_coeff(const Rat& L, int e_eta, const Int& e1,
                            const Int& e2, const Int& e3, const Int& N) {
    if (e_eta < 0 || e_eta > 1)
        throw InvalidInput("chow_coeff: e_η must be 0 or 1");
    if (e1 < 0 || e2 < 0 || e3 < 0)
        throw InvalidInput("chow_coeff: negative exponent");
    if (Int(e_eta) + e1 + e2 + e3 != N)
        throw InvalidInput("chow_coeff: exponents do not sum to N");
    if (e_eta == 1 && L <= 0)
        throw InvalidInput("chow_coeff: L must be positive when e_η = 1");

    if (N <= (1 << 22)) {  // exact multinomial
        const unsigned long n = mpz_get_ui(N.get_mpz_t());
        const unsigned long a = mpz_get_ui(e1.get_mpz_t());
        const unsigned long b = mpz_get_ui(e2.get_mpz_t());
        Int coeff = binomial(n, static_cast<unsigned long>(e_eta));
        coeff *= binomial(n - static_cast<unsigned long>(e_eta), a);
        coeff *= binomial(n - static_cast<unsigned long>(e_eta) - a, b);
        Rat out(coeff);
        if (e_eta == 1) out *= L;
        return TowerReal::of_rat(out, RoundDir::Up, 192);
    }

    const mpfr_prec_t p = 192;
    auto lg = [&](const Int& x, mpfr_rnd_t r) {
        return Real::lngamma(
            Real::of_int(x + 1, p, r == MPFR_RNDU ? MPFR_RNDU : MPFR_RNDD), p,
            r);
    };
    Real num = lg(N, MPFR_RNDU);
    for (const Int* e : {&e1, &e2, &e3})
        num = Real::sub(num, lg(*e, MPFR_RNDD), p, MPFR_RNDU);
    // e_η! is 1 either way; convert nats to bits and add e_η·log₂L
    Real bits = Real::div(num, Real::ln2(p, MPFR_RNDD), p, MPFR_RNDU);
    if (e_eta == 1)
        bits = Real::add(bits,
                         Real::log2(Real::of_rat(L, p, MPFR_RNDU), p,
                                    MPFR_RNDU),
                         p, MPFR_RNDU);
    return TowerReal::from_log2(bits, RoundDir::Up);
}

/**
 * Degree bound for NL_{d,g} from the dimension ledger: the exact
 * coefficient of θ₁·θ₂^{α−α′}·θ₃^{β−β′} in (Lη+θ₁+θ₂+θ₃)^{α+β−α′−β′+1}.
 * (The unknown fiber dimension is dropped — that only weakens the bound.)
 */
inline TowerReal deg_bound_ledger(const DGIndex& dg) {
    const HilbertDims h = hilbert_dims(dg);
    const Int e2 = h.alpha - h.alpha_prime;
    const Int e3 = h.beta - h.beta_prime;
    return chow_coeff(Rat(h.L), 0, Int(1), e2, e3, h.exponent());
}

/**
 * Bound on log₂ of the height (1-norm of the coefficient vector) of
 * NL_{d,g}: the Mahler-measure ledger term ln(sL)·[η-coefficient] converted
 * to bits, plus deg·log₂36 from the coefficient-growth lemma.
 */
inline TowerReal height_bound_ledger(const DGIndex& dg) {
    const HilbertDims h = hilbert_dims(dg);
    const Int e2 = h.alpha - h.alpha_prime;
    const Int e3 = h.beta - h.beta_prime;
    const TowerReal deg = chow_coeff(Rat(h.L), 0, Int(1), e2, e3,
                                     h.exponent());
    const TowerReal mcoef = chow_coeff(Rat(h.L), 1, Int(0), e2, e3,
                                       h.exponent());
    const mpfr_prec_t p = 192;
    // m(NL)·log₂e = log₂(sL)·[coeff], since ln(x)·log₂e = log₂x
    const Real log_sl = Real::log2(Real::of_int(h.s * h.L, p, MPFR_RNDU), p,
                                   MPFR_RNDU);
    const TowerReal m_bits =
        tower_mul(mcoef, TowerReal::of_real(log_sl, RoundDir::Up));
    const Real log36 = Real::log2(Real::of_long(36, p), p, MPFR_RNDU);
    const TowerReal deg_bits =
        tower_mul(deg, TowerReal::of_real(log36, RoundDir::Up));
    return tower_add(m_bits, deg_bits);
}

/**
 * Closed form deg(NL_Δ) ≤ 3^{(Δ+20)^{9/2}}, rounded up.  Raising `prec`
 * tightens the enclosure: every step rounds up and a finer grid only
 * lowers an upper bound, so the result is monotone in the precision.
 */
inline TowerReal deg_bound_closed(const Int& delta, mpfr_prec_t prec = 192) {
    if (delta <= 0)
        throw InvalidInput("deg_bound_closed: Δ must be positive");
    const mpfr_prec_t p = prec;
    const Real base = Real::of_int(delta + 20, p, MPFR_RNDU);
    const Real expnt = Real::pow(base, Real::of_rat(Rat(9, 2), p, MPFR_RNDU),
                                 p, MPFR_RNDU);
    const Real log3 = Real::log2(Real::of_long(3, p), p, MPFR_RNDU);
    return TowerReal::from_log2(Real::mul(expnt, log3, p, MPFR_RNDU),
                                RoundDir::Up);
}

/** Closed form log₂‖NL_Δ‖₁ ≤ (Δ+60)⁵·3^{(Δ+20)^{9/2}}, rounded up. */
inline TowerReal height_bound_closed(const Int& delta,
                                     mpfr_prec_t prec = 192) {
    if (delta <= 0)
        throw InvalidInput("height_bound_closed: Δ must be positive");
    const TowerReal poly =
        tower_pow(TowerReal::of_int(delta + 60, RoundDir::Up, prec), Rat(5));
    return tower_mul(poly, deg_bound_closed(delta, prec));
}

} // namespace quartica
