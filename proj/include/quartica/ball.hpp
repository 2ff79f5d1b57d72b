#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "quartica/errors.hpp"
#include "quartica/real.hpp"

namespace quartica {

/** Radii live at this fixed precision and always round up. */
inline constexpr mpfr_prec_t kRadPrec = 64;

inline Real rad_add(const Real& a, const Real& b) {
    return Real::add(a, b, kRadPrec, MPFR_RNDU);
}
inline Real rad_mul(const Real& a, const Real& b) {
    return Real::mul(a, b, kRadPrec, MPFR_RNDU);
}

/**
 * Complex ball: midpoint (re, im) at the working precision of whoever made
 * it, radius rounded up at a fixed 64 bits.  Every operation returns a ball
 * containing the exact result for all points of the input balls.
 */
struct Ball {
    Real re, im, rad;

    Ball() : re(64), im(64), rad(32) {}
    Ball(Real re_, Real im_, Real rad_)
        : re(std::move(re_)), im(std::move(im_)), rad(std::move(rad_)) {
        if (rad.sgn() < 0) throw InvalidInput("ball radius must be ≥ 0");
    }

    bool is_exact() const { return rad.is_zero(); }
    mpfr_prec_t prec() const {
        return std::max(re.prec(), im.prec());
    }

    static Ball exact(Real re_, Real im_) {
        return Ball(std::move(re_), std::move(im_), Real(32));
    }
    static Ball zero(mpfr_prec_t prec) {
        return exact(Real(prec), Real(prec));
    }
    static Ball one(mpfr_prec_t prec) {
        return exact(Real::of_long(1, prec), Real(prec));
    }
    static Ball of_rat(const Rat& re_q, const Rat& im_q, mpfr_prec_t prec) {
        int tr = 0, ti = 0;
        Real r = Real::of_rat(re_q, prec, MPFR_RNDN, &tr);
        Real i = Real::of_rat(im_q, prec, MPFR_RNDN, &ti);
        Real slack = rad_add(Real::round_slack(r, prec, tr),
                             Real::round_slack(i, prec, ti));
        return Ball(std::move(r), std::move(i), std::move(slack));
    }
    static Ball of_int(const Int& re_z, mpfr_prec_t prec) {
        return of_rat(Rat(re_z), Rat(0), prec);
    }
};

inline Ball ball_neg(const Ball& a) {
    return Ball(Real::neg(a.re), Real::neg(a.im), a.rad);
}

inline Ball ball_conj(const Ball& a) {
    return Ball(a.re, Real::neg(a.im), a.rad);
}

inline Ball ball_add(const Ball& a, const Ball& b, mpfr_prec_t prec) {
    int tr = 0, ti = 0;
    Real re = Real::add(a.re, b.re, prec, MPFR_RNDN, &tr);
    Real im = Real::add(a.im, b.im, prec, MPFR_RNDN, &ti);
    Real rad = rad_add(a.rad, b.rad);
    rad = rad_add(rad, Real::round_slack(re, prec, tr));
    rad = rad_add(rad, Real::round_slack(im, prec, ti));
    return Ball(std::move(re), std::move(im), std::move(rad));
}

inline Ball ball_sub(const Ball& a, const Ball& b, mpfr_prec_t prec) {
    return ball_add(a, ball_neg(b), prec);
}

/** Certified upper bound on |midpoint|. */
inline Real ball_mid_abs_upper(const Ball& a) {
    return Real::hypot(a.re, a.im, kRadPrec, MPFR_RNDU);
}

/** Certified [lower, upper] enclosure of |z| over the whole ball. */
inline std::pair<Real, Real> ball_abs_bounds(const Ball& a) {
    Real hi = rad_add(ball_mid_abs_upper(a), a.rad);
    Real mid_lo = Real::hypot(a.re, a.im, kRadPrec, MPFR_RNDD);
    Real lo = Real::sub(mid_lo, a.rad, kRadPrec, MPFR_RNDD);
    // the <= also normalizes the −0 that x−x produces under RNDD
    if (lo.sgn() <= 0) lo = Real(kRadPrec);
    return {std::move(lo), std::move(hi)};
}

inline bool ball_contains_zero(const Ball& a) {
    return ball_abs_bounds(a).first.is_zero();
}

inline Ball ball_mul(const Ball& a, const Ball& b, mpfr_prec_t prec) {
    int t1 = 0, t2 = 0, t3 = 0;
    Real p1 = Real::mul(a.re, b.re, prec, MPFR_RNDN, &t1);
    Real p2 = Real::mul(a.im, b.im, prec, MPFR_RNDN, &t2);
    Real re = Real::sub(p1, p2, prec, MPFR_RNDN, &t3);
    Real slack = rad_add(Real::round_slack(p1, prec, t1),
                         Real::round_slack(p2, prec, t2));
    slack = rad_add(slack, Real::round_slack(re, prec, t3));

    Real p3 = Real::mul(a.re, b.im, prec, MPFR_RNDN, &t1);
    Real p4 = Real::mul(a.im, b.re, prec, MPFR_RNDN, &t2);
    Real im = Real::add(p3, p4, prec, MPFR_RNDN, &t3);
    slack = rad_add(slack, Real::round_slack(p3, prec, t1));
    slack = rad_add(slack, Real::round_slack(p4, prec, t2));
    slack = rad_add(slack, Real::round_slack(im, prec, t3));

    const Real ma = ball_mid_abs_upper(a), mb = ball_mid_abs_upper(b);
    Real rad = rad_mul(ma, b.rad);
    rad = rad_add(rad, rad_mul(mb, a.rad));
    rad = rad_add(rad, rad_mul(a.rad, b.rad));
    rad = rad_add(rad, slack);
    return Ball(std::move(re), std::move(im), std::move(rad));
}

/** Multiply by an exact real scalar. */
inline Ball ball_scale(const Ball& a, const Real& s, mpfr_prec_t prec) {
    return ball_mul(a, Ball::exact(s, Real(prec)), prec);
}

/**
 * Reciprocal through the certified enclosure of |w|: the result midpoint is
 * conj(w₀)·m and the whole error budget rides on the real interval
 * [1/hi², 1/lo²] ∋ 1/|w|², packaged as a real ball and multiplied in.
 */
inline Ball ball_inv(const Ball& a, mpfr_prec_t prec) {
    auto [lo, hi] = ball_abs_bounds(a);
    if (lo.sgn() <= 0)
        throw InvalidInput("ball_inv: ball contains zero");
    const Real one = Real::of_long(1, prec);
    Real ilo = Real::mul(hi, hi, prec, MPFR_RNDU);
    ilo = Real::div(one, ilo, prec, MPFR_RNDD);          // 1/hi² rounded down
    Real ihi = Real::mul(lo, lo, prec, MPFR_RNDD);
    ihi = Real::div(one, ihi, prec, MPFR_RNDU);          // 1/lo² rounded up
    Real mid = Real::add(ilo, ihi, prec, MPFR_RNDN);
    mid = Real::mul(mid, Real::pow2(-1, 1, prec), prec, MPFR_RNDN); // exact /2
    Real r1 = Real::sub(mid, ilo, kRadPrec, MPFR_RNDU);
    Real r2 = Real::sub(ihi, mid, kRadPrec, MPFR_RNDU);
    Ball inv_sq(mid, Real(prec), Real::max(r1, r2));
    return ball_mul(ball_conj(a), inv_sq, prec);
}

inline Ball ball_div(const Ball& a, const Ball& b, mpfr_prec_t prec) {
    return ball_mul(a, ball_inv(b, prec), prec);
}

// ---------------------------------------------------------------------------
// vectors and matrices
// ---------------------------------------------------------------------------

using BallVec = std::vector<Ball>;

struct BallMat {
    size_t rows = 0, cols = 0;
    std::vector<Ball> a;

    BallMat() = default;
    BallMat(size_t r, size_t c, mpfr_prec_t prec)
        : rows(r), cols(c), a(r * c, Ball::zero(prec)) {}

    Ball& at(size_t r, size_t c) { return a[r * cols + c]; }
    const Ball& at(size_t r, size_t c) const { return a[r * cols + c]; }
};

inline BallMat conj_transpose(const BallMat& m) {
    BallMat out;
    out.rows = m.cols;
    out.cols = m.rows;
    out.a.reserve(m.a.size());
    for (size_t r = 0; r < m.cols; ++r)
        for (size_t c = 0; c < m.rows; ++c)
            out.a.push_back(ball_conj(m.at(c, r)));
    return out;
}

inline BallVec mat_vec(const BallMat& m, const BallVec& x, mpfr_prec_t prec) {
    if (x.size() != m.cols) throw ShapeMismatch("mat_vec: size mismatch");
    BallVec out(m.rows, Ball::zero(prec));
    for (size_t r = 0; r < m.rows; ++r) {
        Ball acc = Ball::zero(prec);
        for (size_t c = 0; c < m.cols; ++c)
            acc = ball_add(acc, ball_mul(m.at(r, c), x[c], prec), prec);
        out[r] = acc;
    }
    return out;
}

inline BallMat mat_mul(const BallMat& a, const BallMat& b, mpfr_prec_t prec) {
    if (a.cols != b.rows) throw ShapeMismatch("mat_mul: size mismatch");
    BallMat out(a.rows, b.cols, prec);
    for (size_t r = 0; r < a.rows; ++r)
        for (size_t c = 0; c < b.cols; ++c) {
            Ball acc = Ball::zero(prec);
            for (size_t k = 0; k < a.cols; ++k)
                acc = ball_add(acc, ball_mul(a.at(r, k), b.at(k, c), prec),
                               prec);
            out.at(r, c) = acc;
        }
    return out;
}

/** Hermitian dot Σ conj(u_i)·v_i. */
inline Ball dot_herm(const BallVec& u, const BallVec& v, mpfr_prec_t prec) {
    if (u.size() != v.size()) throw ShapeMismatch("dot_herm: size mismatch");
    Ball acc = Ball::zero(prec);
    for (size_t i = 0; i < u.size(); ++i)
        acc = ball_add(acc, ball_mul(ball_conj(u[i]), v[i], prec), prec);
    return acc;
}

/** Bilinear dot Σ u_i·v_i (no conjugation). */
inline Ball dot_bilinear(const BallVec& u, const BallVec& v,
                         mpfr_prec_t prec) {
    if (u.size() != v.size())
        throw ShapeMismatch("dot_bilinear: size mismatch");
    Ball acc = Ball::zero(prec);
    for (size_t i = 0; i < u.size(); ++i)
        acc = ball_add(acc, ball_mul(u[i], v[i], prec), prec);
    return acc;
}

/** Certified [lower, upper] for the Hermitian 2-norm of a ball vector. */
inline std::pair<Real, Real> vec_norm_bounds(const BallVec& v) {
    Real shi(kRadPrec), slo(kRadPrec);
    for (const Ball& b : v) {
        auto [lo, hi] = ball_abs_bounds(b);
        shi = rad_add(shi, rad_mul(hi, hi));
        slo = Real::add(slo, Real::mul(lo, lo, kRadPrec, MPFR_RNDD), kRadPrec,
                        MPFR_RNDD);
    }
    return {Real::sqrt(slo, kRadPrec, MPFR_RNDD),
            Real::sqrt(shi, kRadPrec, MPFR_RNDU)};
}

/**
 * Certified upper bound on the spectral norm of every point matrix:
 * sqrt(‖·‖₁ · ‖·‖∞) over entrywise absolute-value upper bounds.
 */
inline Real op_norm_upper(const BallMat& m) {
    std::vector<Real> col_sum(m.cols, Real(kRadPrec));
    std::vector<Real> row_sum(m.rows, Real(kRadPrec));
    for (size_t r = 0; r < m.rows; ++r)
        for (size_t c = 0; c < m.cols; ++c) {
            Real hi = ball_abs_bounds(m.at(r, c)).second;
            col_sum[c] = rad_add(col_sum[c], hi);
            row_sum[r] = rad_add(row_sum[r], hi);
        }
    Real n1(kRadPrec), ninf(kRadPrec);
    for (const Real& s : col_sum) n1 = Real::max(n1, s);
    for (const Real& s : row_sum) ninf = Real::max(ninf, s);
    return Real::sqrt(rad_mul(n1, ninf), kRadPrec, MPFR_RNDU);
}

/**
 * Certified lower bound via standard-basis witness vectors: ‖M‖ ≥ ‖M·e_j‖₂,
 * and a lower bound of the latter is sqrt(Σ_i lower|M_ij|²).  Returns 0 when
 * nothing positive is certifiable (e.g. every column ball straddles zero).
 */
inline Real op_norm_lower(const BallMat& m) {
    Real best(kRadPrec);
    for (size_t c = 0; c < m.cols; ++c) {
        Real s(kRadPrec);
        for (size_t r = 0; r < m.rows; ++r) {
            Real lo = ball_abs_bounds(m.at(r, c)).first;
            s = Real::add(s, Real::mul(lo, lo, kRadPrec, MPFR_RNDD), kRadPrec,
                          MPFR_RNDD);
        }
        best = Real::max(best, Real::sqrt(s, kRadPrec, MPFR_RNDD));
    }
    return best;
}

namespace detail {

/** Gershgorin lower bound for a ball matrix assumed to enclose a Hermitian
 * point matrix: min over rows of (lower Re(diag) − Σ upper |offdiag|). */
inline Real gershgorin_lower(const BallMat& m) {
    Real g = Real::pos_inf(kRadPrec);
    for (size_t i = 0; i < m.rows; ++i) {
        const Ball& d = m.at(i, i);
        Real lo = Real::sub(d.re, d.rad, kRadPrec, MPFR_RNDD);
        for (size_t j = 0; j < m.rows; ++j) {
            if (j == i) continue;
            lo = Real::sub(lo, ball_abs_bounds(m.at(i, j)).second, kRadPrec,
                           MPFR_RNDD);
        }
        if (Real::cmp(lo, g) < 0) g = lo;
    }
    return g;
}

/** Enclosure of (H + H^H)/2; halving is exact. */
inline BallMat symmetrize(const BallMat& h, mpfr_prec_t prec) {
    BallMat ht = conj_transpose(h);
    BallMat out(h.rows, h.cols, prec);
    const Real half = Real::pow2(-1, 1, prec);
    for (size_t i = 0; i < h.a.size(); ++i)
        out.a[i] = ball_scale(ball_add(h.a[i], ht.a[i], prec), half, prec);
    return out;
}

} // namespace detail

/**
 * Certified lower bound on the smallest eigenvalue of every Hermitian point
 * matrix enclosed by H.  An approximate eigenvector matrix V is computed in
 * double precision from the midpoints; conjugating H by the exact dyadic
 * lift of V nearly diagonalizes it, so Gershgorin discs on V^H·H·V are
 * tight.  Because V is only approximately unitary, the disc bound g is
 * corrected by δ ≥ ‖V^H·V − I‖: λ_min ≥ g/(1+δ) for g ≥ 0, g/(1−δ) for
 * g < 0 (needs δ < 1).  The raw Gershgorin bound on H itself is a fallback;
 * the result is the larger of the two.
 *
 * With require_positive set, a non-positive certified bound throws
 * PrecisionTooLow instead of being returned.
 */
inline Real hermitian_lambda_min_lower(const BallMat& h, mpfr_prec_t prec,
                                       bool require_positive = false) {
    if (h.rows != h.cols)
        throw ShapeMismatch("hermitian_lambda_min_lower: matrix not square");
    const size_t n = h.rows;
    if (n == 0) throw ShapeMismatch("hermitian_lambda_min_lower: empty");

    BallMat s = detail::symmetrize(h, prec);
    Real best = detail::gershgorin_lower(s);

    Eigen::MatrixXcd mid(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            mid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::complex<double>(s.at(i, j).re.to_double(),
                                     s.at(i, j).im.to_double());
    mid = 0.5 * (mid + mid.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mid);
    if (es.info() == Eigen::Success) {
        BallMat v(n, n, prec);
        bool finite = true;
        for (size_t i = 0; i < n && finite; ++i)
            for (size_t j = 0; j < n; ++j) {
                const std::complex<double> z =
                    es.eigenvectors()(static_cast<Eigen::Index>(i),
                                      static_cast<Eigen::Index>(j));
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                    finite = false;
                    break;
                }
                v.at(i, j) = Ball::exact(Real::of_double(z.real(), prec),
                                         Real::of_double(z.imag(), prec));
            }
        if (finite) {
            BallMat vh = conj_transpose(v);
            BallMat t = mat_mul(vh, mat_mul(s, v, prec), prec);
            Real g = detail::gershgorin_lower(t);

            BallMat e = mat_mul(vh, v, prec);
            for (size_t i = 0; i < n; ++i)
                e.at(i, i) = ball_sub(e.at(i, i), Ball::one(prec), prec);
            Real delta = op_norm_upper(e);

            if (Real::cmp_long(delta, 1) < 0 && g.is_finite()) {
                const Real one = Real::of_long(1, kRadPrec);
                Real refined(kRadPrec);
                bool ok = true;
                if (g.sgn() >= 0) {
                    refined = Real::div(g, rad_add(one, delta), kRadPrec,
                                        MPFR_RNDD);
                } else {
                    const Real den =
                        Real::sub(one, delta, kRadPrec, MPFR_RNDD);
                    ok = den.sgn() > 0;
                    if (ok)
                        refined = Real::div(g, den, kRadPrec, MPFR_RNDD);
                }
                if (ok) best = Real::max(best, refined);
            }
        }
    }

    if (require_positive && best.sgn() <= 0)
        throw PrecisionTooLow(
            "hermitian_lambda_min_lower: positivity not certifiable");
    return best;
}

/**
 * Basis of the subspace E = {c : cᵀ·G·v = 0 for each constraint v}, the
 * orthogonal complement of the given vectors under the bilinear extension
 * of the integer form G.  Each constraint contributes the normal direction
 * n = conj(G·v) (so that the condition reads ⟨n, c⟩ = 0 in the standard
 * Hermitian product); the normals are Gram–Schmidt orthonormalized and the
 * standard basis vectors are projected onto the complement, keeping the
 * n − k residuals whose norm is certifiably nonzero.  Output vectors are
 * orthonormalized for the coefficientwise Hermitian norm; all pairings of
 * output vectors with the inputs are balls containing zero.
 */
inline std::vector<BallVec> orthocomplement_basis(
    const std::vector<BallVec>& vectors,
    const std::vector<std::vector<Int>>& form, mpfr_prec_t prec) {
    const size_t n = form.size();
    if (n == 0) throw ShapeMismatch("orthocomplement_basis: empty form");
    for (const auto& row : form)
        if (row.size() != n)
            throw ShapeMismatch("orthocomplement_basis: form not square");
    for (const auto& v : vectors)
        if (v.size() != n)
            throw ShapeMismatch("orthocomplement_basis: vector/form mismatch");
    const size_t k = vectors.size();
    if (k > n)
        throw PrecisionTooLow(
            "orthocomplement_basis: more constraints than dimensions");

    BallMat g(n, n, prec);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            g.at(i, j) = Ball::of_int(form[i][j], prec);

    auto normalize = [&](BallVec& v) -> bool {
        // Norm enclosure at the working precision: vec_norm_bounds works at
        // the radius precision, whose granularity would leak into the
        // normalized midpoints and cap the attainable accuracy at ~2^-64.
        const Ball n2 = dot_herm(v, v, prec);
        Real lo = Real::sub(n2.re, n2.rad, prec, MPFR_RNDD);
        if (lo.sgn() <= 0) return false;
        Real hi = Real::add(n2.re, n2.rad, prec, MPFR_RNDU);
        lo = Real::sqrt(lo, prec, MPFR_RNDD);
        hi = Real::sqrt(hi, prec, MPFR_RNDU);
        Real ilo = Real::div(Real::of_long(1, prec), hi, prec, MPFR_RNDD);
        Real ihi = Real::div(Real::of_long(1, prec), lo, prec, MPFR_RNDU);
        Real mid = Real::add(ilo, ihi, prec, MPFR_RNDN);
        mid = Real::mul(mid, Real::pow2(-1, 1, prec), prec, MPFR_RNDN);
        Real r = Real::max(Real::sub(mid, ilo, kRadPrec, MPFR_RNDU),
                           Real::sub(ihi, mid, kRadPrec, MPFR_RNDU));
        Ball inv(mid, Real(prec), r);
        for (Ball& b : v) b = ball_mul(b, inv, prec);
        return true;
    };
    auto project_out = [&](BallVec& v, const BallVec& u) {
        Ball c = dot_herm(u, v, prec);
        for (size_t i = 0; i < n; ++i)
            v[i] = ball_sub(v[i], ball_mul(c, u[i], prec), prec);
    };

    std::vector<BallVec> normals;
    normals.reserve(k);
    for (const BallVec& v : vectors) {
        BallVec nvec = mat_vec(g, v, prec);
        for (Ball& b : nvec) b = ball_conj(b);
        for (const BallVec& u : normals) project_out(nvec, u);
        if (!normalize(nvec))
            throw PrecisionTooLow(
                "orthocomplement_basis: constraint independence "
                "not certifiable");
        normals.push_back(std::move(nvec));
    }

    std::vector<BallVec> out;
    out.reserve(n - k);
    for (size_t i = 0; i < n && out.size() < n - k; ++i) {
        BallVec r(n, Ball::zero(prec));
        r[i] = Ball::one(prec);
        for (const BallVec& u : normals) project_out(r, u);
        for (const BallVec& u : out) project_out(r, u);
        if (normalize(r)) out.push_back(std::move(r));
    }
    if (out.size() < n - k)
        throw PrecisionTooLow(
            "orthocomplement_basis: full complement not certifiable");
    return out;
}

} // namespace quartica
