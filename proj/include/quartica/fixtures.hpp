#pragma once
// Deterministic synthetic period fixtures.
//
// The generator plants an explicit 2-form ω = s·ω₀ on the standard K3
// lattice over the Fermat quartic and builds an exact rational pairing map A
// that reproduces the planted pairings: with M_f the multiplication-by-f
// matrix on degree-4 forms and D a hand-chosen 22 × dim R_4 complex matrix,
//
//     A = −D · (M_fᵀ M_f)⁻¹ · M_fᵀ    so that    −A·vec(m_j·f) = D e_j,
//
// hence A·vec(f²) = −D·(coeffs of f) recovers the planted pairing column and
// the derivative form Q(x) = Σ_j |x·D e_j|² restricted to the
// orthocomplement E of {h, ω̄} is a near-identity (its 20 columns hold a
// near-orthonormal basis of E).  Everything is exact rational except the
// basis of E, which is computed in ball arithmetic and rounded to dyadics —
// the deviation from orthonormality is ~2^-190 and is absorbed by the
// certified eigenvalue bound.

#include <utility>
#include <vector>

#include "quartica/ball.hpp"
#include "quartica/errors.hpp"
#include "quartica/lattice.hpp"
#include "quartica/pipeline.hpp"
#include "quartica/qpoly.hpp"
#include "quartica/rational.hpp"

namespace quartica {

struct SyntheticOptions {
    mpfr_prec_t prec = 256;    // ball precision of the serialized pairing map
    Rat scale = Rat(1);        // |ω| scale s; planted classes pair to s·Z
    Rat extra_radius = Rat(0); // uniform radius inflation (band fixtures)
    bool violate_h = false;    // plant ω with ω·h ≠ 0 (negative testing)
    bool degenerate_form = false; // zero out the derivative form on E
};

struct SyntheticFixture {
    LatticeData lattice;
    QPoly f;                        // Fermat quartic
    BallMat A;                      // 22 × dim R_8 pairing map
    std::vector<Int> omega_re, omega_im;  // coordinates of ω₀ (unscaled)
    std::vector<Int> p0_re, p0_im;        // pairings G·ω₀ (unscaled)
    Rat scale;
    mpfr_prec_t prec = 0;

    /** Exact pairing γ·ω = s·(γᵀ G ω₀) of a class with the planted form. */
    std::pair<Rat, Rat> exact_pairing(const LatticeClass& g) const {
        if (g.coords.size() != LatticeData::kRank)
            throw ShapeMismatch("exact_pairing: class has wrong rank");
        Int re = 0, im = 0;
        for (size_t i = 0; i < g.coords.size(); ++i) {
            re += g.coords[i] * p0_re[i];
            im += g.coords[i] * p0_im[i];
        }
        return {scale * Rat(re), scale * Rat(im)};
    }

    /** Integer basis (20 classes) of the sublattice pairing to zero with ω₀:
     *  e₁, f₁, e₂−f₂, e₃−f₃ and the 16 unit classes of the two E8 blocks. */
    static std::vector<LatticeClass> zero_pairing_basis() {
        std::vector<LatticeClass> out;
        auto unit = [](size_t i) {
            std::vector<Int> v(LatticeData::kRank, 0);
            v[i] = 1;
            return LatticeClass{std::move(v)};
        };
        out.push_back(unit(0));
        out.push_back(unit(1));
        std::vector<Int> d23(LatticeData::kRank, 0);
        d23[2] = 1;
        d23[3] = -1;
        out.push_back(LatticeClass{std::move(d23)});
        std::vector<Int> d45(LatticeData::kRank, 0);
        d45[4] = 1;
        d45[5] = -1;
        out.push_back(LatticeClass{std::move(d45)});
        for (size_t i = 6; i < LatticeData::kRank; ++i) out.push_back(unit(i));
        return out;
    }
};

namespace detail {

/** Exact rational inverse by Gauss-Jordan with partial pivoting. */
inline std::vector<std::vector<Rat>> rat_inverse(
    const std::vector<std::vector<Int>>& m) {
    const size_t n = m.size();
    std::vector<std::vector<Rat>> work(n, std::vector<Rat>(2 * n, Rat(0)));
    for (size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw ShapeMismatch("rat_inverse: not square");
        for (size_t j = 0; j < n; ++j) work[i][j] = Rat(m[i][j]);
        work[i][n + i] = 1;
    }
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && work[piv][col] == 0) ++piv;
        if (piv == n) throw InvalidInput("rat_inverse: singular matrix");
        std::swap(work[piv], work[col]);
        const Rat d = work[col][col];
        for (size_t j = col; j < 2 * n; ++j) work[col][j] /= d;
        for (size_t i = 0; i < n; ++i) {
            if (i == col || work[i][col] == 0) continue;
            const Rat f = work[i][col];
            for (size_t j = col; j < 2 * n; ++j) work[i][j] -= f * work[col][j];
        }
    }
    std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = work[i][n + j];
    return inv;
}

}  // namespace detail

inline SyntheticFixture make_synthetic_fixture(const SyntheticOptions& opt = {}) {
    if (opt.scale <= 0)
        throw InvalidInput("make_synthetic_fixture: scale must be positive");
    if (opt.extra_radius < 0)
        throw InvalidInput("make_synthetic_fixture: radius must be >= 0");

    SyntheticFixture fx{standard_k3_lattice(), QPoly(4), BallMat(),
                        {},       {},  {}, {}, opt.scale, opt.prec};
    const size_t n = LatticeData::kRank;
    const auto& G = fx.lattice.gram();

    // ω₀ = (e₂+f₂) + i(e₃+f₃): ω₀·h = 0, ω₀·ω₀ = 0, ω₀·ω̄₀ = 4.
    fx.omega_re.assign(n, 0);
    fx.omega_im.assign(n, 0);
    fx.omega_re[2] = fx.omega_re[3] = 1;
    fx.omega_im[4] = fx.omega_im[5] = 1;
    fx.p0_re.assign(n, 0);
    fx.p0_im.assign(n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            fx.p0_re[i] += G[i][j] * fx.omega_re[j];
            fx.p0_im[i] += G[i][j] * fx.omega_im[j];
        }

    // Fermat quartic and the positions of its monomials in the bases.
    const auto basis4 = monomial_basis(4);
    const auto basis8 = monomial_basis(8);
    std::vector<size_t> support;
    for (int v = 0; v < 4; ++v) {
        Mono m{0, 0, 0, 0};
        m[static_cast<size_t>(v)] = 4;
        fx.f.add_coeff(m, Rat(1));
        for (size_t j = 0; j < basis4.size(); ++j)
            if (basis4[j] == m) {
                support.push_back(j);
                break;
            }
    }
    std::vector<size_t> slots;  // columns hosting the near-orthonormal basis
    for (size_t j = 0; j < basis4.size() && slots.size() < n - 2; ++j) {
        bool is_support = false;
        for (size_t s : support) is_support |= (s == j);
        if (!is_support) slots.push_back(j);
    }

    // Near-orthonormal dyadic basis of E = {x : xᵀGh = 0, xᵀGω̄₀ = 0}.
    const mpfr_prec_t pw = 320;
    BallVec conj_omega;
    conj_omega.reserve(n);
    for (size_t i = 0; i < n; ++i)
        conj_omega.push_back(
            Ball::of_rat(Rat(fx.omega_re[i]), Rat(-fx.omega_im[i]), pw));
    const std::vector<BallVec> W = orthocomplement_basis(
        {int_vector_balls(fx.lattice.h_coords(), pw), conj_omega},
        fx.lattice.gram(), pw);
    std::vector<std::vector<Rat>> u_re(W.size(), std::vector<Rat>(n)),
        u_im(W.size(), std::vector<Rat>(n));
    for (size_t k = 0; k < W.size(); ++k)
        for (size_t i = 0; i < n; ++i) {
            u_re[k][i] = real_to_rat(Real::round_to(W[k][i].re, 200, MPFR_RNDN));
            u_im[k][i] = real_to_rat(Real::round_to(W[k][i].im, 200, MPFR_RNDN));
        }

    // Planted derivative matrix D: pairing column at w⁴, conj(u_k) elsewhere.
    const size_t m4 = basis4.size();
    std::vector<std::vector<Rat>> D_re(n, std::vector<Rat>(m4, Rat(0))),
        D_im(n, std::vector<Rat>(m4, Rat(0)));
    for (size_t i = 0; i < n; ++i) {
        Rat pre = Rat(fx.p0_re[i]), pim = Rat(fx.p0_im[i]);
        if (opt.violate_h) {
            pre += Rat(G[i][0]) + 2 * Rat(G[i][1]);  // shift by the column G·h
        }
        D_re[i][support[0]] = -opt.scale * pre;
        D_im[i][support[0]] = -opt.scale * pim;
    }
    if (!opt.degenerate_form)
        for (size_t k = 0; k < slots.size() && k < W.size(); ++k)
            for (size_t i = 0; i < n; ++i) {
                D_re[i][slots[k]] = u_re[k][i];
                D_im[i][slots[k]] = -u_im[k][i];
            }

    // M_f: coefficient matrix of g ↦ g·f on degree-4 forms.
    std::vector<std::vector<Int>> Mf(basis8.size(), std::vector<Int>(m4, 0));
    for (size_t j = 0; j < m4; ++j) {
        QPoly mono(4);
        mono.add_coeff(basis4[j], Rat(1));
        const std::vector<Rat> col = (mono * fx.f).dense_coeffs(basis8);
        for (size_t l = 0; l < col.size(); ++l) {
            Rat c = col[l];
            c.canonicalize();
            Mf[l][j] = c.get_num();
        }
    }
    std::vector<std::vector<Int>> Gf(m4, std::vector<Int>(m4, 0));
    for (size_t a = 0; a < m4; ++a)
        for (size_t b = 0; b < m4; ++b) {
            Int acc = 0;
            for (size_t l = 0; l < basis8.size(); ++l)
                acc += Mf[l][a] * Mf[l][b];
            Gf[a][b] = acc;
        }
    const auto Gi = detail::rat_inverse(Gf);

    // B = Gi·M_fᵀ, restricted to the rows with a nonzero D column.
    std::vector<size_t> used_cols{support[0]};
    if (!opt.degenerate_form)
        for (size_t k = 0; k < slots.size() && k < W.size(); ++k)
            used_cols.push_back(slots[k]);
    std::vector<std::vector<Rat>> B(used_cols.size(),
                                    std::vector<Rat>(basis8.size(), Rat(0)));
    for (size_t r = 0; r < used_cols.size(); ++r) {
        const size_t j = used_cols[r];
        for (size_t l = 0; l < basis8.size(); ++l) {
            Rat acc(0);
            for (size_t m = 0; m < m4; ++m)
                if (Mf[l][m] != 0) acc += Gi[j][m] * Rat(Mf[l][m]);
            B[r][l] = acc;
        }
    }

    // A = −D·Gi·M_fᵀ as exact rationals, then as balls.
    fx.prec = opt.prec;
    fx.A = BallMat(n, basis8.size(), opt.prec);
    const Real extra = Real::of_rat(opt.extra_radius, kRadPrec, MPFR_RNDU);
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < basis8.size(); ++l) {
            Rat are(0), aim(0);
            for (size_t r = 0; r < used_cols.size(); ++r) {
                const size_t j = used_cols[r];
                if (D_re[i][j] != 0) are -= D_re[i][j] * B[r][l];
                if (D_im[i][j] != 0) aim -= D_im[i][j] * B[r][l];
            }
            Ball b = Ball::of_rat(are, aim, opt.prec);
            if (opt.extra_radius > 0)
                b = Ball(b.re, b.im, rad_add(b.rad, extra));
            fx.A.at(i, l) = std::move(b);
        }
    return fx;
}

}  // namespace quartica
