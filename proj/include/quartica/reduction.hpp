#pragma once

#include <array>
#include <map>
#include <vector>

#include "quartica/errors.hpp"
#include "quartica/qpoly.hpp"
#include "quartica/real.hpp"

namespace quartica {

/** The four partials of a quartic form. */
inline std::array<QPoly, 4> jacobian(const QPoly& f) {
    if (f.degree() != 4) throw DegreeMismatch("jacobian: expected a quartic");
    return {f.partial(0), f.partial(1), f.partial(2), f.partial(3)};
}

/**
 * Division by the Jacobian ideal of a smooth quartic f: every form a of
 * degree d ≥ 12 is written exactly as a = Σ b_i·∂_i f with deg b_i = d−3.
 *
 * Construction solves the 455×880 linear system over the degree-12 slice
 * once, by fraction-free Gauss–Jordan elimination with first-nonzero
 * pivoting and free variables set to zero; that fixes one deterministic
 * choice among the many valid divisions.  Unsolvability of the system is
 * exactly singularity of the surface, so building this map doubles as the
 * smoothness test.
 *
 * Degrees above 12 are handled by the variable-splitting recursion
 * Q_d(a) = Σ x_i·Q_{d−1}(a_i), which keeps the operator 1-norm bounded by
 * the base norm ‖Q₁₂‖ (max over basis columns of Σ_i ‖b_i‖₁).
 */
class DivisionMap {
public:
    static DivisionMap build(const QPoly& f) {
        if (f.degree() != 4 || f.is_zero())
            throw DegreeMismatch("division map: base must be a nonzero quartic");
        DivisionMap Q;
        Q.f_ = f;
        Q.jac_ = jacobian(f);
        Q.basis12_ = monomial_basis(12);
        Q.basis9_ = monomial_basis(9);
        Q.solve_base_system();
        Q.compute_norm();
        return Q;
    }

    /**
     * Rebuild from cached columns (e.g. a deserialized division table)
     * without re-solving the linear system.  Shapes are validated and the
     * operator norm recomputed; the division identities themselves are
     * trusted — call verify() for the exact re-check.
     */
    static DivisionMap from_columns(const QPoly& f,
                                    std::vector<std::array<QPoly, 4>> cols) {
        if (f.degree() != 4 || f.is_zero())
            throw DegreeMismatch("division map: base must be a nonzero quartic");
        DivisionMap Q;
        Q.f_ = f;
        Q.jac_ = jacobian(f);
        Q.basis12_ = monomial_basis(12);
        Q.basis9_ = monomial_basis(9);
        if (cols.size() != Q.basis12_.size())
            throw ShapeMismatch("division map: wrong column count");
        for (size_t r = 0; r < Q.basis12_.size(); ++r)
            Q.index12_[Q.basis12_[r]] = r;
        Q.columns_ = std::move(cols);
        Q.compute_norm();
        return Q;
    }

    /** Exact re-check of m = Σ_i b_i·∂_i f for every basis column. */
    bool verify() const {
        for (size_t m = 0; m < basis12_.size(); ++m) {
            QPoly acc(12);
            for (int i = 0; i < 4; ++i)
                if (!columns_[m][i].is_zero()) acc += columns_[m][i] * jac_[i];
            QPoly want(12);
            want.add_coeff(basis12_[m], Rat(1));
            if (!(acc == want)) return false;
        }
        return true;
    }

    const QPoly& base() const { return f_; }
    const std::array<QPoly, 4>& partials() const { return jac_; }

    /** ‖Q₁₂‖: operator 1-norm of the degree-12 division, exact. */
    const Rat& operator_norm() const { return norm_; }

    const std::array<QPoly, 4>& column(size_t index) const {
        return columns_[index];
    }
    const std::vector<Mono>& basis12() const { return basis12_; }

    /** Q_d: divide a degree-d form (d ≥ 12) by the Jacobian ideal. */
    std::array<QPoly, 4> divide(const QPoly& a) const {
        const int d = a.degree();
        if (d < 12) throw DegreeTooLow("division needs degree ≥ 12");
        if (d == 12) {
            std::array<QPoly, 4> out{QPoly(9), QPoly(9), QPoly(9), QPoly(9)};
            for (const auto& [m, c] : a.terms()) {
                const auto& col = columns_[index12(m)];
                for (int i = 0; i < 4; ++i)
                    for (const auto& [bm, bc] : col[i].terms())
                        out[i].add_coeff(bm, c * bc);
            }
            return out;
        }
        auto parts = a.split_by_variable();
        std::array<QPoly, 4> out{QPoly(d - 3), QPoly(d - 3), QPoly(d - 3),
                                 QPoly(d - 3)};
        for (int v = 0; v < 4; ++v) {
            if (parts[v].is_zero()) continue;
            Mono var{0, 0, 0, 0};
            var[v] = 1;
            auto sub = divide(parts[v]);
            for (int i = 0; i < 4; ++i) out[i] += sub[i].shifted(var);
        }
        return out;
    }

    /**
     * G_k: reduce a degree-(4k−4) form to an equivalent degree-8 form,
     * lowering the pole order from k to 3 one step at a time.  G₃ = id;
     * G_k(a) = G_{k−1}((1/(k−1))·Σ_i ∂_i b_i) with (b_i) = Q_{4k−4}(a).
     */
    QPoly pole_reduce(const QPoly& a, long k) const {
        if (k < 3 || a.degree() != 4 * k - 4)
            throw DegreeMismatch("pole_reduce: need deg a = 4k−4, k ≥ 3");
        if (k == 3) return a;
        auto b = divide(a);
        QPoly s(static_cast<int>(4 * (k - 1) - 4));
        for (int i = 0; i < 4; ++i) {
            if (!b[i].is_zero()) s += b[i].partial(i);
        }
        s *= Rat(1, k - 1);
        return pole_reduce(s, k - 1);
    }

private:
    DivisionMap() = default;

    size_t index12(const Mono& m) const {
        auto it = index12_.find(m);
        if (it == index12_.end())
            throw DegreeMismatch("divide: monomial outside degree-12 slice");
        return it->second;
    }

    // Fraction-free Gauss–Jordan on the 455×880 system (augmented by the
    // identity).  Row r = degree-12 monomial; column 220·i + j = coefficient
    // of basis9[j] in the b_i slot.  All entries stay integer minors of the
    // input matrix, so no rational arithmetic happens inside the elimination.
    void solve_base_system() {
        const size_t R = basis12_.size();       // 455
        const size_t C9 = basis9_.size();       // 220
        const size_t CS = 4 * C9;               // 880 structural columns
        const size_t CT = CS + R;               // + augmented identity

        // integer partials: clear denominators once
        Int lden(1);
        for (const auto& jp : jac_)
            for (const auto& [m, c] : jp.terms())
                mpz_lcm(lden.get_mpz_t(), lden.get_mpz_t(),
                        c.get_den_mpz_t());

        std::map<Mono, size_t, MonoOrder> idx12;
        for (size_t r = 0; r < R; ++r) idx12[basis12_[r]] = r;
        index12_ = idx12;

        std::vector<Int> A(R * CT, Int(0));
        auto at = [&](size_t r, size_t c) -> Int& { return A[r * CT + c]; };
        for (int i = 0; i < 4; ++i) {
            for (const auto& [jm, jc] : jac_[i].terms()) {
                Rat scaled = jc * Rat(lden);     // integer by construction
                for (size_t j = 0; j < C9; ++j) {
                    Mono prod = mono_mul(basis9_[j], jm);
                    at(idx12.at(prod), i * C9 + j) += scaled.get_num();
                }
            }
        }
        for (size_t r = 0; r < R; ++r) at(r, CS + r) = 1;

        std::vector<char> row_used(R, 0);
        std::vector<std::pair<size_t, size_t>> pivots;  // (row, column)
        pivots.reserve(R);
        Int prev(1);
        mpz_t acc;
        mpz_init(acc);

        for (size_t c = 0; c < CS && pivots.size() < R; ++c) {
            size_t prow = R;
            for (size_t r = 0; r < R; ++r)
                if (!row_used[r] && at(r, c) != 0) { prow = r; break; }
            if (prow == R) continue;  // free column
            row_used[prow] = 1;
            pivots.emplace_back(prow, c);
            const Int piv = at(prow, c);

            for (size_t i = 0; i < R; ++i) {
                if (i == prow) continue;
                Int& head = at(i, c);
                const bool zero_head = head == 0;
                // structural columns not yet scanned, then the augmented block
                for (size_t phase = 0; phase < 2; ++phase) {
                    const size_t j0 = phase == 0 ? c + 1 : CS;
                    const size_t j1 = phase == 0 ? CS : CT;
                    for (size_t j = j0; j < j1; ++j) {
                        Int& aij = at(i, j);
                        const Int& arj = at(prow, j);
                        if (zero_head) {
                            if (aij == 0) continue;
                            mpz_mul(acc, piv.get_mpz_t(), aij.get_mpz_t());
                        } else if (aij == 0) {
                            if (arj == 0) continue;
                            mpz_mul(acc, arj.get_mpz_t(), head.get_mpz_t());
                            mpz_neg(acc, acc);
                        } else {
                            mpz_mul(acc, piv.get_mpz_t(), aij.get_mpz_t());
                            if (arj != 0)
                                mpz_submul(acc, arj.get_mpz_t(),
                                           head.get_mpz_t());
                        }
                        mpz_divexact(aij.get_mpz_t(), acc, prev.get_mpz_t());
                    }
                }
                if (!zero_head) head = 0;
            }
            prev = piv;
        }
        mpz_clear(acc);

        if (pivots.size() < R)
            throw SingularSurface(
                "degree-12 slice not contained in the Jacobian ideal");

        // Solutions with free variables zero: for target monomial column m,
        // the unknown at pivot column c_k equals E[r_k][m]·lden / prev.
        const Int denom = prev;
        columns_.assign(R, {QPoly(9), QPoly(9), QPoly(9), QPoly(9)});
        for (const auto& [r, c] : pivots) {
            const size_t vi = c / C9, mj = c % C9;
            for (size_t m = 0; m < R; ++m) {
                const Int& num = at(r, CS + m);
                if (num == 0) continue;
                Rat coeff(num * lden, denom);
                coeff.canonicalize();
                columns_[m][vi].add_coeff(basis9_[mj], coeff);
            }
        }
    }

    void compute_norm() {
        norm_ = 0;
        for (const auto& col : columns_) {
            Rat s(0);
            for (int i = 0; i < 4; ++i) s += col[i].one_norm();
            if (s > norm_) norm_ = s;
        }
    }

    QPoly f_;
    std::array<QPoly, 4> jac_;
    std::vector<Mono> basis12_, basis9_;
    std::map<Mono, size_t, MonoOrder> index12_;
    std::vector<std::array<QPoly, 4>> columns_;
    Rat norm_;
};

/** ‖G_k‖ ≤ (4‖Q₁₂‖)^(k−3), exact. */
inline Rat reduction_norm_bound(long k, const Rat& normQ12) {
    if (k < 3) throw InvalidInput("reduction_norm_bound: k ≥ 3 required");
    if (normQ12 < 0) throw InvalidInput("reduction_norm_bound: negative norm");
    Rat c = Rat(4) * normQ12;
    Rat r(1);
    for (long i = 0; i < k - 3; ++i) r *= c;
    return r;
}

/**
 * Upper bound Γ ≤ C·max(‖A‖·C², 1) on the growth rate of the higher period
 * derivatives, with C = 4‖Q₁₂‖.  The chain bounding ‖G_{k+1}‖ ≤ C^{k+1}
 * needs C ≥ 1, so C is clamped up to 1 (a smaller C would make the closed
 * form undershoot the k = 2 term).  Rounded up.
 */
inline Real gamma_upper_bound(const Rat& normQ12, const Real& normA_upper) {
    if (normQ12 < 0)
        throw InvalidInput("gamma_upper_bound: negative ‖Q₁₂‖");
    if (normA_upper.sgn() <= 0)
        throw InvalidInput("gamma_upper_bound: ‖A‖ bound must be positive");
    const mpfr_prec_t prec = std::max<mpfr_prec_t>(normA_upper.prec(), 64);
    Rat cq = Rat(4) * normQ12;
    if (cq < 1) cq = 1;
    const Real C = Real::of_rat(cq, prec, MPFR_RNDU);
    Real t = Real::mul(C, C, prec, MPFR_RNDU);
    t = Real::mul(t, normA_upper, prec, MPFR_RNDU);
    if (Real::cmp_long(t, 1) < 0) t = Real::of_long(1, prec);
    return Real::mul(C, t, prec, MPFR_RNDU);
}

} // namespace quartica
