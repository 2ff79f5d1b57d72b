#pragma once

#include <vector>

#include "quartica/errors.hpp"
#include "quartica/rational.hpp"

namespace quartica {

/** A middle cohomology class in the fixed integral basis. */
struct LatticeClass {
    std::vector<Int> coords;
};

/**
 * The rank-22 intersection lattice of a quartic surface together with the
 * hyperplane class.  Construction validates everything the later bounds
 * rely on: even unimodular pairing of signature (3,19) and h·h = 4.
 */
class LatticeData {
public:
    static constexpr size_t kRank = 22;

    static LatticeData create(std::vector<std::vector<Int>> gram,
                              std::vector<Int> h) {
        LatticeData L;
        L.gram_ = std::move(gram);
        L.h_ = std::move(h);
        L.validate();
        return L;
    }

    const std::vector<std::vector<Int>>& gram() const { return gram_; }
    const std::vector<Int>& h_coords() const { return h_; }
    LatticeClass h() const { return LatticeClass{h_}; }

private:
    LatticeData() = default;
    void validate() const;

    std::vector<std::vector<Int>> gram_;
    std::vector<Int> h_;
};

/** γᵀ·gram·δ, exact. */
inline Int pair(const LatticeClass& a, const LatticeClass& b,
                const LatticeData& L) {
    const auto& g = L.gram();
    if (a.coords.size() != g.size() || b.coords.size() != g.size())
        throw ShapeMismatch("pair: class size does not match lattice rank");
    Int s(0);
    for (size_t i = 0; i < g.size(); ++i) {
        if (a.coords[i] == 0) continue;
        Int row(0);
        for (size_t j = 0; j < g.size(); ++j)
            if (b.coords[j] != 0) row += g[i][j] * b.coords[j];
        s += a.coords[i] * row;
    }
    return s;
}

/** Δ(γ) = (h·γ)² − 4·γ·γ; zero exactly on Zh, invariant under γ → γ+h, −γ. */
inline Int discriminant(const LatticeClass& g, const LatticeData& L) {
    const Int hg = pair(L.h(), g, L);
    return hg * hg - 4 * pair(g, g, L);
}

/** Δ values that can carry a nonempty Noether–Lefschetz locus. */
inline bool is_admissible_delta(const Int& delta) {
    if (delta <= 0) return false;
    const unsigned long m = mpz_fdiv_ui(delta.get_mpz_t(), 8);
    return m == 0 || m == 1 || m == 4;
}

/**
 * γ − ¼(γ·h)·h: the component orthogonal to the hyperplane class, with
 * coordinates in ¼·H_Z.
 */
inline std::vector<Rat> project_orthogonal_to_h(const LatticeClass& g,
                                                const LatticeData& L) {
    const Rat t = Rat(pair(g, L.h(), L), Int(4));
    std::vector<Rat> out(LatticeData::kRank);
    for (size_t i = 0; i < LatticeData::kRank; ++i)
        out[i] = Rat(g.coords[i]) - t * Rat(L.h_coords()[i]);
    return out;
}

namespace detail {

/**
 * Characteristic polynomial of an integer symmetric matrix by the
 * Faddeev–LeVerrier recurrence; all divisions are exact over Z.  Returns
 * coefficients c so that det(λI − A) = λⁿ + c[0]·λ^{n−1} + … + c[n−1].
 */
inline std::vector<Int> char_poly(const std::vector<std::vector<Int>>& a) {
    const size_t n = a.size();
    std::vector<std::vector<Int>> m(n, std::vector<Int>(n, Int(0)));
    std::vector<Int> c(n, Int(0));
    // m ← I at loop entry
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    for (size_t k = 1; k <= n; ++k) {
        // m ← a·m_prev
        std::vector<std::vector<Int>> am(n, std::vector<Int>(n, Int(0)));
        for (size_t i = 0; i < n; ++i)
            for (size_t l = 0; l < n; ++l) {
                if (a[i][l] == 0) continue;
                for (size_t j = 0; j < n; ++j)
                    if (m[l][j] != 0) am[i][j] += a[i][l] * m[l][j];
            }
        Int tr(0);
        for (size_t i = 0; i < n; ++i) tr += am[i][i];
        Int ck;
        mpz_divexact_ui(ck.get_mpz_t(), tr.get_mpz_t(),
                        static_cast<unsigned long>(k));
        ck = -ck;
        c[k - 1] = ck;
        for (size_t i = 0; i < n; ++i) am[i][i] += ck;
        m = std::move(am);
    }
    return c;
}

/** Descartes count of sign changes; exact for the real-rooted case. */
inline int sign_changes(const std::vector<Int>& coeffs) {
    int changes = 0, last = 0;
    for (const Int& c : coeffs) {
        const int s = sgn(c);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

} // namespace detail

inline void LatticeData::validate() const {
    if (gram_.size() != kRank || h_.size() != kRank)
        throw ShapeMismatch("lattice: rank must be 22");
    for (const auto& row : gram_)
        if (row.size() != kRank)
            throw ShapeMismatch("lattice: gram matrix must be square");
    for (size_t i = 0; i < kRank; ++i)
        for (size_t j = i + 1; j < kRank; ++j)
            if (gram_[i][j] != gram_[j][i])
                throw InvalidInput("lattice: gram matrix must be symmetric");
    for (size_t i = 0; i < kRank; ++i)
        if (mpz_odd_p(gram_[i][i].get_mpz_t()))
            throw NotEven("lattice: diagonal entry " + std::to_string(i) +
                          " is odd");

    // full coefficient list (1, c…) of det(λI − G), eigenvalues all real
    const std::vector<Int> c = detail::char_poly(gram_);
    const Int det = c.back();  // p(0) = det(−G) = det(G) in even dimension
    if (det != 1 && det != -1)
        throw NotUnimodular("lattice: |det| = " + det.get_str());

    std::vector<Int> p;
    p.reserve(kRank + 1);
    p.emplace_back(1);
    for (const Int& ci : c) p.push_back(ci);
    std::vector<Int> pneg = p;  // p(−λ): flip odd-power coefficients
    for (size_t i = 1; i <= kRank; i += 2) pneg[i] = -pneg[i];
    const int n_pos = detail::sign_changes(p);
    const int n_neg = detail::sign_changes(pneg);
    if (n_pos != 3 || n_neg != 19)
        throw WrongSignature("lattice: signature is (" +
                             std::to_string(n_pos) + "," +
                             std::to_string(n_neg) + "), expected (3,19)");

    Int hh(0);
    for (size_t i = 0; i < kRank; ++i)
        for (size_t j = 0; j < kRank; ++j) hh += h_[i] * gram_[i][j] * h_[j];
    if (hh != 4)
        throw WrongHSquare("lattice: h·h = " + hh.get_str() + ", expected 4");
}

/**
 * Reference fixture: three hyperbolic planes followed by two E₈(−1) blocks,
 * with h = e₁ + 2f₁ in the first plane (so h·h = 4).
 */
inline LatticeData standard_k3_lattice() {
    constexpr size_t n = LatticeData::kRank;
    std::vector<std::vector<Int>> g(n, std::vector<Int>(n, Int(0)));
    for (int b = 0; b < 3; ++b) {
        g[2 * b][2 * b + 1] = 1;
        g[2 * b + 1][2 * b] = 1;
    }
    // E₈ Dynkin diagram: chain 1−3−4−5−6−7−8 with node 2 attached to 4
    const int edges[7][2] = {{1, 3}, {3, 4}, {4, 5}, {5, 6},
                             {6, 7}, {7, 8}, {2, 4}};
    for (int blk = 0; blk < 2; ++blk) {
        const size_t off = 6 + 8 * static_cast<size_t>(blk);
        for (size_t i = 0; i < 8; ++i) g[off + i][off + i] = -2;
        for (const auto& e : edges) {
            const size_t i = off + static_cast<size_t>(e[0]) - 1;
            const size_t j = off + static_cast<size_t>(e[1]) - 1;
            g[i][j] = 1;
            g[j][i] = 1;
        }
    }
    std::vector<Int> h(n, Int(0));
    h[0] = 1;
    h[1] = 2;
    return LatticeData::create(std::move(g), std::move(h));
}

} // namespace quartica
