#pragma once

// Truncated integer power series for the modular-form degree bounds on
// Noether-Lefschetz loci: the square-representation series A and B, the
// correction series Psi, their fixed 21st-degree combination Theta, and the
// representation count r21.  All arithmetic is exact.

#include <utility>
#include <vector>

#include "quartica/errors.hpp"
#include "quartica/rational.hpp"

namespace quartica {

/// Integer power series truncated at a fixed order: coefficients of
/// q^0..q^N.  All arithmetic stays at the common truncation order.
struct IntSeries {
    long order = 0;           ///< truncation order N
    std::vector<Int> c;       ///< N+1 coefficients

    explicit IntSeries(long n) : order(n) {
        if (n < 0) throw InvalidInput("IntSeries: negative order");
        c.assign(static_cast<size_t>(n) + 1, Int(0));
    }

    const Int& operator[](long k) const {
        if (k < 0 || k > order) throw InvalidInput("IntSeries: index");
        return c[static_cast<size_t>(k)];
    }
    Int& operator[](long k) {
        if (k < 0 || k > order) throw InvalidInput("IntSeries: index");
        return c[static_cast<size_t>(k)];
    }
};

namespace detail {

inline void check_same_order(const IntSeries& a, const IntSeries& b) {
    if (a.order != b.order)
        throw InvalidInput("IntSeries: mismatched truncation orders");
}

}  // namespace detail

inline IntSeries series_add(const IntSeries& a, const IntSeries& b) {
    detail::check_same_order(a, b);
    IntSeries r(a.order);
    for (long k = 0; k <= a.order; ++k) r[k] = a[k] + b[k];
    return r;
}

inline IntSeries series_sub(const IntSeries& a, const IntSeries& b) {
    detail::check_same_order(a, b);
    IntSeries r(a.order);
    for (long k = 0; k <= a.order; ++k) r[k] = a[k] - b[k];
    return r;
}

inline IntSeries series_scale(const Int& s, const IntSeries& a) {
    IntSeries r(a.order);
    for (long k = 0; k <= a.order; ++k) r[k] = s * a[k];
    return r;
}

/// Product truncated at the common order.
inline IntSeries series_mul(const IntSeries& a, const IntSeries& b) {
    detail::check_same_order(a, b);
    IntSeries r(a.order);
    for (long i = 0; i <= a.order; ++i) {
        if (a[i] == 0) continue;
        for (long j = 0; i + j <= a.order; ++j) {
            if (b[j] == 0) continue;
            mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(),
                       b[j].get_mpz_t());
        }
    }
    return r;
}

/// a^e by binary exponentiation, truncated at a's order.  e ≥ 0.
inline IntSeries series_pow(const IntSeries& a, long e) {
    if (e < 0) throw InvalidInput("series_pow: negative exponent");
    IntSeries r(a.order);
    r[0] = 1;
    IntSeries base = a;
    while (e > 0) {
        if (e & 1) r = series_mul(r, base);
        e >>= 1;
        if (e > 0) base = series_mul(base, base);
    }
    return r;
}

/**
 * The two square-representation generating series truncated at order N:
 *   A[k] = #{n ∈ Z : n² = k},   B[k] = Σ_{n² = k} (−1)ⁿ.
 */
inline std::pair<IntSeries, IntSeries> theta_A_B(long N) {
    IntSeries A(N), B(N);
    A[0] = 1;
    B[0] = 1;
    for (long n = 1; n * n <= N; ++n) {
        A[n * n] = 2;
        B[n * n] = (n % 2 == 0) ? 2 : -2;
    }
    return {std::move(A), std::move(B)};
}

/**
 * The degree-bound series Θ truncated at order N: the fixed integer
 * combination of A- and B-powers below, divided exactly by 2²².
 *
 *   2²²Θ = 3A²¹ − 81A¹⁹B² − 627A¹⁸B³ − 14436A¹⁷B⁴ − 20007A¹⁶B⁵
 *          − 169092A¹⁵B⁶ − 120636A¹⁴B⁷ − 621558A¹³B⁸ − 292796A¹²B⁹
 *          − 1038366A¹¹B¹⁰ − 346122A¹⁰B¹¹ − 878388A⁹B¹² − 207186A⁸B¹³
 *          − 361908A⁷B¹⁴ − 56364A⁶B¹⁵ − 60021A⁵B¹⁶ − 4812A⁴B¹⁷
 *          − 1881A³B¹⁸ − 27A²B¹⁹ + B²¹
 *
 * Throws DivisibilityViolation if any combined coefficient is not divisible
 * by 2²² (which would indicate a transcription bug in the table above).
 */
inline IntSeries theta_series(long N) {
    // (coefficient, A-exponent, B-exponent)
    static constexpr struct {
        long coeff;
        int ea;
        int eb;
    } kTerms[] = {
        {3, 21, 0},        {-81, 19, 2},      {-627, 18, 3},
        {-14436, 17, 4},   {-20007, 16, 5},   {-169092, 15, 6},
        {-120636, 14, 7},  {-621558, 13, 8},  {-292796, 12, 9},
        {-1038366, 11, 10}, {-346122, 10, 11}, {-878388, 9, 12},
        {-207186, 8, 13},  {-361908, 7, 14},  {-56364, 6, 15},
        {-60021, 5, 16},   {-4812, 4, 17},    {-1881, 3, 18},
        {-27, 2, 19},      {1, 0, 21},
    };

    const auto [A, B] = theta_A_B(N);

    // power tables A^0..A^21, B^0..B^21 by iterated multiplication
    std::vector<IntSeries> pa, pb;
    pa.reserve(22);
    pb.reserve(22);
    IntSeries one(N);
    one[0] = 1;
    pa.push_back(one);
    pb.push_back(one);
    for (int i = 1; i <= 21; ++i) {
        pa.push_back(series_mul(pa.back(), A));
        pb.push_back(series_mul(pb.back(), B));
    }

    IntSeries acc(N);
    for (const auto& t : kTerms)
        acc = series_add(acc,
                         series_scale(Int(t.coeff),
                                      series_mul(pa[static_cast<size_t>(t.ea)],
                                                 pb[static_cast<size_t>(t.eb)])));

    for (long k = 0; k <= N; ++k) {
        if (!mpz_divisible_2exp_p(acc[k].get_mpz_t(), 22))
            throw DivisibilityViolation(
                "theta_series: coefficient of q^" + std::to_string(k) +
                " not divisible by 2^22");
        mpz_fdiv_q_2exp(acc[k].get_mpz_t(), acc[k].get_mpz_t(), 22);
    }
    return acc;
}

/// Ψ[k] = 108 when k = 8n² for some n ≥ 1, else 0; truncated at order N.
inline IntSeries psi_series(long N) {
    IntSeries r(N);
    for (long n = 1; 8 * n * n <= N; ++n) r[8 * n * n] = 108;
    return r;
}

/**
 * Upper bound on the degree of the Noether-Lefschetz locus of discriminant
 * Δ: the coefficient of q^Δ in Θ − Ψ.  The series is defined for every
 * positive Δ; admissibility is the caller's concern.  Requires Δ ≤ N.
 */
inline Int mp_degree_upper(long delta, long N) {
    if (delta < 1) throw InvalidInput("mp_degree_upper: delta must be >= 1");
    if (N < delta) throw InvalidInput("mp_degree_upper: order below delta");
    const IntSeries theta = theta_series(N);
    const IntSeries psi = psi_series(N);
    return theta[delta] - psi[delta];
}

/// #{(a₁..a₂₁) ∈ Z²¹ : Σaᵢ² = k}, via the 21st power of the one-variable
/// square-representation series truncated at k.
inline Int r21(long k) {
    if (k < 0) throw InvalidInput("r21: negative argument");
    IntSeries sq(k);
    sq[0] = 1;
    for (long n = 1; n * n <= k; ++n) sq[n * n] = 2;
    return series_pow(sq, 21)[k];
}

}  // namespace quartica
