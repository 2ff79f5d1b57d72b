#pragma once

// Shared helpers for the test suite: deterministic random generators for
// polynomials and small rationals.  Everything is seeded explicitly so test
// failures reproduce bit-for-bit.

#include <random>
#include <vector>

#include "quartica/qpoly.hpp"

namespace qt {

using quartica::Mono;
using quartica::QPoly;
using quartica::Rat;

using Rng = std::mt19937_64;

inline Rat random_rat(Rng& rng, long num_bound = 9, long den_bound = 4) {
    std::uniform_int_distribution<long> num(-num_bound, num_bound);
    std::uniform_int_distribution<long> den(1, den_bound);
    long n = num(rng);
    if (n == 0) n = 1;
    Rat q(n, den(rng));
    q.canonicalize();
    return q;
}

/** Sparse random form of the given degree with ~term_count nonzero terms. */
inline QPoly random_poly(Rng& rng, int degree, int term_count = 8) {
    const auto basis = quartica::monomial_basis(degree);
    std::uniform_int_distribution<size_t> pick(0, basis.size() - 1);
    QPoly p(degree);
    for (int t = 0; t < term_count; ++t)
        p.add_coeff(basis[pick(rng)], random_rat(rng));
    if (p.is_zero()) p.set_coeff(basis[0], Rat(1));
    return p;
}

/** Dense random form: every monomial of the slice gets a small coefficient. */
inline QPoly random_dense_poly(Rng& rng, int degree, long coeff_bound = 9) {
    std::uniform_int_distribution<long> coeff(-coeff_bound, coeff_bound);
    QPoly p(degree);
    for (const auto& m : quartica::monomial_basis(degree)) {
        long c = coeff(rng);
        if (c == 0) c = 1;  // keep it genuinely dense
        p.set_coeff(m, Rat(c));
    }
    return p;
}

inline QPoly fermat_quartic() {
    QPoly f(4);
    f.set_coeff({4, 0, 0, 0}, 1);
    f.set_coeff({0, 4, 0, 0}, 1);
    f.set_coeff({0, 0, 4, 0}, 1);
    f.set_coeff({0, 0, 0, 4}, 1);
    return f;
}

} // namespace qt
