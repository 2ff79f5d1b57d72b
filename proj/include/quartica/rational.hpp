#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "quartica/errors.hpp"

namespace quartica {

using Int = mpz_class;  // arbitrary-precision integer
using Rat = mpq_class;  // arbitrary-precision rational, always reduced

/** Parse "p" or "p/q" into a reduced rational.  Rejects q = 0 and junk. */
inline Rat parse_rat(const std::string& s) {
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0)
        throw ParseError("not a rational: '" + s + "'");
    if (q.get_den() == 0)
        throw ParseError("zero denominator: '" + s + "'");
    q.canonicalize();
    return q;
}

/** Canonical string form: "p" or "p/q" with gcd(p,q)=1, q>0. */
inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

/** Exact binomial coefficient C(n,k); 0 when k < 0 or k > n. */
inline Int binomial(long n, long k) {
    if (k < 0 || k > n) return Int(0);
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return r;
}

/** Exact factorial n!. */
inline Int factorial(long n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

} // namespace quartica
