#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>

#include "quartica/errors.hpp"
#include "quartica/rational.hpp"

namespace quartica {

/**
 * Thin RAII wrapper over an mpfr_t with *explicit* rounding everywhere.
 * There is deliberately no operator overloading and no ambient rounding
 * mode: every operation states its target precision and direction, which
 * is what makes the certified layers above this one auditable.
 *
 * Copying preserves the source precision bit-for-bit.
 */
class Real {
public:
    explicit Real(mpfr_prec_t prec = 64) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);  // exact: same precision
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sgn() const { return mpfr_sgn(v_); }
    /** Exponent e with |x| in [2^(e-1), 2^e); only meaningful for x != 0. */
    mpfr_exp_t exp2_of() const { return mpfr_get_exp(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // ---- factories ----
    static Real of_long(long x, mpfr_prec_t prec = 64) {
        Real r(prec);
        mpfr_set_si(r.v_, x, MPFR_RNDN);  // exact for |x| < 2^63 at prec ≥ 64
        return r;
    }
    static Real of_double(double x, mpfr_prec_t prec = 64) {
        Real r(std::max<mpfr_prec_t>(prec, 53));
        mpfr_set_d(r.v_, x, MPFR_RNDN);  // exact: doubles are dyadic
        return r;
    }
    static Real of_rat(const Rat& q, mpfr_prec_t prec, mpfr_rnd_t rnd,
                       int* t = nullptr) {
        Real r(prec);
        int tt = mpfr_set_q(r.v_, q.get_mpq_t(), rnd);
        if (t) *t = tt;
        return r;
    }
    static Real of_int(const Int& z, mpfr_prec_t prec, mpfr_rnd_t rnd,
                       int* t = nullptr) {
        Real r(prec);
        int tt = mpfr_set_z(r.v_, z.get_mpz_t(), rnd);
        if (t) *t = tt;
        return r;
    }
    /** Exact power of two m·2^e (m = ±1). */
    static Real pow2(mpfr_exp_t e, int sign = 1, mpfr_prec_t prec = 64) {
        Real r(prec);
        mpfr_set_si_2exp(r.v_, sign, e, MPFR_RNDN);
        return r;
    }
    static Real pos_inf(mpfr_prec_t prec = 64) {
        Real r(prec);
        mpfr_set_inf(r.v_, 1);
        return r;
    }

    // ---- exact comparisons (no rounding involved) ----
    static int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }
    static int cmp_long(const Real& a, long b) { return mpfr_cmp_si(a.v_, b); }
    static const Real& min(const Real& a, const Real& b) {
        return cmp(a, b) <= 0 ? a : b;
    }
    static const Real& max(const Real& a, const Real& b) {
        return cmp(a, b) >= 0 ? a : b;
    }

    // ---- arithmetic; `t` receives the mpfr ternary (0 means exact) ----
    static Real add(const Real& a, const Real& b, mpfr_prec_t prec,
                    mpfr_rnd_t rnd, int* t = nullptr) {
        Real r(prec);
        int tt = mpfr_add(r.v_, a.v_, b.v_, rnd);
        if (t) *t = tt;
        return r;
    }
    static Real sub(const Real& a, const Real& b, mpfr_prec_t prec,
                    mpfr_rnd_t rnd, int* t = nullptr) {
        Real r(prec);
        int tt = mpfr_sub(r.v_, a.v_, b.v_, rnd);
        if (t) *t = tt;
        return r;
    }
    static Real mul(const Real& a, const Real& b, mpfr_prec_t prec,
                    mpfr_rnd_t rnd, int* t = nullptr) {
        Real r(prec);
        int tt = mpfr_mul(r.v_, a.v_, b.v_, rnd);
        if (t) *t = tt;
        return r;
    }
    static Real div(const Real& a, const Real& b, mpfr_prec_t prec,
                    mpfr_rnd_t rnd, int* t = nullptr) {
        Real r(prec);
        int tt = mpfr_div(r.v_, a.v_, b.v_, rnd);
        if (t) *t = tt;
        return r;
    }
    static Real sqrt(const Real& a, mpfr_prec_t prec, mpfr_rnd_t rnd,
                     int* t = nullptr) {
        Real r(prec);
        int tt = mpfr_sqrt(r.v_, a.v_, rnd);
        if (t) *t = tt;
        return r;
    }
    static Real hypot(const Real& a, const Real& b, mpfr_prec_t prec,
                      mpfr_rnd_t rnd, int* t = nullptr) {
        Real r(prec);
        int tt = mpfr_hypot(r.v_, a.v_, b.v_, rnd);
        if (t) *t = tt;
        return r;
    }
    static Real log2(const Real& a, mpfr_prec_t prec, mpfr_rnd_t rnd) {
        Real r(prec);
        mpfr_log2(r.v_, a.v_, rnd);
        return r;
    }
    static Real exp2(const Real& a, mpfr_prec_t prec, mpfr_rnd_t rnd) {
        Real r(prec);
        mpfr_exp2(r.v_, a.v_, rnd);
        return r;
    }
    static Real pow(const Real& a, const Real& b, mpfr_prec_t prec,
                    mpfr_rnd_t rnd) {
        Real r(prec);
        mpfr_pow(r.v_, a.v_, b.v_, rnd);
        return r;
    }
    static Real lngamma(const Real& a, mpfr_prec_t prec, mpfr_rnd_t rnd) {
        Real r(prec);
        mpfr_lngamma(r.v_, a.v_, rnd);
        return r;
    }
    /** log(2) to the given precision and direction. */
    static Real ln2(mpfr_prec_t prec, mpfr_rnd_t rnd) {
        Real r(prec);
        mpfr_const_log2(r.v_, rnd);
        return r;
    }
    static Real abs(const Real& a) {
        Real r(a.prec());
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);  // exact
        return r;
    }
    static Real neg(const Real& a) {
        Real r(a.prec());
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);  // exact
        return r;
    }
    /** Round an existing value to `prec` bits in direction `rnd`. */
    static Real round_to(const Real& a, mpfr_prec_t prec, mpfr_rnd_t rnd) {
        Real r(prec);
        mpfr_set(r.v_, a.v_, rnd);
        return r;
    }

    /**
     * Upper bound on the rounding error of a nearest-rounded operation that
     * produced `x` at precision `prec` with mpfr ternary `t`: zero when the
     * operation was exact, otherwise 2^(exp(x)-prec) ≥ one ulp ≥ twice the
     * actual half-ulp error.
     */
    static Real round_slack(const Real& x, mpfr_prec_t prec, int t) {
        if (t == 0 || x.is_zero()) return Real(32);
        if (!x.is_finite()) return pos_inf(32);
        return pow2(x.exp2_of() - prec, 1, 32);
    }

private:
    mpfr_t v_;
};

/** Exact mpq value of a (finite) Real; every mpfr number is rational. */
inline Rat real_to_rat(const Real& x) {
    if (x.is_zero()) return Rat(0);
    if (!x.is_finite()) throw InvalidInput("real_to_rat: non-finite value");
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.raw());
    Rat q(m);
    if (e >= 0) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
        q *= Rat(p);
    } else {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(-e));
        q /= Rat(p);
    }
    q.canonicalize();
    return q;
}

/**
 * Exact finite decimal expansion of a dyadic value: m·2^e is written as
 * m·5^(-e) / 10^(-e) for e < 0.  Round-trips exactly through
 * parse_decimal_exact below.
 */
inline std::string to_exact_decimal(const Real& x) {
    if (x.is_zero()) return "0";
    if (!x.is_finite()) throw InvalidInput("to_exact_decimal: non-finite");
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.raw());
    bool negative = m < 0;
    if (negative) m = -m;
    std::string digits;
    if (e >= 0) {
        mpz_class shifted = m << static_cast<unsigned long>(e);
        digits = shifted.get_str();
    } else {
        unsigned long k = static_cast<unsigned long>(-e);
        mpz_class five;
        mpz_ui_pow_ui(five.get_mpz_t(), 5, k);
        mpz_class scaled = m * five;  // value = scaled / 10^k
        digits = scaled.get_str();
        if (digits.size() <= k)
            digits.insert(0, k + 1 - digits.size(), '0');
        digits.insert(digits.size() - k, ".");
        // trim trailing zeros after the point (canonical form)
        size_t last = digits.find_last_not_of('0');
        if (digits[last] == '.') --last;
        digits.erase(last + 1);
    }
    return negative ? "-" + digits : digits;
}

/** Parse a plain decimal string ("-12.75") into an exact rational. */
inline Rat parse_decimal(const std::string& s) {
    if (s.empty()) throw ParseError("empty decimal");
    std::string t = s;
    bool neg = false;
    size_t pos = 0;
    if (t[0] == '+' || t[0] == '-') {
        neg = t[0] == '-';
        pos = 1;
    }
    std::string intpart, fracpart;
    bool seen_dot = false, seen_digit = false;
    for (; pos < t.size(); ++pos) {
        char ch = t[pos];
        if (ch == '.') {
            if (seen_dot) throw ParseError("two decimal points: " + s);
            seen_dot = true;
        } else if (ch >= '0' && ch <= '9') {
            (seen_dot ? fracpart : intpart) += ch;
            seen_digit = true;
        } else {
            throw ParseError("bad decimal character in: " + s);
        }
    }
    if (!seen_digit) throw ParseError("no digits in decimal: " + s);
    mpz_class num(intpart.empty() ? "0" : intpart);
    for (char c : fracpart) num = num * 10 + (c - '0');
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fracpart.size());
    Rat q(num, den);
    q.canonicalize();
    if (neg) q = -q;
    return q;
}

} // namespace quartica
