#pragma once

#include <string>

#include "quartica/errors.hpp"
#include "quartica/real.hpp"

namespace quartica {

enum class RoundDir { Up, Down };

inline mpfr_rnd_t rnd_of(RoundDir d) {
    return d == RoundDir::Up ? MPFR_RNDU : MPFR_RNDD;
}
inline RoundDir flip(RoundDir d) {
    return d == RoundDir::Up ? RoundDir::Down : RoundDir::Up;
}

/**
 * A positive real x too large (or occasionally too small) for plain
 * floating point, stored as x (level 0), log₂x (level 1) or log₂log₂x
 * (level 2), together with a rounding-direction tag: an up-tagged value
 * never underestimates the quantity it stands for, a down-tagged one never
 * overestimates.  Arithmetic keeps the direction sound and auto-promotes
 * once the stored value passes 2⁵³.
 */
class TowerReal {
public:
    TowerReal() : level_(0), dir_(RoundDir::Up), v_(Real(128)) {}

    static TowerReal of_real(Real v, RoundDir dir, int level = 0) {
        if (level < 0 || level > 2)
            throw InvalidInput("tower: level must be 0, 1 or 2");
        TowerReal t;
        t.level_ = level;
        t.dir_ = dir;
        t.v_ = std::move(v);
        t.normalize();
        return t;
    }
    static TowerReal of_rat(const Rat& q, RoundDir dir,
                            mpfr_prec_t prec = 128) {
        return of_real(Real::of_rat(q, prec, rnd_of(dir)), dir, 0);
    }
    static TowerReal of_int(const Int& z, RoundDir dir,
                            mpfr_prec_t prec = 128) {
        return of_rat(Rat(z), dir, prec);
    }
    /** The number 2^v. */
    static TowerReal from_log2(Real v, RoundDir dir) {
        return of_real(std::move(v), dir, 1);
    }
    /** The number 2^2^v. */
    static TowerReal from_log2log2(Real v, RoundDir dir) {
        return of_real(std::move(v), dir, 2);
    }

    int level() const { return level_; }
    RoundDir dir() const { return dir_; }
    const Real& stored() const { return v_; }
    mpfr_prec_t prec() const { return v_.prec(); }

    /** Raise the representation level by one (exact semantics, directed). */
    TowerReal promoted() const {
        if (level_ >= 2) throw InvalidInput("tower: cannot promote level 2");
        if (v_.sgn() <= 0)
            throw InvalidInput("tower: log of a non-positive value");
        TowerReal t;
        t.level_ = level_ + 1;
        t.dir_ = dir_;
        t.v_ = Real::log2(v_, v_.prec(), rnd_of(dir_));
        return t;
    }

    std::string describe() const {
        const char* names[] = {"x", "log2(x)", "log2(log2(x))"};
        char buf[64];
        mpfr_snprintf(buf, sizeof buf, "%.10Rg", v_.raw());
        return std::string("level ") + std::to_string(level_) + ", " +
               names[level_] + " = " + buf;
    }

    friend TowerReal tower_mul(const TowerReal& a, const TowerReal& b);
    friend TowerReal tower_add(const TowerReal& a, const TowerReal& b);
    friend TowerReal tower_pow(const TowerReal& a, const Rat& e);
    friend int tower_cmp(const TowerReal& a, const TowerReal& b);

private:
    void normalize() {
        while (level_ < 2 && v_.is_finite() && v_.sgn() > 0 &&
               v_.exp2_of() > 53) {
            v_ = Real::log2(v_, v_.prec(), rnd_of(dir_));
            ++level_;
        }
    }

    /** Two-sided enclosure of the value lifted to `target` level. */
    std::pair<Real, Real> lift_interval(int target) const {
        Real lo = v_, hi = v_;
        const mpfr_prec_t p = std::max<mpfr_prec_t>(v_.prec(), 192);
        for (int l = level_; l < target; ++l) {
            if (lo.sgn() <= 0)
                throw InvalidInput("tower: cannot compare non-positive "
                                   "value at a higher level");
            lo = Real::log2(lo, p, MPFR_RNDD);
            hi = Real::log2(hi, p, MPFR_RNDU);
        }
        return {std::move(lo), std::move(hi)};
    }

    int level_;
    RoundDir dir_;
    Real v_;
};

namespace detail {

inline RoundDir common_dir(const TowerReal& a, const TowerReal& b) {
    if (a.dir() != b.dir())
        throw InvalidInput("tower: mixed rounding directions");
    return a.dir();
}

} // namespace detail

/**
 * Compare the represented numbers (direction tags ignored).  Values whose
 * enclosures overlap after lifting to a common level compare equal; exact
 * dyadic relationships (e.g. 1024 at level 0 vs 10 at level 1) stay exact
 * because log₂ of a power of two rounds to nothing.
 */
inline int tower_cmp(const TowerReal& a, const TowerReal& b) {
    const int sa = a.level() == 0 ? a.stored().sgn() : 1;
    const int sb = b.level() == 0 ? b.stored().sgn() : 1;
    if (sa <= 0 || sb <= 0) {  // only level 0 can be ≤ 0; compare directly
        if (sa <= 0 && sb <= 0) return Real::cmp(a.stored(), b.stored());
        return sa <= 0 ? -1 : 1;
    }
    const int L = std::max(a.level(), b.level());
    auto [alo, ahi] = a.lift_interval(L);
    auto [blo, bhi] = b.lift_interval(L);
    if (Real::cmp(ahi, blo) < 0) return -1;
    if (Real::cmp(bhi, alo) < 0) return 1;
    return 0;
}

inline TowerReal tower_mul(const TowerReal& a, const TowerReal& b) {
    const RoundDir dir = detail::common_dir(a, b);
    const mpfr_rnd_t r = rnd_of(dir);
    const mpfr_prec_t p = std::max(a.prec(), b.prec());
    const int L = std::max(a.level(), b.level());
    auto lift = [&](const TowerReal& t) {
        auto iv = t.lift_interval(L);
        return dir == RoundDir::Up ? iv.second : iv.first;
    };
    const Real va = lift(a), vb = lift(b);
    TowerReal out;
    out.dir_ = dir;
    out.level_ = L;
    switch (L) {
        case 0:  // x·y
            out.v_ = Real::mul(va, vb, p, r);
            break;
        case 1:  // log₂(xy) = log₂x + log₂y
            out.v_ = Real::add(va, vb, p, r);
            break;
        default: {  // log₂(log₂x + log₂y); exp2 over/underflow saturates
                    // to ±inf or the largest finite value, staying directed
            const Real ea = Real::exp2(va, p, r);
            const Real eb = Real::exp2(vb, p, r);
            out.v_ = Real::log2(Real::add(ea, eb, p, r), p, r);
            break;
        }
    }
    out.normalize();
    return out;
}

/** a^e for rational e > 0. */
inline TowerReal tower_pow(const TowerReal& a, const Rat& e) {
    if (e <= 0) throw InvalidInput("tower: exponent must be positive");
    const mpfr_rnd_t r = rnd_of(a.dir());
    const mpfr_prec_t p = a.prec();
    TowerReal out = a;
    switch (a.level()) {
        case 0: {
            if (a.stored().sgn() <= 0)
                throw InvalidInput("tower: power of a non-positive value");
            out.v_ = Real::pow(a.stored(), Real::of_rat(e, p, r), p, r);
            break;
        }
        case 1:  // log₂(x^e) = e·log₂x
            out.v_ = Real::mul(a.stored(), Real::of_rat(e, p, r), p, r);
            break;
        default:  // log₂(e·log₂x) = log₂e + log₂log₂x
            out.v_ = Real::add(
                a.stored(),
                Real::log2(Real::of_rat(e, p, r), p, r), p, r);
            break;
    }
    out.normalize();
    return out;
}

/**
 * a+b.  Levels 0 and 1 are exact in direction; at level 2 the sum is
 * bracketed by max(x,y) and 2·max(x,y), i.e. one extra bit at the log₂
 * level, which is negligible at that scale.
 */
inline TowerReal tower_add(const TowerReal& a, const TowerReal& b) {
    const RoundDir dir = detail::common_dir(a, b);
    const mpfr_rnd_t r = rnd_of(dir);
    const mpfr_prec_t p = std::max(a.prec(), b.prec());
    const int L = std::max(a.level(), b.level());
    auto lift = [&](const TowerReal& t) {
        auto iv = t.lift_interval(L);
        return dir == RoundDir::Up ? iv.second : iv.first;
    };
    const Real va = lift(a), vb = lift(b);
    TowerReal out;
    out.dir_ = dir;
    out.level_ = L;
    switch (L) {
        case 0:
            out.v_ = Real::add(va, vb, p, r);
            break;
        case 1: {  // log₂(2^va + 2^vb), saturation keeps direction sound
            const Real ea = Real::exp2(va, p, r);
            const Real eb = Real::exp2(vb, p, r);
            out.v_ = Real::log2(Real::add(ea, eb, p, r), p, r);
            break;
        }
        default: {
            const Real& m = Real::max(va, vb);
            if (dir == RoundDir::Up) {
                // log₂log₂(x+y) ≤ log₂(1 + max(log₂x, log₂y))
                const Real em = Real::exp2(m, p, r);
                out.v_ = Real::log2(
                    Real::add(em, Real::of_long(1, p), p, r), p, r);
            } else {
                out.v_ = m;  // x+y ≥ max(x,y)
            }
            break;
        }
    }
    out.normalize();
    return out;
}

inline const TowerReal& tower_max(const TowerReal& a, const TowerReal& b) {
    return tower_cmp(a, b) >= 0 ? a : b;
}
inline const TowerReal& tower_min(const TowerReal& a, const TowerReal& b) {
    return tower_cmp(a, b) <= 0 ? a : b;
}

} // namespace quartica
