#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "quartica/errors.hpp"
#include "quartica/rational.hpp"

namespace quartica {

/** Exponent 4-tuple (w, x, y, z) of a monomial. */
using Mono = std::array<int, 4>;

inline int mono_degree(const Mono& m) { return m[0] + m[1] + m[2] + m[3]; }

inline Mono mono_mul(const Mono& a, const Mono& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

/**
 * Term order used everywhere: graded-lex, descending, with w > x > y > z.
 * "a precedes b" when a has higher degree, or equal degree and a is
 * lexicographically larger.  monomial_basis() lists monomials in exactly
 * this order, and QPoly iterates its terms in it, so serialization and the
 * dense vectorizations at linear-algebra boundaries are all deterministic.
 */
struct MonoOrder {
    bool operator()(const Mono& a, const Mono& b) const {
        const int da = mono_degree(a), db = mono_degree(b);
        if (da != db) return da > db;
        return a > b;  // lexicographic on (e_w, e_x, e_y, e_z), descending
    }
};

inline long basis_size(int d) {
    // dim of the degree-d slice of C[w,x,y,z]
    return binomial(d + 3, 3).get_si();
}

/** All degree-d monomials, in the canonical order above. */
inline std::vector<Mono> monomial_basis(int d) {
    if (d < 0) throw InvalidInput("monomial_basis: negative degree");
    std::vector<Mono> out;
    out.reserve(static_cast<size_t>(basis_size(d)));
    for (int ew = d; ew >= 0; --ew)
        for (int ex = d - ew; ex >= 0; --ex)
            for (int ey = d - ew - ex; ey >= 0; --ey)
                out.push_back(Mono{ew, ex, ey, d - ew - ex - ey});
    return out;
}

/**
 * Homogeneous polynomial in w,x,y,z with exact rational coefficients.
 *
 * The degree of the slice is part of the value even when the polynomial is
 * zero (the zero of R_d remembers d), so derivative/division bookkeeping
 * stays honest.  Stored sparsely in canonical form: no zero coefficients.
 */
class QPoly {
public:
    using TermMap = std::map<Mono, Rat, MonoOrder>;

    QPoly() : deg_(0) {}
    explicit QPoly(int degree) : deg_(degree) {
        if (degree < 0) throw InvalidInput("QPoly: negative degree");
    }

    static QPoly monomial(const Mono& m, const Rat& c) {
        QPoly p(mono_degree(m));
        if (c != 0) p.terms_[m] = c;
        return p;
    }
    static QPoly constant(const Rat& c) { return monomial({0, 0, 0, 0}, c); }

    int degree() const { return deg_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

    Rat coeff(const Mono& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    void set_coeff(const Mono& m, const Rat& c) {
        if (mono_degree(m) != deg_)
            throw DegreeMismatch("set_coeff: monomial degree != slice degree");
        if (c == 0) terms_.erase(m);
        else terms_[m] = c;
    }

    void add_coeff(const Mono& m, const Rat& c) {
        if (mono_degree(m) != deg_)
            throw DegreeMismatch("add_coeff: monomial degree != slice degree");
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (c != 0) terms_[m] = c;
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    QPoly& operator+=(const QPoly& o) {
        require_same_slice(o, "+");
        for (const auto& [m, c] : o.terms_) add_coeff(m, c);
        return *this;
    }
    QPoly& operator-=(const QPoly& o) {
        require_same_slice(o, "-");
        for (const auto& [m, c] : o.terms_) add_coeff(m, -c);
        return *this;
    }
    friend QPoly operator+(QPoly a, const QPoly& b) { a += b; return a; }
    friend QPoly operator-(QPoly a, const QPoly& b) { a -= b; return a; }

    QPoly& operator*=(const Rat& s) {
        if (s == 0) { terms_.clear(); return *this; }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    friend QPoly operator*(QPoly a, const Rat& s) { a *= s; return a; }
    friend QPoly operator*(const Rat& s, QPoly a) { a *= s; return a; }

    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        QPoly r(a.deg_ + b.deg_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                r.add_coeff(mono_mul(ma, mb), ca * cb);
        return r;
    }

    bool operator==(const QPoly& o) const {
        return deg_ == o.deg_ && terms_ == o.terms_;
    }

    /** Multiply by a single monomial (degree shifts accordingly). */
    QPoly shifted(const Mono& m) const {
        QPoly r(deg_ + mono_degree(m));
        for (const auto& [mm, c] : terms_) r.terms_[mono_mul(mm, m)] = c;
        return r;
    }

    /** Exact partial derivative with respect to variable i (0..3). */
    QPoly partial(int i) const {
        if (i < 0 || i > 3) throw InvalidInput("partial: variable index");
        if (deg_ == 0) throw DegreeUnderflow("partial of a degree-0 form");
        QPoly r(deg_ - 1);
        for (const auto& [m, c] : terms_) {
            if (m[i] == 0) continue;
            Mono n = m;
            n[i] -= 1;
            r.add_coeff(n, c * m[i]);
        }
        return r;
    }

    /** Sum of absolute values of the coefficients, exact. */
    Rat one_norm() const {
        Rat s(0);
        for (const auto& [m, c] : terms_) s += rat_abs(c);
        return s;
    }

    /**
     * Write a = w·a0 + x·a1 + y·a2 + z·a3 with disjoint monomial support:
     * each monomial goes to the lowest-index variable it contains.
     * Norms add up: sum of one_norm(a_i) equals one_norm(a).
     */
    std::array<QPoly, 4> split_by_variable() const {
        if (deg_ == 0) throw DegreeUnderflow("split of a degree-0 form");
        std::array<QPoly, 4> out{QPoly(deg_ - 1), QPoly(deg_ - 1),
                                 QPoly(deg_ - 1), QPoly(deg_ - 1)};
        for (const auto& [m, c] : terms_) {
            int i = 0;
            while (m[i] == 0) ++i;  // degree ≥ 1, so some exponent is positive
            Mono n = m;
            n[i] -= 1;
            out[i].terms_[n] = c;
        }
        return out;
    }

    /** Coefficients against an explicit basis (zeros included). */
    std::vector<Rat> dense_coeffs(const std::vector<Mono>& basis) const {
        std::vector<Rat> v(basis.size(), Rat(0));
        std::map<Mono, size_t, MonoOrder> idx;
        for (size_t i = 0; i < basis.size(); ++i) idx[basis[i]] = i;
        for (const auto& [m, c] : terms_) {
            auto it = idx.find(m);
            if (it == idx.end())
                throw DegreeMismatch("dense_coeffs: monomial not in basis");
            v[it->second] = c;
        }
        return v;
    }

private:
    void require_same_slice(const QPoly& o, const char* op) const {
        // adding into the zero of another slice is a bookkeeping bug
        if (deg_ != o.deg_)
            throw DegreeMismatch(std::string("QPoly ") + op +
                                 ": mixed graded slices");
    }

    int deg_;
    TermMap terms_;
};

} // namespace quartica
