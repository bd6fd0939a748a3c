#pragma once
// Sparse multivariate polynomials over exact rationals.
//
// Variables are identified by small integer ids; an exponent vector stores one
// exponent per id with trailing zeros trimmed, so the representation does not
// depend on how many variables the ambient context has registered so far.

#include "pwkb/rational.hpp"

#include <complex>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace pwkb {

using ExpVec = std::vector<int>; // trimmed: back() != 0 unless empty

inline void expvec_trim(ExpVec& e) {
    while (!e.empty() && e.back() == 0) e.pop_back();
}

inline int expvec_get(const ExpVec& e, int var) {
    return var < (int)e.size() ? e[var] : 0;
}

inline void expvec_set(ExpVec& e, int var, int val) {
    if (var >= (int)e.size()) {
        if (val == 0) return;
        e.resize(var + 1, 0);
    }
    e[var] = val;
    expvec_trim(e);
}

class Poly {
public:
    using Terms = std::map<ExpVec, Rational>; // lex order on trimmed vectors

    Poly() = default;
    explicit Poly(const Rational& c) {
        if (c != 0) terms_[ExpVec{}] = c;
    }
    static Poly constant(const Rational& c) { return Poly(c); }
    static Poly variable(int var, int power = 1);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const; // throws unless constant
    std::size_t term_count() const { return terms_.size(); }

    void add_term(const ExpVec& e, const Rational& c);

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly scaled(const Rational& c) const;
    Poly pow(unsigned n) const;

    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    int degree_in(int var) const;
    bool depends_on(int var) const { return degree_in(var) > 0; }
    int max_var() const; // largest var id present, -1 if constant

    /// Formal partial derivative in one variable.
    Poly partial(int var) const;

    /// Coefficient of var^k, as a polynomial in the remaining variables.
    Poly coeff_of(int var, int k) const;

    /// Substitute variable -> polynomial.
    Poly substituted(int var, const Poly& value) const;

    /// content * primitive: integer-primitive part with positive leading
    /// coefficient (lex-leading), content carries sign and scale.
    std::pair<Rational, Poly> primitive() const;

    /// Exact multivariate division; nullopt when b does not divide a.
    static std::optional<Poly> exact_divide(const Poly& a, const Poly& b);

    std::complex<double> eval(const std::vector<std::complex<double>>& vals) const;

private:
    Terms terms_;
};

} // namespace pwkb
