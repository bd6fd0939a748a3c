#pragma once
// Exact rational scalars (GMP-backed) plus the handful of combinatorial
// helpers the series recursions need.

#include <gmpxx.h>
#include <complex>
#include <stdexcept>
#include <string>

namespace pwkb {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parse "p", "p/q" (arbitrary precision, base 10).
inline Rational rat_from_string(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

inline std::string rat_to_string(const Rational& r) { return r.get_str(); }

inline double rat_to_double(const Rational& r) { return r.get_d(); }

/// Factorial as an exact rational.
inline Rational rat_factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

/// Integer binomial coefficient.
inline Rational rat_binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rational(b);
}

/// Generalized binomial coefficient C(a, m) for rational a.
inline Rational rat_binomial_gen(const Rational& a, unsigned m) {
    Rational acc = 1;
    for (unsigned i = 0; i < m; ++i) acc *= (a - Rational((long)i)) / Rational((long)(i + 1));
    return acc;
}

} // namespace pwkb
