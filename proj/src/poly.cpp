#include "pwkb/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace pwkb {

Poly Poly::variable(int var, int power) {
    Poly p;
    if (power < 0) throw std::invalid_argument("negative exponent in Poly");
    ExpVec e;
    expvec_set(e, var, power);
    p.terms_[e] = 1;
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Poly::constant_value() const {
    if (terms_.empty()) return 0;
    if (!is_constant()) throw std::domain_error("Poly::constant_value on non-constant");
    return terms_.begin()->second;
}

void Poly::add_term(const ExpVec& e, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly r;
    for (auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    for (auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    if (a.is_zero() || b.is_zero()) return r;
    ExpVec e;
    for (auto& [ea, ca] : a.terms_) {
        for (auto& [eb, cb] : b.terms_) {
            e.assign(std::max(ea.size(), eb.size()), 0);
            for (std::size_t i = 0; i < ea.size(); ++i) e[i] = ea[i];
            for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
            expvec_trim(e);
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Poly Poly::scaled(const Rational& c) const {
    Poly r;
    if (c == 0) return r;
    for (auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
    return r;
}

Poly Poly::pow(unsigned n) const {
    Poly r = Poly::constant(1);
    Poly base = *this;
    while (n) {
        if (n & 1u) r = r * base;
        base = base * base;
        n >>= 1u;
    }
    return r;
}

int Poly::degree_in(int var) const {
    int d = 0;
    for (auto& [e, c] : terms_) d = std::max(d, expvec_get(e, var));
    return d;
}

int Poly::max_var() const {
    int m = -1;
    for (auto& [e, c] : terms_) m = std::max(m, (int)e.size() - 1);
    return m;
}

Poly Poly::partial(int var) const {
    Poly r;
    for (auto& [e, c] : terms_) {
        int k = expvec_get(e, var);
        if (k == 0) continue;
        ExpVec e2 = e;
        expvec_set(e2, var, k - 1);
        r.add_term(e2, c * Rational((long)k));
    }
    return r;
}

Poly Poly::coeff_of(int var, int k) const {
    Poly r;
    for (auto& [e, c] : terms_) {
        if (expvec_get(e, var) != k) continue;
        ExpVec e2 = e;
        expvec_set(e2, var, 0);
        r.add_term(e2, c);
    }
    return r;
}

Poly Poly::substituted(int var, const Poly& value) const {
    Poly r;
    int dmax = degree_in(var);
    // Horner over the powers of `var`.
    std::vector<Poly> coeffs(dmax + 1);
    for (int k = 0; k <= dmax; ++k) coeffs[k] = coeff_of(var, k);
    r = coeffs[dmax];
    for (int k = dmax - 1; k >= 0; --k) r = r * value + coeffs[k];
    return r;
}

std::pair<Rational, Poly> Poly::primitive() const {
    if (terms_.empty()) return {Rational(0), Poly()};
    // lcm of denominators, gcd of numerators
    mpz_class den_lcm = 1, num_gcd = 0;
    for (auto& [e, c] : terms_) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    }
    Rational scale = Rational(den_lcm) / Rational(num_gcd);
    // sign: make the lex-leading coefficient positive
    const Rational& lead = terms_.rbegin()->second;
    if (lead < 0) scale = -scale;
    Poly prim = scaled(scale);
    return {Rational(1) / scale, prim};
}

std::optional<Poly> Poly::exact_divide(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    Poly q;
    Poly r = a;
    auto blead = *b.terms_.rbegin();
    while (!r.is_zero()) {
        auto rlead = *r.terms_.rbegin();
        // divisibility of leading monomials
        ExpVec qe(std::max(rlead.first.size(), blead.first.size()), 0);
        bool ok = true;
        for (std::size_t i = 0; i < qe.size(); ++i) {
            int d = (i < rlead.first.size() ? rlead.first[i] : 0) -
                    (i < blead.first.size() ? blead.first[i] : 0);
            if (d < 0) { ok = false; break; }
            qe[i] = d;
        }
        if (!ok) return std::nullopt;
        expvec_trim(qe);
        Rational qc = rlead.second / blead.second;
        q.add_term(qe, qc);
        // r -= qc * x^qe * b, without building a temporary Poly
        ExpVec e;
        for (auto& [eb, cb] : b.terms_) {
            e.assign(std::max(qe.size(), eb.size()), 0);
            for (std::size_t i = 0; i < qe.size(); ++i) e[i] = qe[i];
            for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
            expvec_trim(e);
            r.add_term(e, -(qc * cb));
        }
    }
    return q;
}

std::complex<double> Poly::eval(const std::vector<std::complex<double>>& vals) const {
    std::complex<double> acc = 0.0;
    for (auto& [e, c] : terms_) {
        std::complex<double> term = rat_to_double(c);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (i >= vals.size()) throw std::out_of_range("Poly::eval missing variable value");
            std::complex<double> p = 1.0;
            std::complex<double> base = vals[i];
            int n = e[i];
            while (n) {
                if (n & 1) p *= base;
                base *= base;
                n >>= 1;
            }
            term *= p;
        }
        acc += term;
    }
    return acc;
}

} // namespace pwkb
