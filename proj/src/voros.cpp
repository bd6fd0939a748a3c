#include "pwkb/voros.hpp"

#include <sstream>
#include <stdexcept>

namespace pwkb {

// ---------------------------------------------------------------- ZSeries

const Rational& ZSeries::coef(int n) const {
    if (n < 0 || n > n_max()) throw std::out_of_range("ZSeries coefficient out of range");
    return c_[(std::size_t)n];
}

void ZSeries::set_coef(int n, const Rational& v) {
    if (n < 0 || n > n_max()) throw std::out_of_range("ZSeries coefficient out of range");
    c_[(std::size_t)n] = v;
}

ZSeries ZSeries::truncated(int n_max) const {
    ZSeries r(std::min(n_max, this->n_max()));
    for (int n = 0; n <= r.n_max(); ++n) r.c_[(std::size_t)n] = c_[(std::size_t)n];
    return r;
}

bool ZSeries::is_zero() const {
    for (auto& v : c_)
        if (v != 0) return false;
    return true;
}

ZSeries ZSeries::operator-() const {
    ZSeries r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

ZSeries operator+(const ZSeries& a, const ZSeries& b) {
    ZSeries r(std::min(a.n_max(), b.n_max()));
    for (int n = 0; n <= r.n_max(); ++n) r.c_[(std::size_t)n] = a.coef(n) + b.coef(n);
    return r;
}

ZSeries operator-(const ZSeries& a, const ZSeries& b) { return a + (-b); }

ZSeries operator*(const ZSeries& a, const ZSeries& b) {
    ZSeries r(std::min(a.n_max(), b.n_max()));
    for (int n = 0; n <= r.n_max(); ++n) {
        Rational acc = 0;
        for (int i = 0; i <= n; ++i) acc += a.coef(i) * b.coef(n - i);
        r.c_[(std::size_t)n] = acc;
    }
    return r;
}

ZSeries ZSeries::scaled(const Rational& r) const {
    ZSeries out = *this;
    for (auto& v : out.c_) v *= r;
    return out;
}

ZSeries ZSeries::shifted_argument() const {
    // (z/(1-z))^n = sum_{m >= n} C(m-1, n-1) z^m
    ZSeries r(n_max());
    r.c_[0] = c_[0];
    for (int m = 1; m <= n_max(); ++m) {
        Rational acc = 0;
        for (int n = 1; n <= m; ++n)
            acc += rat_binomial((unsigned)(m - 1), (unsigned)(n - 1)) * c_[(std::size_t)n];
        r.c_[(std::size_t)m] = acc;
    }
    return r;
}

nlohmann::json ZSeries::serialize() const {
    nlohmann::json arr = nlohmann::json::array();
    for (auto& v : c_) arr.push_back(rat_to_string(v));
    return arr;
}

// ------------------------------------------------------- Bernoulli numbers

namespace {

// B_0 .. B_top from sum_{j=0}^{m-1} C(m+1, j) B_j = 0 (m >= 1), B_0 = 1.
std::vector<Rational> bernoulli_all(int top) {
    std::vector<Rational> B((std::size_t)top + 1, Rational(0));
    B[0] = 1;
    for (int m = 1; m <= top; ++m) {
        Rational acc = 0;
        for (int j = 0; j < m; ++j) acc += rat_binomial((unsigned)(m + 1), (unsigned)j) * B[(std::size_t)j];
        B[(std::size_t)m] = -acc / Rational((long)(m + 1));
    }
    return B;
}

} // namespace

std::vector<Rational> bernoulli_numbers(int n_max) {
    if (n_max < 1) throw std::invalid_argument("bernoulli_numbers requires n_max >= 1");
    auto B = bernoulli_all(2 * n_max);
    std::vector<Rational> out;
    for (int n = 1; n <= n_max; ++n) out.push_back(B[(std::size_t)(2 * n)]);
    return out;
}

Rational bernoulli_gf_linear_term() { return bernoulli_all(1)[1]; }

// ------------------------------------------------------------ the series

ZSeries p_voros_series(int n_max) {
    if (n_max < 1) throw std::invalid_argument("p_voros_series requires n_max >= 1");
    ZSeries W(n_max);
    int nb = (n_max + 1) / 2;
    if (nb < 1) return W;
    auto B = bernoulli_numbers(nb);
    for (int n = 1; 2 * n - 1 <= n_max; ++n) {
        // -(2^{1-2n} - 1) B_{2n} / (2n (2n-1))
        Rational pow2 = 1;
        for (int k = 0; k < 2 * n - 1; ++k) pow2 /= 2;
        Rational coef = -(pow2 - 1) * B[(std::size_t)(n - 1)] /
                        Rational((long)(2 * n) * (long)(2 * n - 1));
        W.set_coef(2 * n - 1, coef);
    }
    return W;
}

WeberVoros weber_voros_series(int n_max) {
    WeberVoros out;
    auto W = p_voros_series(n_max);
    // V_Weber carries +1/2 of the same closed form, in powers of (i E eta)^{-1}
    out.v_weber = W.scaled(Rational(-1, 2));
    // E = -ic makes (i E eta)^{-1} = (c eta)^{-1} = z, so the relation
    // W = -2 V_Weber(-ic, eta) is coefficient-wise
    out.relation_residual = W + out.v_weber.scaled(2);
    return out;
}

ZSeries difference_equation_rhs(int n_max) {
    // -1 - (1/z) log(1-z) - log((2-z)/(2(1-z)))
    //   = sum_{k>=1} z^k [ 1/(k+1) - (1 - 2^{-k})/k ]
    // from log(1-z) = -sum z^k/k and log((2-z)/(2(1-z))) = log(1-z/2) - log(1-z).
    ZSeries r(n_max);
    Rational half_pow = 1;
    for (int k = 1; k <= n_max; ++k) {
        half_pow /= 2;
        r.set_coef(k, Rational(1, (long)(k + 1)) - (1 - half_pow) / Rational((long)k));
    }
    return r;
}

ZSeries difference_equation_residual(const ZSeries& F, int n_max) {
    if (F.coef(0) != 0)
        throw std::invalid_argument("difference equation requires zero constant term");
    auto Ft = F.truncated(n_max);
    return (Ft - Ft.shifted_argument() - difference_equation_rhs(n_max)).truncated(n_max);
}

ZSeries solve_difference_equation(int n_max) {
    // order-m coefficient of F(z) - F(z/(1-z)) is -sum_{n<=m-1} C(m-1,n-1) F_n,
    // so F_{m-1} is determined triangularly from RHS_m
    auto rhs = difference_equation_rhs(n_max + 1);
    ZSeries F(n_max);
    for (int m = 2; m <= n_max + 1; ++m) {
        Rational acc = rhs.coef(m);
        for (int n = 1; n <= m - 2; ++n)
            acc += rat_binomial((unsigned)(m - 1), (unsigned)(n - 1)) * F.coef(n);
        F.set_coef(m - 1, -acc / Rational((long)(m - 1)));
    }
    return F;
}

ZSeries two_v_minus_u_series(int n_max) { return p_voros_series(n_max); }

// ----------------------------------------------------------- TokenExpr

namespace {

GaussianRational gmul(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

GaussianRational gdiv(const GaussianRational& a, const GaussianRational& b) {
    Rational n2 = b.re * b.re + b.im * b.im;
    if (n2 == 0) throw std::domain_error("division by zero Gaussian rational");
    return {(a.re * b.re + a.im * b.im) / n2, (a.im * b.re - a.re * b.im) / n2};
}

} // namespace

TokenExpr TokenExpr::one() { return gaussian(1, 0); }

TokenExpr TokenExpr::gaussian(const Rational& re, const Rational& im) {
    TokenExpr e;
    e.add_term(Exps{}, GaussianRational{re, im});
    return e;
}

TokenExpr TokenExpr::token(Token t, int power) {
    TokenExpr e;
    Exps x{};
    x[(std::size_t)t] = power;
    e.add_term(x, GaussianRational{1, 0});
    return e;
}

void TokenExpr::add_term(const Exps& e, const GaussianRational& c) {
    if (c.re == 0 && c.im == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second.re += c.re;
        it->second.im += c.im;
        if (it->second.re == 0 && it->second.im == 0) terms_.erase(it);
    }
}

TokenExpr TokenExpr::operator-() const {
    TokenExpr r;
    for (auto& [e, c] : terms_) r.terms_.emplace(e, GaussianRational{-c.re, -c.im});
    return r;
}

TokenExpr operator+(const TokenExpr& a, const TokenExpr& b) {
    TokenExpr r = a;
    for (auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
}

TokenExpr operator-(const TokenExpr& a, const TokenExpr& b) { return a + (-b); }

TokenExpr operator*(const TokenExpr& a, const TokenExpr& b) {
    TokenExpr r;
    for (auto& [ea, ca] : a.terms_)
        for (auto& [eb, cb] : b.terms_) {
            TokenExpr::Exps e;
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, gmul(ca, cb));
        }
    return r;
}

TokenExpr TokenExpr::substituted(Token t, const TokenExpr& value) const {
    TokenExpr r;
    for (auto& [e, c] : terms_) {
        int p = e[(std::size_t)t];
        if (p < 0)
            throw std::domain_error("token substitution requires nonnegative exponents");
        Exps rest = e;
        rest[(std::size_t)t] = 0;
        TokenExpr term;
        term.add_term(rest, c);
        for (int i = 0; i < p; ++i) term = term * value;
        r += term;
    }
    return r;
}

std::optional<TokenExpr> TokenExpr::divide_exact(const TokenExpr& a, const TokenExpr& b) {
    if (b.is_zero()) throw std::domain_error("division by zero token expression");
    TokenExpr q, r = a;
    auto blead = *b.terms_.rbegin();
    std::size_t steps = 0, limit = a.terms_.size() * b.terms_.size() + 16;
    while (!r.is_zero()) {
        if (++steps > limit) return std::nullopt;
        auto rlead = *r.terms_.rbegin();
        Exps qe;
        for (std::size_t i = 0; i < qe.size(); ++i) qe[i] = rlead.first[i] - blead.first[i];
        GaussianRational qc = gdiv(rlead.second, blead.second);
        TokenExpr qt;
        qt.add_term(qe, qc);
        q += qt;
        r -= qt * b;
    }
    return q;
}

std::string TokenExpr::str() const {
    if (terms_.empty()) return "0";
    static const char* names[NUM_TOKENS] = {"e^(2*pi*i*c*eta)", "e^(2V-U)", "e^W", "alpha",
                                            "sqrt(pi)"};
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        auto& [e, c] = *it;
        if (!first) os << " + ";
        first = false;
        std::string cs;
        if (c.im == 0)
            cs = rat_to_string(c.re);
        else if (c.re == 0)
            cs = (c.im == 1 ? "i" : c.im == -1 ? "-i" : rat_to_string(c.im) + "*i");
        else
            cs = "(" + rat_to_string(c.re) + (c.im > 0 ? "+" : "") + rat_to_string(c.im) + "*i)";
        os << cs;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            os << "*" << names[i];
            if (e[i] != 1) os << "^" << e[i];
        }
    }
    return os.str();
}

// ------------------------------------------------- Stokes multiplier lists

MultiplierTable stokes_multiplier_table(Normalization norm, CSide side) {
    auto i = TokenExpr::imaginary_unit();
    auto one = TokenExpr::one();
    auto E2 = TokenExpr::token(TokenExpr::TOK_E2);
    auto iE2 = TokenExpr::token(TokenExpr::TOK_E2, -1); // e^{-2 pi i c eta}
    auto X = TokenExpr::token(TokenExpr::TOK_X);        // e^{2V-U}
    auto Xi = TokenExpr::token(TokenExpr::TOK_X, -1);   // e^{U-2V}
    auto EW = TokenExpr::token(TokenExpr::TOK_EW);
    auto AL = TokenExpr::token(TokenExpr::TOK_ALPHA);
    auto SP = TokenExpr::token(TokenExpr::TOK_SQRTPI);
    auto two = TokenExpr::gaussian(2, 0);
    auto jump = one + E2; // 1 + e^{2 pi i c eta}

    MultiplierTable t;
    t.norm = norm;
    t.side = side;
    // the alpha of the tau_1-normalized lists enters through alpha e^W
    auto a = norm == Normalization::Infinity ? AL : AL * EW;
    if (side == CSide::BelowPiHalf) {
        t.s[0] = i * jump * Xi;
        t.s[1] = i * iE2 * X;
        t.s[2] = i * jump * iE2 * Xi;
        t.s[3] = -(two * SP * a);
        t.s[4] = TokenExpr::zero();
        t.s[5] = two * SP * a + i * X;
    } else {
        t.s[0] = i * Xi;
        t.s[1] = i * jump * iE2 * X;
        t.s[2] = i * iE2 * Xi;
        t.s[3] = -(two * SP * a);
        t.s[4] = TokenExpr::zero();
        t.s[5] = two * SP * a + i * jump * X;
    }
    return t;
}

TokenExpr connection_ratio(Normalization norm, bool with_jump_rule) {
    auto below = stokes_multiplier_table(norm, CSide::BelowPiHalf);
    auto above = stokes_multiplier_table(norm, CSide::AbovePiHalf);
    auto one = TokenExpr::one();
    auto jump = one + TokenExpr::token(TokenExpr::TOK_E2);

    auto pow_jump = [&](int n) {
        TokenExpr r = one;
        for (int i = 0; i < n; ++i) r = r * jump;
        return r;
    };
    // split into the alpha-free part and the coefficient of alpha
    auto split = [&](const TokenExpr& e, TokenExpr& no_alpha, TokenExpr& alpha_coef) {
        no_alpha = TokenExpr::zero();
        alpha_coef = TokenExpr::zero();
        for (auto& [exps, c] : e.terms()) {
            auto rest = exps;
            int p = rest[TokenExpr::TOK_ALPHA];
            rest[TokenExpr::TOK_ALPHA] = 0;
            TokenExpr t;
            t.add_term(rest, c);
            if (p == 0)
                no_alpha += t;
            else if (p == 1)
                alpha_coef += t;
            else
                throw std::runtime_error("multiplier entries must be linear in alpha");
        }
    };

    std::optional<TokenExpr> ratio;
    for (int j = 0; j < 6; ++j) {
        // the Borel sums on arg c = pi/2 - eps are rewritten in terms of the
        // pi/2 + eps sums: each factor e^{2V-U} and e^W jumps by (1+e^{2 pi i c eta});
        // both sides are cleared by (1+e^{2 pi i c eta})^m to stay polynomial
        int m = 0;
        for (auto& [exps, c] : below.s[j].terms())
            m = std::max(m, -(exps[TokenExpr::TOK_X] + exps[TokenExpr::TOK_EW]));
        TokenExpr lhs;
        for (auto& [exps, c] : below.s[j].terms()) {
            TokenExpr t;
            t.add_term(exps, c);
            int k = with_jump_rule ? exps[TokenExpr::TOK_X] + exps[TokenExpr::TOK_EW] + m : m;
            lhs += t * pow_jump(k);
        }
        TokenExpr rhs = above.s[j] * pow_jump(m);
        TokenExpr lA, lB, rA, rB;
        split(lhs, lA, lB);
        split(rhs, rA, rB);
        if (!(lA == rA))
            throw std::runtime_error("inconsistent Stokes multiplier system at j = " +
                                     std::to_string(j + 1));
        if (lB.is_zero() && rB.is_zero()) continue;
        auto q = TokenExpr::divide_exact(lB, rB);
        if (!q)
            throw std::runtime_error("inconsistent Stokes multiplier system at j = " +
                                     std::to_string(j + 1));
        if (ratio && !(*ratio == *q))
            throw std::runtime_error("connection ratio differs between multipliers");
        ratio = *q;
    }
    if (!ratio) throw std::runtime_error("no alpha-dependent multiplier found");
    return *ratio;
}

} // namespace pwkb
