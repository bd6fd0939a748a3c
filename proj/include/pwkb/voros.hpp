#pragma once
// Exact closed-form series and token algebra around the P-Voros coefficient:
// Bernoulli numbers, W(c,eta) = -sum (2^{1-2n}-1)/(2n(2n-1)) B_{2n} (c eta)^{1-2n},
// the Weber Voros coefficient and its relation to W, the formal difference
// equation in z = (c eta)^{-1} with its coefficient-wise (unique) solution,
// 2V - U, and the Stokes-multiplier token tables of SL_II around x = infinity
// together with the connection-ratio derivation alpha~ / alpha.

#include "pwkb/pii.hpp"

#include <array>

namespace pwkb {

/// Exact truncated power series in z = (c eta)^{-1}.
class ZSeries {
public:
    ZSeries() = default;
    explicit ZSeries(int n_max) : c_((std::size_t)n_max + 1, Rational(0)) {
        if (n_max < 0) throw std::invalid_argument("negative truncation order");
    }

    int n_max() const { return (int)c_.size() - 1; }
    const Rational& coef(int n) const;
    void set_coef(int n, const Rational& v);

    ZSeries truncated(int n_max) const;
    bool is_zero() const;

    ZSeries operator-() const;
    friend ZSeries operator+(const ZSeries& a, const ZSeries& b); // min truncation
    friend ZSeries operator-(const ZSeries& a, const ZSeries& b);
    friend ZSeries operator*(const ZSeries& a, const ZSeries& b);
    ZSeries scaled(const Rational& r) const;
    bool operator==(const ZSeries& o) const { return c_ == o.c_; }

    /// Composition with z -> z/(1-z), i.e. the shift c eta -> c eta - 1;
    /// truncation-consistent (the substitution is order-preserving).
    ZSeries shifted_argument() const;

    nlohmann::json serialize() const; // rational strings, index = power of z

private:
    std::vector<Rational> c_;
};

/// B_2, B_4, ..., B_{2 n_max} from the generating-function recurrence
/// w/(e^w - 1) = sum_n B_n w^n / n!.
std::vector<Rational> bernoulli_numbers(int n_max);

/// Coefficient of w^1 in w/(e^w - 1) (the B_1 term), equal to -1/2.
Rational bernoulli_gf_linear_term();

/// W_n = -(2^{1-2n}-1) B_{2n} / (2n(2n-1)) at z^{2n-1}; even powers vanish.
ZSeries p_voros_series(int n_max);

struct WeberVoros {
    ZSeries v_weber;           // coefficients of (i E eta)^{-n}
    ZSeries relation_residual; // W + 2 V_Weber(-ic, eta), expressed in z
};
/// V_Weber(E,eta) = (1/2) sum (2^{1-2n}-1)/(2n(2n-1)) B_{2n} (i E eta)^{1-2n};
/// substituting E = -ic makes (i E eta)^{-1} = z exactly, and the relation
/// W = -2 V_Weber(-ic, eta) becomes an identity of ZSeries.
WeberVoros weber_voros_series(int n_max);

/// The exact expansion of -1 - (1/z) log(1-z) - log((2-z)/(2(1-z))), the
/// right-hand side of the difference equation F(z) - F(z/(1-z)) = RHS.
ZSeries difference_equation_rhs(int n_max);

/// F(z) - F(z/(1-z)) - RHS, truncated at n_max; zero iff F solves the
/// difference equation.  F must have zero constant term.
ZSeries difference_equation_residual(const ZSeries& F, int n_max);

/// Coefficient-wise triangular solve of the difference equation (the unique
/// power-series solution with zero constant term); reproduces p_voros_series.
ZSeries solve_difference_equation(int n_max);

/// 2V - U as a ZSeries: identical to W term by term (the two closed forms
/// assert the same series); exposed separately for independent numeric checks.
ZSeries two_v_minus_u_series(int n_max);

// ------------------------------------------------------------ token algebra

/// Gaussian rational a + b i.
struct GaussianRational {
    Rational re = 0, im = 0;
    bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
};

/// Laurent polynomial over Q[i] in the commuting formal tokens
///   E2 = e^{2 pi i c eta},  X = e^{2V-U},  EW = e^{W},  alpha,  sqrt(pi).
class TokenExpr {
public:
    enum Token { TOK_E2 = 0, TOK_X, TOK_EW, TOK_ALPHA, TOK_SQRTPI, NUM_TOKENS };
    using Exps = std::array<int, NUM_TOKENS>;

    TokenExpr() = default;
    static TokenExpr zero() { return TokenExpr(); }
    static TokenExpr one();
    static TokenExpr gaussian(const Rational& re, const Rational& im);
    static TokenExpr imaginary_unit() { return gaussian(0, 1); }
    static TokenExpr token(Token t, int power = 1);

    bool is_zero() const { return terms_.empty(); }
    bool operator==(const TokenExpr& o) const { return terms_ == o.terms_; }

    TokenExpr operator-() const;
    friend TokenExpr operator+(const TokenExpr& a, const TokenExpr& b);
    friend TokenExpr operator-(const TokenExpr& a, const TokenExpr& b);
    friend TokenExpr operator*(const TokenExpr& a, const TokenExpr& b);
    TokenExpr& operator+=(const TokenExpr& o) { return *this = *this + o; }
    TokenExpr& operator-=(const TokenExpr& o) { return *this = *this - o; }

    /// Substitute token -> expression (token exponents must be >= 0).
    TokenExpr substituted(Token t, const TokenExpr& value) const;

    /// Exact division; nullopt when the quotient is not a token-Laurent
    /// polynomial with Gaussian-rational coefficients.
    static std::optional<TokenExpr> divide_exact(const TokenExpr& a, const TokenExpr& b);

    /// Readable rendering, e.g. "i*(1 + e^(2*pi*i*c*eta))*e^(-(2V-U))".
    std::string str() const;

    const std::map<Exps, GaussianRational>& terms() const { return terms_; }
    void add_term(const Exps& e, const GaussianRational& c);

private:
    std::map<Exps, GaussianRational> terms_;
};

/// Side of the degeneration ray: arg c = pi/2 - eps or pi/2 + eps.
enum class CSide { BelowPiHalf, AbovePiHalf };

/// The six Stokes multipliers of SL_II around x = infinity as token
/// expressions; norm selects which 1-parameter normalization is substituted
/// into the coefficients (Normalization::Infinity or ::TurningPoint = tau_1).
struct MultiplierTable {
    Normalization norm = Normalization::Infinity;
    CSide side = CSide::BelowPiHalf;
    std::array<TokenExpr, 6> s; // s[j-1] holds the multiplier s_j
};
MultiplierTable stokes_multiplier_table(Normalization norm, CSide side);

/// alpha~ / alpha obtained by equating Borel sums S[s_j(alpha)] =
/// S[s'_j(alpha~)] across j = 1..6 under the jump rule
/// S_-[e^{2V-U}] = (1 + e^{2 pi i c eta}) S_+[e^{2V-U}] (and the same for
/// e^W); throws std::runtime_error when the six equations are inconsistent
/// (exercised by disabling the jump rule).
TokenExpr connection_ratio(Normalization norm, bool with_jump_rule = true);

} // namespace pwkb
