#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pwkb/voros.hpp"

using namespace pwkb;

TEST_CASE("Bernoulli numbers from the generating-function recurrence") {
    auto B = bernoulli_numbers(3);
    CHECK(B[0] == Rational(1, 6));    // B_2
    CHECK(B[1] == Rational(-1, 30));  // B_4
    CHECK(B[2] == Rational(1, 42));   // B_6
    CHECK(bernoulli_gf_linear_term() == Rational(-1, 2));
}

TEST_CASE("P-Voros coefficient closed form") {
    auto W = p_voros_series(7);
    CHECK(W.coef(1) == Rational(1, 24));
    CHECK(W.coef(2) == 0);
    CHECK(W.coef(3) == Rational(-7, 2880));
    CHECK(W.coef(4) == 0);
    // n = 3: -(2^-5 - 1) B_6 / 30 = (31/32)(1/42)/30
    CHECK(W.coef(5) == Rational(31, 40320));
    CHECK(W.coef(0) == 0);
}

TEST_CASE("Weber Voros coefficient and its relation to W") {
    auto wv = weber_voros_series(10);
    CHECK(wv.v_weber.coef(1) == Rational(-1, 48));
    CHECK(wv.relation_residual.is_zero());
    // flipping the sign of the relation breaks it
    auto bad = p_voros_series(10) - wv.v_weber.scaled(2);
    CHECK(!bad.is_zero());
}

TEST_CASE("difference equation: residual, RHS, uniqueness") {
    // p_voros_series solves it exactly at every truncation order up to 20
    for (int n = 1; n <= 20; ++n)
        CHECK(difference_equation_residual(p_voros_series(n), n).is_zero());
    // F = 0 leaves minus the RHS; its z^1 coefficient vanishes and the first
    // nonzero coefficient is at z^2 with value 1/24
    ZSeries zero(20);
    auto r0 = difference_equation_residual(zero, 20);
    CHECK(!r0.is_zero());
    CHECK(r0.coef(1) == 0);
    CHECK(r0.coef(2) == Rational(1, 24));
    // the coefficient-wise triangular solve reproduces W (uniqueness)
    auto F = solve_difference_equation(20);
    CHECK(F.coef(1) == Rational(1, 24));
    CHECK(F.coef(2) == 0);
    CHECK(F.coef(3) == Rational(-7, 2880));
    CHECK(F == p_voros_series(20));
    // nonzero constant term is rejected
    ZSeries c1(3);
    c1.set_coef(0, 1);
    CHECK_THROWS(difference_equation_residual(c1, 3));
}

TEST_CASE("2V - U series") {
    auto s = two_v_minus_u_series(12);
    CHECK(s == p_voros_series(12));
    CHECK(s.coef(1) == Rational(1, 24));
    // V^(0) at t = infinity carries half of 2V - U
    auto v_inf = s.scaled(Rational(1, 2));
    CHECK(v_inf.coef(1) == Rational(1, 48));
}

TEST_CASE("Stokes multiplier token tables") {
    for (auto norm : {Normalization::Infinity, Normalization::TurningPoint})
        for (auto side : {CSide::BelowPiHalf, CSide::AbovePiHalf}) {
            auto t = stokes_multiplier_table(norm, side);
            CHECK(t.s[4].is_zero());
            CHECK(t.s[4].str() == "0");
        }
    auto i = TokenExpr::imaginary_unit();
    auto two = TokenExpr::gaussian(2, 0);
    auto SP = TokenExpr::token(TokenExpr::TOK_SQRTPI);
    auto AL = TokenExpr::token(TokenExpr::TOK_ALPHA);
    auto EW = TokenExpr::token(TokenExpr::TOK_EW);
    auto s4 = -(two * SP * AL);
    CHECK(stokes_multiplier_table(Normalization::Infinity, CSide::BelowPiHalf).s[3] == s4);
    CHECK(stokes_multiplier_table(Normalization::Infinity, CSide::AbovePiHalf).s[3] == s4);
    // s_1 vanishes when e^{2 pi i c eta} = -1
    auto s1 = stokes_multiplier_table(Normalization::Infinity, CSide::BelowPiHalf).s[0];
    CHECK(s1.substituted(TokenExpr::TOK_E2, TokenExpr::gaussian(-1, 0)).is_zero());
    CHECK(!s1.is_zero());
    // tau_1 table = infinity table with alpha -> alpha e^W
    for (auto side : {CSide::BelowPiHalf, CSide::AbovePiHalf}) {
        auto inf = stokes_multiplier_table(Normalization::Infinity, side);
        auto tau = stokes_multiplier_table(Normalization::TurningPoint, side);
        for (int j = 0; j < 6; ++j)
            CHECK(tau.s[j] == inf.s[j].substituted(TokenExpr::TOK_ALPHA, AL * EW));
    }
    CHECK(stokes_multiplier_table(Normalization::Infinity, CSide::BelowPiHalf).s[3].str() ==
          "-2*alpha*sqrt(pi)");
}

TEST_CASE("connection ratio") {
    auto one = TokenExpr::one();
    auto jump = one + TokenExpr::token(TokenExpr::TOK_E2);
    CHECK(connection_ratio(Normalization::Infinity) == one);
    CHECK(connection_ratio(Normalization::TurningPoint) == jump);
    CHECK_THROWS_AS(connection_ratio(Normalization::Infinity, false), std::runtime_error);
    CHECK_THROWS_AS(connection_ratio(Normalization::TurningPoint, false), std::runtime_error);
}
