#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pwkb/sl2.hpp"

using namespace pwkb;

namespace {
AlgebraicScalar q0_closed_form(const ContextPtr& ctx) {
    // (x - lam0)^2 (x^2 + 2 lam0 x + 3 lam0^2 + t)
    auto xml = ctx->x() - ctx->lam0();
    auto qs = ctx->s() * ctx->s();
    return xml * xml * qs;
}
} // namespace

TEST_CASE("Q potential: leading coefficients and homogeneity") {
    auto ctx = make_context();
    auto sol = one_param_solution(ctx, 2, 4);
    auto Q = q_potential_series(sol.lambda, sol.nu);
    CHECK((Q.sector(0).coef(0) - q0_closed_form(ctx)).is_zero());
    // nu^(0) = O(eta^{-1}), so the -eta^{-1} nu/(x-lambda) term starts at
    // eta^{-2}: Q^(0)_1 = 0 and
    // Q^(0)_2 = lam0^2/Delta^2 + lam0/(Delta(x-lam0)) + 3/(4(x-lam0)^2)
    CHECK(Q.sector(0).coef(1).is_zero());
    auto inv_xl0 = (ctx->x() - ctx->lam0()).invert();
    auto q02 = ctx->lam0().pow_int(2) * ctx->inv_delta().pow_int(2) +
               ctx->lam0() * ctx->inv_delta() * inv_xl0 +
               inv_xl0.pow_int(2).scaled(Rational(3, 4));
    CHECK((Q.sector(0).coef(2) - q02).is_zero());
    for (int k = 0; k <= 2; ++k)
        CHECK(check_sector_homogeneity(Q.sector(k),
                                       Rational(-4, 3) + Rational((long)k) / 2));
}

TEST_CASE("x-Riccati series: leading terms, vanishing of S^(k)_{-1}") {
    auto ctx = make_context();
    auto ric = sl2_riccati_series(ctx, 2, 3);
    auto Sm1 = (ctx->x() - ctx->lam0()) * ctx->s();
    CHECK((ric.S.sector(0).coef(-1) - Sm1).is_zero());
    // S^(0)_0 = -(1/2) (dx S_-1)/S_-1
    auto S00 = -(Sm1.differentiate(VAR_X) * Sm1.invert()).scaled(Rational(1, 2));
    CHECK((ric.S.sector(0).coef(0) - S00).is_zero());
    for (int k = 1; k <= 2; ++k) CHECK(ric.S.sector(k).coef(-1).is_zero());
    // Riccati residual S^2 + dS/dx - eta^2 Q == 0 through the known range
    auto sol = one_param_solution(ctx, 2, 4);
    auto Q = q_potential_series(sol.lambda, sol.nu);
    auto dSdx = [&] {
        Transseries r = ric.S;
        for (int k = 0; k <= r.max_sector(); ++k)
            r.set_sector(k, r.sector(k).map([](const AlgebraicScalar& a) {
                return a.differentiate(VAR_X);
            }));
        return r;
    }();
    auto resid = ric.S * ric.S + dSdx - Q.shifted(-2);
    for (int k = 0; k <= resid.max_sector(); ++k) {
        CHECK(resid.sector(k).is_zero());
        CHECK(resid.sector(k).hi() >= 1);
    }
    // homogeneity: S base degree 1/3 + k/2
    for (int k = 0; k <= 2; ++k)
        CHECK(check_sector_homogeneity(ric.S.sector(k),
                                       Rational(1, 3) + Rational((long)k) / 2));
}

TEST_CASE("compatibility of the Lax pair") {
    auto ctx = make_context();
    auto res = sl2_compat_residual(ctx, 2, 4);
    for (int k = 0; k <= res.max_sector(); ++k) CHECK(res.sector(k).is_zero());

    // mutation: A_II frozen to its leading 1/(2(x - lam0)) breaks sector 1
    auto ric = sl2_riccati_series(ctx, 1, 3);
    auto A0 = (ctx->x() - ctx->lam0()).invert().scaled(Rational(1, 2));
    auto A0x = A0.differentiate(VAR_X);
    Transseries inner = ric.S.scaled(A0);
    inner -= Transseries::from_sector(ctx, 0, EtaSeries(A0x.scaled(Rational(1, 2)), 0));
    Transseries dinner = inner;
    for (int k = 0; k <= dinner.max_sector(); ++k)
        dinner.set_sector(k, inner.sector(k).map([](const AlgebraicScalar& a) {
            return a.differentiate(VAR_X);
        }));
    auto bad = ric.S.derivative_t() - dinner;
    CHECK(!bad.sector(1).is_zero());
}

// Several-times-larger rerun of the compatibility identity; excluded from the
// default suite for wall-time reasons (run with --no-skip or -tc to select).
TEST_CASE("compatibility of the Lax pair, deep truncation" * doctest::skip()) {
    auto ctx = make_context();
    auto res = sl2_compat_residual(ctx, 3, 6);
    for (int k = 0; k <= res.max_sector(); ++k) CHECK(res.sector(k).is_zero());
}

TEST_CASE("U series and its defining derivative") {
    auto ctx = make_context();
    auto U = u_series(ctx, 2, 4);
    // U^(1)_0 = Delta^{-1/4}/w = q w / Delta * (w/Delta) ... = 1/(q w)
    auto expected = (ctx->q() * ctx->w()).invert();
    CHECK((U.sector(1).coef(0) - expected).is_zero());
    auto sol = one_param_solution(ctx, 2, 4);
    auto lam0T = Transseries::from_sector(ctx, 0, EtaSeries(ctx->lam0(), 0));
    auto res = U.derivative_t() - (sol.lambda - lam0T).shifted(-1);
    for (int k = 0; k <= res.max_sector(); ++k) {
        CHECK(res.sector(k).is_zero());
        CHECK(res.sector(k).hi() >= 3);
    }
    for (int k = 0; k <= 2; ++k)
        CHECK(check_sector_homogeneity(U.sector(k), Rational((long)k) / 2));
}

TEST_CASE("log-u relation") {
    auto ctx = make_context();
    auto res = log_u_residual(ctx, 0, 4);
    CHECK(res.sector(0).is_zero());
    auto res2 = log_u_residual(ctx, 2, 4);
    for (int k = 0; k <= res2.max_sector(); ++k) CHECK(res2.sector(k).is_zero());
    // dropping the c log term leaves -c eta / Delta
    auto lam0 = ctx->lam0();
    auto sol = one_param_solution(ctx, 0, 4);
    auto U = u_series(ctx, 0, 4);
    auto head = (lam0 * lam0 * lam0.differentiate(VAR_T)).scaled(Rational(4));
    auto dropped = Transseries::from_sector(ctx, 0, EtaSeries(head, -1)) - U.derivative_t() +
                   sol.lambda.shifted(-1);
    auto expect = -(ctx->c() * ctx->inv_delta());
    CHECK((dropped.sector(0).coef(-1) - expect).is_zero());
}

TEST_CASE("Schlesinger difference equation") {
    auto ctx = make_context();
    auto res = schlesinger_difference_residual(ctx, 4);
    CHECK(res.is_zero());
    CHECK(res.hi() >= 3);
    auto res6 = schlesinger_difference_residual(ctx, 6);
    CHECK(res6.is_zero());
    CHECK(res6.hi() >= 5);
    // omitting the eta^{-1}/(2(x-lambda)) part of f breaks the identity
    auto bad = schlesinger_difference_residual(ctx, 3, false);
    CHECK(!bad.is_zero());
}

TEST_CASE("residues at x = lam0") {
    auto ctx = make_context();
    // A^(0)_II leading: 1/(2(x - lam0)) has residue 1/2
    auto A0 = (ctx->x() - ctx->lam0()).invert().scaled(Rational(1, 2));
    CHECK((residue_at_lambda0(A0) - ctx->constant(Rational(1, 2))).is_zero());
    // E = 0: residues of S_odd vanish at every computed order and sector
    auto ric = sl2_riccati_series(ctx, 2, 3);
    for (int k = 0; k <= 2; ++k) {
        auto s = ric.S_odd.sector(k);
        if (s.is_zero()) continue;
        for (int j = s.eff_lo(); j <= std::min(s.stored_hi(), s.hi()); ++j)
            CHECK(residue_at_lambda0(s.coef(j)).is_zero());
    }
}

TEST_CASE("expansion at x = infinity") {
    auto ctx = make_context();
    auto Sm1 = (ctx->x() - ctx->lam0()) * ctx->s();
    auto e = asymptotic_expand_x_infinity(Sm1, 5);
    CHECK(e.top_deg == 2);
    CHECK((e.coeff_of(2) - ctx->integer(1)).is_zero());
    CHECK(e.coeff_of(1).is_zero());
    CHECK((e.coeff_of(0) - ctx->t().scaled(Rational(1, 2))).is_zero());
    CHECK((e.coeff_of(-1) - ctx->c()).is_zero());
    // Res_{x=infinity} sqrt(Q_0) dx = -c
    CHECK((residue_at_infinity(Sm1) + ctx->c()).is_zero());
    // S^(0)_0 = -1/x + O(x^-2)
    auto ric = sl2_riccati_series(ctx, 0, 1);
    auto e2 = asymptotic_expand_x_infinity(ric.S.sector(0).coef(0), 3);
    CHECK(e2.top_deg <= -1);
    CHECK((e2.coeff_of(-1) + ctx->integer(1)).is_zero());
}

TEST_CASE("s negation is an involutive automorphism") {
    auto ctx = make_context();
    auto a = (ctx->s() + ctx->lam0()) * ctx->w() + ctx->s() * ctx->s();
    auto b = subst_s_negated(a);
    CHECK((subst_s_negated(b) - a).is_zero());
    auto prod = subst_s_negated(a * a) - b * b;
    CHECK(prod.is_zero());
    CHECK(!(a - b).is_zero());
}
