#include "pwkb/sl2.hpp"

#include <stdexcept>

namespace pwkb {

namespace {

EtaSeries map_x_derivative(const EtaSeries& s) {
    return s.map([](const AlgebraicScalar& a) { return a.differentiate(VAR_X); });
}

Transseries map_x_derivative(const Transseries& T) {
    Transseries r = T;
    for (int k = 0; k <= T.max_sector(); ++k) r.set_sector(k, map_x_derivative(T.sector(k)));
    return r;
}

EtaSeries from_coeffs(const ContextPtr& ctx, const std::vector<AlgebraicScalar>& a, int lo,
                      int hi) {
    EtaSeries r(ctx);
    for (int i = 0; i < (int)a.size(); ++i)
        if (!a[i].is_zero()) r.set_coef(lo + i, a[i]);
    return r.truncated(hi);
}

} // namespace

XTransseries q_potential_series(const Transseries& lambda, const Transseries& nu) {
    const auto& ctx = lambda.ctx();
    auto X = Transseries::from_sector(ctx, 0, EtaSeries(ctx->x(), 0));
    auto T = Transseries::from_sector(ctx, 0, EtaSeries(ctx->t(), 0));
    auto C = Transseries::from_sector(ctx, 0, EtaSeries(ctx->c(), 0));
    auto two = ctx->integer(2);
    auto l2 = lambda * lambda;
    // K_II = (nu^2 - lambda^4 - t lambda^2 - 2 c lambda)/2
    auto K2 = nu * nu - l2 * l2 - l2.scaled(ctx->t()) - lambda.scaled(ctx->c()).scaled(two);
    auto inv_xl = (X - lambda).inverted();
    auto Q = (X * X * X * X) + (X * X).scaled(ctx->t()) + X.scaled(ctx->c()).scaled(two) + K2 -
             (nu * inv_xl).shifted(1) +
             (inv_xl * inv_xl).scaled(ctx->constant(Rational(3, 4))).shifted(2);
    return Q;
}

SL2Riccati sl2_riccati_series(const ContextPtr& ctx, int K, int N) {
    auto sol = one_param_solution(ctx, K, N + 1);
    auto Q = q_potential_series(sol.lambda, sol.nu);
    // Scoef[k][j+1] = S^(k)_j, j = -1..N
    std::vector<std::vector<AlgebraicScalar>> Scoef(
        K + 1, std::vector<AlgebraicScalar>(N + 2, ctx->zero()));
    auto Sm1 = (ctx->x() - ctx->lam0()) * ctx->s();
    Scoef[0][0] = Sm1;
    auto inv2Sm1 = (Sm1 + Sm1).invert();
    for (int k = 0; k <= K; ++k) {
        for (int l = -1; l + 1 <= N; ++l) {
            // 2 S_{-1} S^(k)_{l+1} = Q^(k)_{l+2} - dx S^(k)_l - sum' S S
            std::vector<AlgebraicScalar> parts;
            parts.push_back(Q.sector(k).coef(l + 2));
            parts.push_back(-Scoef[k][l + 1].differentiate(VAR_X));
            for (int k1 = 0; k1 <= k; ++k1) {
                int k2 = k - k1;
                for (int j1 = -1; j1 <= l + 1; ++j1) {
                    int j2 = l - j1;
                    if (j2 < -1 || j2 > l + 1) continue;
                    bool unknown = (k1 == 0 && j1 == -1 && k2 == k && j2 == l + 1) ||
                                   (k2 == 0 && j2 == -1 && k1 == k && j1 == l + 1);
                    if (unknown) continue;
                    parts.push_back(-(Scoef[k1][j1 + 1] * Scoef[k2][j2 + 1]));
                }
            }
            Scoef[k][l + 2] = inv2Sm1 * sum_scalars(parts);
        }
    }
    SL2Riccati out;
    Transseries S(ctx, K);
    S.set_all_sectors_known(false);
    for (int k = 0; k <= K; ++k) S.set_sector(k, from_coeffs(ctx, Scoef[k], -1, N));
    out.S = S;
    Transseries Sconj = S;
    for (int k = 0; k <= K; ++k)
        Sconj.set_sector(k, S.sector(k).map(subst_s_negated));
    out.S_odd = (S - Sconj).scaled(ctx->constant(Rational(1, 2)));
    return out;
}

XTransseries sl2_compat_residual(const ContextPtr& ctx, int K, int N) {
    auto ric = sl2_riccati_series(ctx, K, N);
    auto sol = one_param_solution(ctx, K, N + 1);
    auto X = Transseries::from_sector(ctx, 0, EtaSeries(ctx->x(), 0));
    auto A = (X - sol.lambda).inverted().scaled(ctx->constant(Rational(1, 2)));
    auto inner = A * ric.S - map_x_derivative(A).scaled(ctx->constant(Rational(1, 2)));
    return ric.S.derivative_t() - map_x_derivative(inner);
}

XTransseries u_series(const ContextPtr& ctx, int K, int N) {
    auto sol = one_param_solution(ctx, K, N);
    Transseries U(ctx, K);
    U.set_all_sectors_known(false);
    // sector 0: primitives of lambda^(0)_m, basepoint infinity
    EtaSeries U0(ctx);
    for (int m = 2; m <= N; ++m) {
        auto lm = sol.lambda.sector(0).coef(m);
        if (lm.is_zero()) continue;
        auto deg = lm.homogeneity_degree();
        Rational weight = deg ? *deg + Rational(-2, 3) : Rational(0);
        PrimitiveSymbol prim;
        std::string name = "Ulam" + std::to_string(m) + "_inf";
        bool found = false;
        for (int v = VAR_FIRST_PRIMITIVE; v < ctx->num_gens(); ++v)
            if (ctx->gen(v).name == name) {
                prim = PrimitiveSymbol{v, name, ctx->gen(v).basepoint};
                found = true;
                break;
            }
        if (!found) prim = ctx->add_primitive(name, lm, "infty", weight);
        U0.set_coef(m - 1, ctx->var(prim.var));
    }
    U.set_sector(0, U0.truncated(N - 1));
    // sector k >= 1: U^(k)_j = (lambda^(k)_j - dU^(k)_{j-1}/dt)/(k w)
    auto invw = ctx->w() * ctx->inv_delta();
    for (int k = 1; k <= K; ++k) {
        auto invkw = invw.scaled(Rational(1, (long)k));
        std::vector<AlgebraicScalar> u(N + 1, ctx->zero());
        for (int j = 0; j <= N; ++j) {
            auto rhs = sol.lambda.sector(k).coef(j);
            if (j >= 1) rhs -= u[j - 1].differentiate(VAR_T);
            u[j] = invkw * rhs;
        }
        U.set_sector(k, from_coeffs(ctx, u, 0, N));
    }
    return U;
}

Transseries log_u_residual(const ContextPtr& ctx, int K, int N) {
    auto sol = one_param_solution(ctx, K, N);
    auto U = u_series(ctx, K, N);
    // d/dt[(4/3) eta lam0^3] = 4 eta lam0^2 lam0' ; d/dt of the log term is
    // c eta / Delta (the stated rational form of dt log(-(2 lam0^2+t)/4))
    auto lam0 = ctx->lam0();
    auto head = (lam0 * lam0 * lam0.differentiate(VAR_T)).scaled(Rational(4)) +
                ctx->c() * ctx->inv_delta();
    auto res = Transseries::from_sector(ctx, 0, EtaSeries(head, -1)) - U.derivative_t() +
               sol.lambda.shifted(-1);
    return res;
}

EtaSeries schlesinger_difference_residual(const ContextPtr& ctx, int N, bool include_half_term) {
    auto ric = sl2_riccati_series(ctx, 0, N);
    auto S0 = ric.S.sector(0);
    auto zp = zero_param_solution(ctx, N);
    auto X = EtaSeries(ctx->x(), 0);
    auto inv_xl = (X - zp.lambda).inverted(N);
    auto Lambda = taylor_shift_c(zp.lambda, N);
    auto inv_xL = (X - Lambda).inverted(N);
    // B = x^2 - lambda^2 + nu - (1/2) eta^{-1}/(x-lambda) - eta^{-1} S^(0)
    auto B = EtaSeries(ctx->x() * ctx->x(), 0) - zp.lambda * zp.lambda + zp.nu.truncated(N) -
             S0.shifted(1);
    if (include_half_term) B -= inv_xl.scaled(ctx->constant(Rational(1, 2))).shifted(1);
    auto logder = map_x_derivative(B) * B.inverted(N) -
                  (inv_xL + inv_xl).scaled(ctx->constant(Rational(1, 2)));
    return (S0 - taylor_shift_c(S0, N) + logder).truncated(N - 1);
}

AlgebraicScalar subst_s_negated(const AlgebraicScalar& a) {
    if (a.is_zero()) return a;
    Poly p;
    for (const auto& [e, c] : a.num().terms())
        p.add_term(e, expvec_get(e, VAR_S) % 2 ? -c : c);
    return AlgebraicScalar(a.ctx(), p, a.den());
}

namespace {

/// Expand a tower element as a Laurent series via a substitution for x and s.
/// The "eta exponent" of the returned EtaSeries is the power of the local
/// parameter.  xv/sv must be exact to at least `target`.
EtaSeries laurent_expand(const AlgebraicScalar& a, const EtaSeries& xv, const EtaSeries& sv,
                         int target) {
    const auto& ctx = a.ctx();
    // cached powers of the x-substitution (exponents in s are <= 1 after
    // relation reduction, so only x powers repeat)
    std::vector<EtaSeries> xpow{EtaSeries(ctx->integer(1), 0)};
    auto x_power = [&](int e) -> const EtaSeries& {
        while ((int)xpow.size() <= e) xpow.push_back((xpow.back() * xv).truncated(target));
        return xpow[(std::size_t)e];
    };
    // bucket the numerator by (x exponent, s exponent): one series
    // multiplication per bucket instead of one per term
    auto expand_poly = [&](const Poly& p) {
        std::map<std::pair<int, int>, Poly> buckets;
        for (const auto& [e, coef] : p.terms()) {
            int ex = expvec_get(e, VAR_X), es = expvec_get(e, VAR_S);
            ExpVec rest = e;
            expvec_set(rest, VAR_X, 0);
            expvec_set(rest, VAR_S, 0);
            buckets[{ex, es}].add_term(rest, coef);
        }
        EtaSeries out(ctx);
        for (auto& [key, poly] : buckets) {
            auto [ex, es] = key;
            EtaSeries term(ctx->from_poly(std::move(poly)), 0);
            if (ex) term = (term * x_power(ex)).truncated(target);
            for (int i = 0; i < es; ++i) term = (term * sv).truncated(target);
            out += term;
        }
        return out;
    };
    EtaSeries result = expand_poly(a.num());
    for (const auto& [atom_id, expn] : a.den()) {
        auto inv = expand_poly(ctx->atom(atom_id)).inverted(target);
        for (int i = 0; i < expn; ++i) result = (result * inv).truncated(target);
    }
    return result;
}

} // namespace

AlgebraicScalar residue_at_lambda0(const AlgebraicScalar& a) {
    const auto& ctx = a.ctx();
    if (a.is_zero()) return a;
    // pole order at x = lam0 is bounded by the multiplicity of the atoms that
    // actually vanish there; atoms with nonzero value contribute no depth
    int target = 4;
    for (const auto& [atom_id, expn] : a.den()) {
        Poly at_lam0 = ctx->atom(atom_id).substituted(VAR_X, Poly::variable(VAR_LAM0));
        if (ctx->reduce(std::move(at_lam0)).is_zero()) target += expn;
    }
    // x = lam0 + u
    EtaSeries xv(ctx->lam0(), 0);
    xv.set_coef(1, ctx->integer(1));
    // s = w (1 + (4 lam0 u + u^2)/Delta)^{1/2}
    EtaSeries inner(ctx);
    inner.set_coef(1, ctx->lam0().scaled(Rational(4)) * ctx->inv_delta());
    inner.set_coef(2, ctx->inv_delta());
    EtaSeries one(ctx->integer(1), 0);
    auto sv = (one + inner).pow_binomial(Rational(1, 2), target).scaled(ctx->w());
    auto e = laurent_expand(a, xv, sv, target);
    if (e.hi() < -1) throw std::domain_error("pole order exceeds expansion depth");
    return e.coef(-1);
}

XInfinityExpansion asymptotic_expand_x_infinity(const AlgebraicScalar& a, int M) {
    const auto& ctx = a.ctx();
    XInfinityExpansion out;
    out.ctx = ctx;
    if (a.is_zero()) {
        out.top_deg = 0;
        out.coeffs.assign(M, ctx->zero());
        return out;
    }
    int target = M + 8;
    for (const auto& [atom_id, expn] : a.den()) target += 4 * expn;
    // local parameter xi = 1/x: x = xi^{-1}, s = xi^{-1}(1 + 2 lam0 xi
    //   + (3 lam0^2 + t) xi^2)^{1/2}  (branch s ~ x)
    EtaSeries xv(ctx->integer(1), -1);
    EtaSeries inner(ctx);
    inner.set_coef(1, ctx->lam0().scaled(Rational(2)));
    inner.set_coef(2, ctx->lam0().pow_int(2).scaled(Rational(3)) + ctx->t());
    EtaSeries one(ctx->integer(1), 0);
    auto sv = (one + inner).pow_binomial(Rational(1, 2), target).shifted(-1);
    auto e = laurent_expand(a, xv, sv, target);
    // coefficient of x^j is the xi^{-j}... coefficient e.coef(-j)
    int top = -e.eff_lo();
    out.top_deg = top;
    for (int i = 0; i < M; ++i) {
        int j = top - i; // power of x
        if (-j > e.hi()) throw std::domain_error("expansion depth exhausted");
        out.coeffs.push_back(e.coef(-j));
    }
    return out;
}

AlgebraicScalar XInfinityExpansion::coeff_of(int deg) const {
    if (deg > top_deg) return ctx->zero();
    int i = top_deg - deg;
    if (i >= (int)coeffs.size()) throw std::out_of_range("coefficient below computed range");
    return coeffs[i];
}

AlgebraicScalar residue_at_infinity(const AlgebraicScalar& a) {
    auto e = asymptotic_expand_x_infinity(a, 1);
    // need coefficient of x^{-1}: expand far enough
    int M = e.top_deg + 2;
    if (M < 1) M = 1;
    e = asymptotic_expand_x_infinity(a, M);
    if (e.top_deg - ((int)e.coeffs.size() - 1) > -1) return a.ctx()->zero();
    return -e.coeff_of(-1);
}

} // namespace pwkb
