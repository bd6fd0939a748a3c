#include "pwkb/pii.hpp"

#include <map>
#include <stdexcept>

namespace pwkb {

namespace {

/// Reuse a primitive symbol already adjoined to the context, if any.
PrimitiveSymbol get_or_add_primitive(const ContextPtr& ctx, const std::string& name,
                                     const AlgebraicScalar& integrand,
                                     const std::string& basepoint, const Rational& weight) {
    for (int v = VAR_FIRST_PRIMITIVE; v < ctx->num_gens(); ++v)
        if (ctx->gen(v).name == name) return PrimitiveSymbol{v, name, ctx->gen(v).basepoint};
    return ctx->add_primitive(name, integrand, basepoint, weight);
}

EtaSeries from_coeffs(const ContextPtr& ctx, const std::vector<AlgebraicScalar>& a, int lo,
                      int hi) {
    EtaSeries r(ctx);
    for (int i = 0; i < (int)a.size(); ++i)
        if (!a[i].is_zero()) r.set_coef(lo + i, a[i]);
    return r.truncated(hi);
}

} // namespace

ZeroParamSolution zero_param_solution(const ContextPtr& ctx, int N) {
    if (N < 0) throw std::invalid_argument("negative order");
    std::vector<AlgebraicScalar> lam(N + 1, ctx->zero());
    lam[0] = ctx->lam0();
    auto invD = ctx->inv_delta();
    for (int m = 1; m <= N; ++m) {
        // Delta * lam_m = lam_{m-2}'' - 2 sum_{k1+k2+k3=m, ki<m} lam lam lam
        std::vector<AlgebraicScalar> parts;
        for (int k1 = 0; k1 < m; ++k1)
            for (int k2 = 0; k1 + k2 <= m; ++k2) {
                int k3 = m - k1 - k2;
                if (k2 >= m || k3 >= m) continue;
                parts.push_back((lam[k1] * lam[k2] * lam[k3]).scaled(Rational(-2)));
            }
        if (m >= 2) parts.push_back(lam[m - 2].differentiate(VAR_T).differentiate(VAR_T));
        lam[m] = invD * sum_scalars(parts);
    }
    ZeroParamSolution z{from_coeffs(ctx, lam, 0, N), EtaSeries(ctx)};
    std::vector<AlgebraicScalar> nu(N + 2, ctx->zero());
    for (int m = 1; m <= N + 1; ++m) nu[m] = lam[m - 1].differentiate(VAR_T);
    z.nu = from_coeffs(ctx, nu, 0, N + 1);
    return z;
}

EtaSeries riccati_series(const ContextPtr& ctx, int N) {
    // R^2 + dR/dt = eta^2 (6 (lambda^(0))^2 + t), R = eta w + R_0 + ...
    auto zp = zero_param_solution(ctx, N + 1);
    // G_m = coefficient of eta^{-m} in 6 (lambda^(0))^2 + t
    std::vector<AlgebraicScalar> G(N + 2, ctx->zero());
    for (int m = 0; m <= N + 1; ++m) {
        AlgebraicScalar g = ctx->zero();
        for (int i = 0; i <= m; ++i) g += zp.lambda.coef(i) * zp.lambda.coef(m - i);
        G[m] = g.scaled(Rational(6));
    }
    G[0] += ctx->t();
    std::vector<AlgebraicScalar> R(N + 2, ctx->zero()); // R[j+1] = R_j, j >= -1
    R[0] = ctx->w();
    auto inv2w = (ctx->w() * ctx->inv_delta()).scaled(Rational(1, 2)); // 1/(2w)
    for (int k = -1; k + 1 <= N; ++k) {
        // 2 w R_{k+1} = G_{k+2} - R_k' - sum_{j1+j2=k, 0<=ji<=k} R_{j1} R_{j2}
        std::vector<AlgebraicScalar> parts{G[k + 2], -R[k + 1].differentiate(VAR_T)};
        for (int j = 0; j <= k; ++j) parts.push_back(-(R[j + 1] * R[k - j + 1]));
        R[k + 2] = inv2w * sum_scalars(parts);
    }
    return from_coeffs(ctx, R, -1, N);
}

static EtaSeries parity_part(const EtaSeries& s, int parity) {
    EtaSeries r(s.ctx());
    if (!s.is_zero())
        for (int j = s.eff_lo(); j <= std::min(s.stored_hi(), s.hi()); ++j)
            if (((j % 2) + 2) % 2 == parity) {
                auto a = s.coef(j);
                if (!a.is_zero()) r.set_coef(j, a);
            }
    return r.truncated(s.hi());
}

EtaSeries riccati_odd(const EtaSeries& R) { return parity_part(R, 1); }
EtaSeries riccati_even(const EtaSeries& R) { return parity_part(R, 0); }

OneParamSolution one_param_solution(const ContextPtr& ctx, int K, int N, Normalization norm) {
    if (K < 0 || N < 0) throw std::invalid_argument("negative order");
    OneParamSolution sol;
    sol.norm = norm;
    auto zp = zero_param_solution(ctx, std::max(N, 1));
    Transseries lam(ctx, K);
    lam.set_all_sectors_known(false); // the true transseries has every sector
    lam.set_sector(0, zp.lambda.truncated(N));

    std::vector<std::vector<AlgebraicScalar>> secs(K + 1,
                                                   std::vector<AlgebraicScalar>(N + 1, ctx->zero()));
    for (int l = 0; l <= N; ++l) secs[0][l] = zp.lambda.coef(l);

    if (K >= 1) {
        // lambda^(1) = q^{-1} (1+X)^{-1/2} exp(sum_j eta^{1-2j} P_{2j-1}),
        // X = sum_{j>=1} eta^{-2j} R_{2j-1}/w, P' = R_{2j-1}.
        auto R = riccati_series(ctx, N);
        auto invw = ctx->w() * ctx->inv_delta();
        std::string tag = norm == Normalization::TurningPoint ? "tau1" : "infty";
        EtaSeries X(ctx), P(ctx);
        for (int j = 1; 2 * j - 1 <= N; ++j) {
            auto Rodd = R.coef(2 * j - 1);
            X.set_coef(2 * j, Rodd * invw);
            auto prim = get_or_add_primitive(ctx, "P" + std::to_string(2 * j - 1) + "_" + tag,
                                             Rodd, tag, Rational(2 * j - 1));
            sol.primitives.push_back(prim);
            P.set_coef(2 * j - 1, ctx->var(prim.var));
        }
        X = X.truncated(N + 1);
        auto one = EtaSeries(ctx->integer(1), 0);
        auto F = (one + X).pow_binomial(Rational(-1, 2), N);
        auto E = P.truncated(N).exponential(N);
        auto invq = ctx->q() * invw; // 1/q = q/w
        auto lam1 = (F * E).scaled(invq).truncated(N);
        lam.set_sector(1, lam1);
        for (int l = 0; l <= N; ++l) secs[1][l] = lam1.coef(l);
    }

    auto wgen = ctx->w();
    auto wp = wgen.differentiate(VAR_T);
    auto invD = ctx->inv_delta();
    // square of lambda^(0) by eta order
    std::vector<AlgebraicScalar> sq(N + 1, ctx->zero());
    for (int m = 0; m <= N; ++m)
        for (int i = 0; i <= m; ++i) sq[m] += secs[0][i] * secs[0][m - i];

    for (int k = 2; k <= K; ++k) {
        auto invkd = invD.scaled(Rational(1, (long)k * k - 1));
        std::vector<AlgebraicScalar> dcur(N + 1, ctx->zero()); // d/dt of secs[k][l]
        for (int l = 0; l <= N; ++l) {
            // (k^2-1) Delta lam^(k)_l = 6 sum_{l3<l} ll^(0)ll^(0)lam^(k)
            //   + 2 sum_{ki<k} lam lam lam - 2k w lam^(k)'_{l-1}
            //   - k w' lam^(k)_{l-1} - lam^(k)''_{l-2}
            std::vector<AlgebraicScalar> parts;
            for (int m = 1; m <= l; ++m)
                parts.push_back((sq[m] * secs[k][l - m]).scaled(Rational(6)));
            for (int k1 = 0; k1 < k; ++k1)
                for (int k2 = 0; k1 + k2 <= k; ++k2) {
                    int k3 = k - k1 - k2;
                    if (k2 >= k || k3 < 0 || k3 >= k) continue;
                    for (int l1 = 0; l1 <= l; ++l1)
                        for (int l2 = 0; l1 + l2 <= l; ++l2)
                            parts.push_back((secs[k1][l1] * secs[k2][l2] * secs[k3][l - l1 - l2])
                                                .scaled(Rational(2)));
                }
            if (l >= 1) {
                parts.push_back((wgen * dcur[l - 1]).scaled(Rational(-2 * (long)k)));
                parts.push_back((wp * secs[k][l - 1]).scaled(Rational(-(long)k)));
            }
            if (l >= 2) parts.push_back(-dcur[l - 2].differentiate(VAR_T));
            secs[k][l] = invkd * sum_scalars(parts);
            dcur[l] = secs[k][l].differentiate(VAR_T);
        }
        lam.set_sector(k, from_coeffs(ctx, secs[k], 0, N));
    }

    // nu^(k) = k w lam^(k) + eta^{-1} d lam^(k)/dt
    Transseries nu(ctx, K);
    nu.set_all_sectors_known(false);
    for (int k = 0; k <= K; ++k) {
        auto lk = lam.sector(k);
        auto nk = lk.derivative_t().shifted(1);
        if (k > 0) nk += lk.scaled(wgen.scaled(Rational((long)k)));
        nu.set_sector(k, nk.truncated(N));
    }
    sol.lambda = lam;
    sol.nu = nu;
    return sol;
}

Transseries pii_residual(const Transseries& lambda) {
    const auto& ctx = lambda.ctx();
    Transseries cts = Transseries::from_sector(ctx, 0, EtaSeries(ctx->c(), 0));
    auto cube = (lambda * lambda * lambda).scaled(ctx->integer(2));
    auto rhs = cube + lambda.scaled(ctx->t()) + cts;
    return lambda.derivative_t().derivative_t() - rhs.shifted(-2);
}

EtaSeries pii_residual(const EtaSeries& lambda0) {
    const auto& ctx = lambda0.ctx();
    auto cube = (lambda0 * lambda0 * lambda0).scaled(Rational(2));
    auto rhs = cube + lambda0.scaled(ctx->t()) + EtaSeries(ctx->c(), 0);
    return lambda0.derivative_t().derivative_t() - rhs.shifted(-2);
}

std::pair<Transseries, Transseries> hamiltonian_residual(const Transseries& lambda,
                                                         const Transseries& nu) {
    const auto& ctx = lambda.ctx();
    Transseries cts = Transseries::from_sector(ctx, 0, EtaSeries(ctx->c(), 0));
    auto r1 = lambda.derivative_t() - nu.shifted(-1);
    auto cube = (lambda * lambda * lambda).scaled(ctx->integer(2));
    auto r2 = nu.derivative_t() - (cube + lambda.scaled(ctx->t()) + cts).shifted(-1);
    return {r1, r2};
}

EtaSeries taylor_shift_c(const EtaSeries& e, int target_hi) {
    const auto& ctx = e.ctx();
    int hi = std::min(e.hi(), target_hi);
    EtaSeries r(ctx);
    if (!e.is_zero()) {
        std::map<int, AlgebraicScalar> acc;
        for (int i = e.eff_lo(); i <= std::min(e.stored_hi(), hi); ++i) {
            AlgebraicScalar d = e.coef(i);
            Rational fact = 1;
            for (int m = 0; i + m <= hi; ++m) {
                if (m > 0) {
                    d = d.differentiate(VAR_C);
                    fact *= Rational(-1, (long)m);
                }
                if (d.is_zero()) break;
                auto it = acc.find(i + m);
                if (it == acc.end())
                    acc.emplace(i + m, d.scaled(fact));
                else
                    it->second += d.scaled(fact);
            }
        }
        for (auto& [j, a] : acc)
            if (!a.is_zero()) r.set_coef(j, a);
    }
    return r.truncated(hi);
}

BacklundPair backlund_transform(const Transseries& lambda, const Transseries& nu) {
    const auto& ctx = lambda.ctx();
    EtaSeries fc(ctx); // c - (1/2) eta^{-1}
    fc.set_coef(0, ctx->c());
    fc.set_coef(1, ctx->constant(Rational(-1, 2)));
    Transseries F = Transseries::from_sector(ctx, 0, fc);
    Transseries half_t =
        Transseries::from_sector(ctx, 0, EtaSeries(ctx->t().scaled(Rational(1, 2)), 0));
    auto D = nu - lambda * lambda - half_t;
    auto G = F * D.inverted();
    BacklundPair bp;
    bp.lambda = -lambda + G;
    bp.nu = -nu + (G * lambda).scaled(ctx->integer(2)) - G * G;
    return bp;
}

EtaSeries backlund_identity_residual(const ContextPtr& ctx, int N) {
    auto zp = zero_param_solution(ctx, N);
    auto lamT = Transseries::from_sector(ctx, 0, zp.lambda);
    auto nuT = Transseries::from_sector(ctx, 0, zp.nu);
    auto bp = backlund_transform(lamT, nuT);
    return (bp.lambda.sector(0) - taylor_shift_c(zp.lambda, N)).truncated(N);
}

EtaSeries riccati_difference_residual(const ContextPtr& ctx, int N) {
    auto R = riccati_series(ctx, N);
    auto Rsh = taylor_shift_c(R, N);
    auto zp = zero_param_solution(ctx, N);
    EtaSeries fc(ctx);
    fc.set_coef(0, ctx->c());
    fc.set_coef(1, ctx->constant(Rational(-1, 2)));
    auto half_t = EtaSeries(ctx->t().scaled(Rational(1, 2)), 0);
    auto D = zp.nu.truncated(N) - zp.lambda * zp.lambda - half_t;
    auto A = EtaSeries(ctx->integer(1), 0) +
             fc * (R.shifted(1) - zp.lambda.scaled(Rational(2))) * (D * D).inverted(N);
    return ((R - Rsh) + A.derivative_t() * A.inverted(N)).truncated(N);
}

bool check_sector_homogeneity(const EtaSeries& s, const Rational& base_) {
    if (s.is_zero()) return true;
    Rational base = base_;
    base.canonicalize();
    for (int j = s.eff_lo(); j <= std::min(s.stored_hi(), s.hi()); ++j) {
        auto a = s.coef(j);
        if (a.is_zero()) continue;
        auto d = a.homogeneity_degree();
        if (!d || *d != base + Rational((long)j)) return false;
    }
    return true;
}

} // namespace pwkb
