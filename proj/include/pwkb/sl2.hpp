#pragma once
// The eta-expansion of the isomonodromic Lax data for Painlevé II:
// the potential Q_II of the associated second-order ODE (SL_II), the
// deformation coefficient A_II = 1/(2(x - lambda)), the x-Riccati series S and
// its odd part, the series U with dU/dt = eta (lambda - lambda_0), and the
// exact identities tying them together (compatibility, the Schlesinger
// c -> c - eta^{-1} difference equation, the log-u relation, and the vanishing
// of the residues of S_odd at x = lambda_0).

#include "pwkb/pii.hpp"

namespace pwkb {

/// Same grading as Transseries; coefficients live in the extended tower with
/// x and s = sqrt(x^2 + 2 lam0 x + 3 lam0^2 + t).
using XTransseries = Transseries;

/// Q_II = x^4 + t x^2 + 2 c x + 2 K_II - eta^{-1} nu/(x-lambda)
///        + eta^{-2} (3/4)/(x-lambda)^2,  K_II = (nu^2 - lambda^4 - t lambda^2
///        - 2 c lambda)/2, with 1/(x-lambda) re-expanded geometrically.
XTransseries q_potential_series(const Transseries& lambda, const Transseries& nu);

struct SL2Riccati {
    XTransseries S;
    XTransseries S_odd; // (S - S|_{s -> -s})/2
};

/// Solve S^2 + dS/dx = eta^2 Q_II sector by sector; S_-1 = (x - lam0) s and
/// S^(k)_-1 = 0 for k >= 1.
SL2Riccati sl2_riccati_series(const ContextPtr& ctx, int K, int N);

/// dS/dt - d/dx (A_II S - (1/2) dA_II/dx); identically zero.
XTransseries sl2_compat_residual(const ContextPtr& ctx, int K, int N);

/// U with dU/dt = eta (lambda - lam0): sector 0 from primitive symbols of
/// lambda^(0)_{2n} (basepoint infinity), sectors k >= 1 from
/// k eta w U^(k) + dU^(k)/dt = eta lambda^(k).
XTransseries u_series(const ContextPtr& ctx, int K, int N);

/// d/dt[(4/3) eta lam0^3 + c eta log(-(2 lam0^2+t)/4) - U] + eta lambda,
/// with d/dt of the log taken as the rational element 1/Delta.
Transseries log_u_residual(const ContextPtr& ctx, int K, int N);

/// S^(0)(c) - S^(0)(c - eta^{-1}) + dx log(f^(0) + g^(0) S^(0)) for the
/// Schlesinger transformation, the log-derivative split into (dx B)/B minus
/// the explicit rational term from the (x-Lambda)^{-1/2}(x-lambda)^{-1/2}
/// prefactor.  include_half_term=false drops the eta^{-1}/(2(x-lambda)) piece
/// of f (mutation check; the residual is then nonzero).
EtaSeries schlesinger_difference_residual(const ContextPtr& ctx, int N,
                                          bool include_half_term = true);

/// Field automorphism s -> -s (the deck transformation of sqrt(Q_0)).
AlgebraicScalar subst_s_negated(const AlgebraicScalar& a);

/// Exact residue at x = lam0 (branch s(lam0) = +w).
AlgebraicScalar residue_at_lambda0(const AlgebraicScalar& a);

/// Laurent expansion at x = infinity with branch s ~ x: returns the
/// coefficients of x^j for j = top_deg, top_deg-1, ..., top_deg-M+1.
struct XInfinityExpansion {
    ContextPtr ctx;
    int top_deg = 0;
    std::vector<AlgebraicScalar> coeffs; // coeffs[i] multiplies x^{top_deg-i}
    AlgebraicScalar coeff_of(int deg) const; // throws below the computed range
};
XInfinityExpansion asymptotic_expand_x_infinity(const AlgebraicScalar& a, int M);

/// Res_{x=infinity} a dx = -(coefficient of x^{-1}).
AlgebraicScalar residue_at_infinity(const AlgebraicScalar& a);

} // namespace pwkb
