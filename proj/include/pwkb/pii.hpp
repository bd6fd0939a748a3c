#pragma once
// Formal solutions of the second Painlevé equation with large parameter:
//   (P_II)  d^2 lambda/dt^2 = eta^2 (2 lambda^3 + t lambda + c)
// as the Hamiltonian system dlambda/dt = eta nu, dnu/dt = eta (2l^3+tl+c).
//
// Provides the 0-parameter power series solution, the Riccati series R of the
// linearized (Frechet) equation, the 1-parameter transseries, residual
// checks, the Backlund transformation c -> c - eta^{-1}, and the exact
// difference-equation residuals behind the parametric Stokes phenomenon.

#include "pwkb/series.hpp"

namespace pwkb {

struct ZeroParamSolution {
    EtaSeries lambda; // lambda^(0), exact through eta^{-N}
    EtaSeries nu;     // nu^(0) = eta^{-1} d lambda^(0)/dt
};

ZeroParamSolution zero_param_solution(const ContextPtr& ctx, int N);

/// R = eta w + R_0 eta^0 + R_1 eta^{-1} + ... solving
/// eta^{-1}(R^2 + dR/dt) ... the Riccati equation of the Frechet derivative:
/// coefficients through eta^{-N}.
EtaSeries riccati_series(const ContextPtr& ctx, int N);
/// Odd/even index parts (R_odd contains R_{-1} eta^{+1}).
EtaSeries riccati_odd(const EtaSeries& R);
EtaSeries riccati_even(const EtaSeries& R);

enum class Normalization { TurningPoint, Infinity };

struct OneParamSolution {
    Transseries lambda;
    Transseries nu;
    std::vector<PrimitiveSymbol> primitives; // the adjoined antiderivatives of R_{2j-1}
    Normalization norm = Normalization::TurningPoint;
};

/// Transseries solution sum_k (alpha eta^{-1/2})^k lambda^(k) e^{k eta phi},
/// sectors 0..K, orders through eta^{-N}.
OneParamSolution one_param_solution(const ContextPtr& ctx, int K, int N,
                                    Normalization norm = Normalization::TurningPoint);

/// lambda'' - eta^2 (2 lambda^3 + t lambda + c); zero for a formal solution.
Transseries pii_residual(const Transseries& lambda);
EtaSeries pii_residual(const EtaSeries& lambda0);

/// First-order system residuals (lambda' - eta nu, nu' - eta(2l^3+tl+c)).
std::pair<Transseries, Transseries> hamiltonian_residual(const Transseries& lambda,
                                                         const Transseries& nu);

/// Formal substitution c -> c - eta^{-1}: sum_m (-eta^{-1})^m d_c^m / m!.
EtaSeries taylor_shift_c(const EtaSeries& e, int target_hi);

struct BacklundPair {
    Transseries lambda;
    Transseries nu;
};

/// The Jimbo-Miwa Backlund transformation carrying solutions with parameter c
/// to solutions with parameter c - eta^{-1}.
BacklundPair backlund_transform(const Transseries& lambda, const Transseries& nu);

/// Lambda(lambda^(0), nu^(0)) - lambda^(0)|_{c -> c-eta^{-1}}; identically zero.
EtaSeries backlund_identity_residual(const ContextPtr& ctx, int N);

/// R(c) - R(c-eta^{-1}) + d/dt log A with the exact prefactor A; zero.
EtaSeries riccati_difference_residual(const ContextPtr& ctx, int N);

/// True when every stored coefficient at order eta^{-j} is homogeneous of
/// degree base + j (sector k of the lambda transseries has base -1/3 + k/2).
bool check_sector_homogeneity(const EtaSeries& s, const Rational& base);

} // namespace pwkb
