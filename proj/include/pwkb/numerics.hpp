#pragma once
// Branch-tracked numeric evaluation on the Riemann surfaces of lambda_0 /
// sqrt(Delta) (t-plane) and sqrt(Q_0) (x-plane), adaptive Gauss-Kronrod
// path and contour quadrature, numeric Voros coefficients (W via Gamma_infty;
// V and U via gamma_infty and the t-path), residue and period checks, and
// Borel-Pade-Laplace summation with measurement of the lateral (Stokes) jump.

#include "pwkb/sl2.hpp"
#include "pwkb/voros.hpp"

#include <array>
#include <complex>
#include <functional>

namespace pwkb {

using cdbl = std::complex<double>;

/// Roots of the cubic 2 l^3 + t l + c = 0 (Durand-Kerner + Newton polish).
std::array<cdbl, 3> painleve_cubic_roots(cdbl t, cdbl c);

/// P-turning points tau_j = -6 (c/4)^{2/3} omega^j, omega = e^{2 pi i/3},
/// j = 1, 2, 3 (principal branch of the 2/3 power); throws for c = 0.
std::array<cdbl, 3> turning_points(cdbl c);

/// A point on the Riemann surface: consistent numeric values of all
/// generators.  Continuation keeps |relation residual| below tolerance and is
/// verified to be homotopy/step-halving stable by the test suite.
struct BranchState {
    BranchPoint pt;
    double relation_residual() const; // scaled max residual of the relations
    void assert_consistent(double tol = 1e-8) const;
};

/// Branch state at a base point t with |t| well beyond the turning points,
/// anchored by the asymptotics along the distinguished Stokes curve:
/// lam0 ~ -(i/sqrt 2) t^{1/2} and w = R_{-1} ~ -sqrt(2) i t^{1/2} with
/// Re t^{1/2} > 0; q is the principal square root of w.  x is parked far out
/// with s ~ x.
BranchState gamma_branch_state(cdbl t, cdbl c);

/// Re-anchor the x coordinate: move x (without continuation) to x_far and
/// choose the branch s ~ x there (the branch with sqrt(Q_0) ~ x^2).
void anchor_x(BranchState& st, cdbl x_far);

/// One adaptive continuation move of the given base variable (VAR_T or
/// VAR_X) to z_target: cubic root tracking with an implicit-derivative
/// predictor for lam0 and sign-continuous square roots for w, q, s; steps are
/// bisected until the root choice is unambiguous.  Throws on root collision.
void advance_branch(BranchState& st, int var, cdbl z_target);

/// Path segments in the t- or x-plane.  Ray and SqrtLine reach a singular
/// endpoint at parameter u = 0 (never evaluated: Gauss-Kronrod nodes are
/// interior); their regular end is u = 1.
struct Segment {
    enum Kind { Line, Arc, Ray, SqrtLine } kind = Line;
    int var = VAR_T;
    cdbl z0{}, z1{};   // Line: z0 + (z1-z0) u;  SqrtLine: z0 + (z1-z0) u^2
    cdbl center{};     // Arc: center + radius e^{i(a0 + (a1-a0) u)}
    double radius = 0, a0 = 0, a1 = 0;
    cdbl anchor{}, dir{}; // Ray: anchor + dir rho0 / u^2  (u = 1 near end)
    double rho0 = 0;

    cdbl point(double u) const;
    cdbl dpoint(double u) const; // dz/du

    static Segment line(int var, cdbl a, cdbl b);
    static Segment arc(int var, cdbl center, double radius, double a0, double a1);
    static Segment ray(int var, cdbl anchor, cdbl dir, double rho0);
    static Segment sqrt_line(int var, cdbl singular_end, cdbl regular_end);
};

/// Ordered segments; consecutive segments must share endpoints.  clearance
/// documents the declared distance kept from turning points.
struct PathSpec {
    std::vector<Segment> segs;
    double clearance = 0.0;
};

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_floor = 0.0; // scale floor for the relative test
    int max_depth = 40;
};

using Integrand = std::function<cdbl(const BranchPoint&)>;

/// Integral of f dz over one segment from parameter u_from to u_to (either
/// order); st must hold the branch at u_from and is marched to u_to (or to
/// the last interior node when the target endpoint is singular).
cdbl integrate_segment(const Segment& seg, const Integrand& f, BranchState& st,
                       double u_from, double u_to, const QuadOptions& opt);

/// Continuation along a whole path (u = 0 -> 1 per segment); used for the
/// monodromy and step-halving checks.
BranchState continue_branch(const BranchState& start, const PathSpec& path);

/// Integral along a whole path (u = 0 -> 1 per segment).
cdbl path_integral_fn(const Integrand& f, const PathSpec& path, BranchState st,
                      const QuadOptions& opt = {});
cdbl path_integral(const AlgebraicScalar& e, const PathSpec& path, BranchState st,
                   const QuadOptions& opt = {});

/// Fast numeric evaluator for a tower element: snapshots the numerator terms
/// and denominator atoms once, then evaluates in doubles per point.
class CompiledScalar {
public:
    CompiledScalar() = default;
    explicit CompiledScalar(const AlgebraicScalar& a);
    cdbl eval(const BranchPoint& p) const;
    cdbl operator()(const BranchPoint& p) const { return eval(p); }

private:
    struct Term {
        double coef;
        ExpVec e;
    };
    std::vector<Term> num_;
    struct Den {
        std::vector<Term> poly;
        int exp;
    };
    std::vector<Den> den_;
};

/// Simple turning points a_1, a_2 of SL_II: roots of x^2 + 2 lam0 x +
/// 3 lam0^2 + t for the branch of lam0 carried by the state;
/// a_{1,2} = -lam0 -+ sqrt(-2 lam0^2 - t) (a_1 the root that merges with the
/// double turning point x = lam0 at t = tau_1).
struct SLTurning {
    cdbl a1, a2;
};
SLTurning sl2_turning_points(const BranchState& st);

// ------------------------------------------------------------------ contours

struct VorosWOptions {
    double radius_factor = 0.5;     // circle radius around tau_1, in |tau_1|
    double ray_angle_offset = 0.0;  // homotopy freedom of the ray to infinity
    double anchor_rho_factor = 100.0;
    QuadOptions quad;
};

/// (1/2) int_{Gamma_infty} R_{2n-1} dt for n = 1..n_max, realized as
/// (open ray integral) + (1/2)(circle around tau_1), branch-tracked
/// throughout; result[n-1] should equal W_{2n-1} c^{1-2n}.
std::vector<cdbl> voros_numeric_W(cdbl c, int n_max, const VorosWOptions& opt = {});

struct VUOptions {
    double radius_factor = 0.45;
    double ray_angle_offset = 0.0; // applied to both the x-ray and the U t-ray
    QuadOptions quad;
};

/// V^(0)_n = (1/2) int_{gamma_infty} S^(0)_n dx and
/// U^(0)_n = int_infty^t lambda^(0)_{n+1} dt for odd n <= n_max, plus the
/// combination 2V - U (t-independent, equal to the W series coefficients).
/// Entries at even n are zero.
struct VUNumeric {
    std::vector<cdbl> V, U, two_v_minus_u; // index n-1 holds order n
};
VUNumeric voros_numeric_VU(cdbl t, cdbl c, int n_max, const VUOptions& opt = {});

/// Contour integral of R_0 around tau_1 (two branch-tracked turns, the
/// double circle of Gamma_t); equals 4 pi i Res = -pi i/2.
cdbl residue_loop_tau1(cdbl c, double radius_factor = 0.4, const QuadOptions& opt = {});

/// Contour integral of S^(0)_0 around a_1 (single turn); equals -pi i/2.
cdbl residue_loop_a1(cdbl t, cdbl c, const QuadOptions& opt = {});

/// int_{tau_1}^{tau_2} sqrt(Delta) dt along the degenerate Stokes region
/// (chord with endpoint desingularization), branch anchored on Gamma;
/// equals -2 pi i c near arg c = pi/2.
cdbl delta_period(cdbl c, const QuadOptions& opt = {});

struct TurningIntegralReport {
    cdbl q0_period;               // (1/2) oint_gamma sqrt(Q_0) dx  (= pi i c)
    cdbl delta_period;            // int_{tau_1}^{tau_2} sqrt(Delta) dt (= -2 pi i c)
    std::array<cdbl, 2> merge_lhs; // int_{a_j}^{lam0} sqrt(Q_0) dx
    std::array<cdbl, 2> merge_rhs; // (1/2) int_{tau_j}^{t} sqrt(Delta) dt
};
TurningIntegralReport check_turning_integrals(cdbl t, cdbl c, const QuadOptions& opt = {});

// --------------------------------------------------------- Borel-Pade-Laplace

/// Exact [L/M] Pade approximant over Q of a power series; den[0] = 1.
struct Pade {
    std::vector<Rational> num, den;
};
Pade pade_exact(const std::vector<Rational>& coeffs, int L, int M);

/// All complex roots of a polynomial given by ascending coefficients.
std::vector<cdbl> polynomial_roots(std::vector<cdbl> coeffs);

struct BorelSummation {
    cdbl value;                   // Laplace integral along the chosen ray
    std::vector<cdbl> borel_poles; // poles of the Pade approximant (zeta-plane)
};

/// Borel sum of the series sum w_n z^n at z = 1/y: Laplace integral along
/// arg zeta = ray_angle of the [L/M] Pade approximant of the Borel transform
/// sum w_n zeta^{n-1}/(n-1)! built from the first `orders` coefficients.
/// Throws when a Pade pole sits on the integration ray.
BorelSummation borel_pade_laplace(const ZSeries& series, cdbl y, double ray_angle,
                                  int orders, const QuadOptions& opt = {});

/// S_-[e^W]/S_+[e^W]: ratio of the exponentials of the two lateral Borel sums
/// (rays on either side of the singular direction -arg y).
cdbl lateral_jump_ratio(const ZSeries& series, cdbl y, int orders,
                        double delta_angle = 0.2, const QuadOptions& opt = {});

/// Numeric instantiation of the Stokes-multiplier token tables: tokens are
/// replaced by lateral Borel sums at y = c eta and alpha~ is solved from
/// s_j(alpha) = s'_j(alpha~) for every alpha-dependent multiplier.
struct NumericConnection {
    cdbl alpha_ratio;        // alpha~ / alpha
    double max_inconsistency; // worst relative disagreement across the six s_j
};
NumericConnection numeric_connection_ratio(Normalization norm, cdbl y, int orders,
                                           double delta_angle = 0.2);

// -------------------------------------------------------------------- sweeps

/// Numeric W_1 over a list of c values (each job owns its context and branch
/// states); parallel=true distributes over OpenMP threads, parallel=false is
/// the serial reference.
std::vector<cdbl> w1_sweep(const std::vector<cdbl>& cs, bool parallel);

} // namespace pwkb
