// Numeric layer: branch-tracked continuation and quadrature on the Riemann
// surfaces, numeric Voros coefficients against the closed-form Bernoulli
// values, residue and period integrals, asymptotic expansions along the
// distinguished ray, and Borel-Pade-Laplace summation with the lateral jump.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pwkb/numerics.hpp"

#include <cmath>

using namespace pwkb;

namespace {

const double kPi = 3.14159265358979323846;
const cdbl kI(0.0, 1.0);

double rel_err(cdbl got, cdbl want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// W_{2n-1} c^{1-2n} from the closed form -(2^{1-2n}-1) B_{2n} / (2n(2n-1))
cdbl w_closed_form(int n, cdbl c) {
    static const double b2[] = {0.0, 1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0};
    double coef = -(std::pow(2.0, 1 - 2 * n) - 1.0) * b2[n] / (2 * n * (2 * n - 1));
    return coef * std::pow(c, cdbl(1 - 2 * n));
}

cdbl gamma_point(cdbl c, double rho_factor, double angle_offset = 0.0) {
    cdbl tau = turning_points(c)[0];
    return tau + rho_factor * std::abs(tau) *
                     std::polar(1.0, std::arg(tau) - kPi / 3.0 + angle_offset);
}

} // namespace

TEST_CASE("cubic roots and turning points") {
    cdbl t(1.3, -0.7), c(0.4, 0.9);
    auto r = painleve_cubic_roots(t, c);
    // Vieta for l^3 + (t/2) l + c/2
    CHECK(std::abs(r[0] + r[1] + r[2]) < 1e-12);
    CHECK(std::abs(r[0] * r[1] + r[0] * r[2] + r[1] * r[2] - t / 2.0) < 1e-12);
    CHECK(std::abs(r[0] * r[1] * r[2] + c / 2.0) < 1e-12);

    for (cdbl cc : {cdbl(0, 1), std::polar(1.0, 3.0 * kPi / 5.0), cdbl(2.0, -0.5)}) {
        auto taus = turning_points(cc);
        for (cdbl tau : taus) {
            // at t = tau the cubic has a double root lam* = -3c/(2 tau) with
            // Delta(lam*) = 0
            cdbl lam = -3.0 * cc / (2.0 * tau);
            CHECK(std::abs(2.0 * lam * lam * lam + tau * lam + cc) < 1e-10);
            CHECK(std::abs(6.0 * lam * lam + tau) < 1e-10);
            CHECK(std::abs(std::abs(tau) - 6.0 * std::pow(std::abs(cc) / 4.0, 2.0 / 3.0)) <
                  1e-12);
        }
    }
    CHECK_THROWS_AS((void)turning_points(0.0), std::domain_error);
}

TEST_CASE("branch anchoring and consistency") {
    cdbl c(0, 1);
    BranchState st = gamma_branch_state(gamma_point(c, 100.0), c);
    CHECK(st.relation_residual() < 1e-10);
    // anchor rule: lam0 ~ -(i/sqrt 2) t^{1/2}, w ~ -sqrt(2) i t^{1/2}
    cdbl rt = std::sqrt(st.pt.t);
    if (rt.real() < 0) rt = -rt;
    CHECK(rel_err(st.pt.lam0, -(kI / std::sqrt(2.0)) * rt) < 1e-2);
    CHECK(rel_err(st.pt.w, -std::sqrt(2.0) * kI * rt) < 1e-2);
    CHECK(std::abs(st.pt.q * st.pt.q - st.pt.w) < 1e-10);
    CHECK_THROWS_AS((void)gamma_branch_state(cdbl(0.1, 0.0), c), std::domain_error);
}

TEST_CASE("monodromy of the branch continuation") {
    cdbl c(0, 1);
    cdbl tau = turning_points(c)[0];
    double r = 0.5 * std::abs(tau);
    double th = std::arg(tau) - kPi / 3.0;
    BranchState anchor = gamma_branch_state(gamma_point(c, 100.0), c);
    BranchState st = anchor;
    advance_branch(st, VAR_T, tau + std::polar(r, th));
    BranchState base = st;

    auto turns = [&](const BranchState& from, double n_turns, int nseg) {
        PathSpec p;
        for (int i = 0; i < nseg; ++i)
            p.segs.push_back(Segment::arc(VAR_T, tau, r, th + n_turns * 2.0 * kPi * i / nseg,
                                          th + n_turns * 2.0 * kPi * (i + 1) / nseg));
        return continue_branch(from, p);
    };

    BranchState one = turns(base, 1.0, 4);
    // one turn around the turning point moves lam0 to the colliding root
    CHECK(std::abs(one.pt.lam0 - base.pt.lam0) > 1e-2);
    CHECK(one.relation_residual() < 1e-8);
    BranchState two = turns(base, 2.0, 8);
    CHECK(std::abs(two.pt.lam0 - base.pt.lam0) < 1e-9);
    CHECK(std::abs(two.pt.w + base.pt.w) < 1e-9);  // w -> -w
    bool q_quarter = std::abs(two.pt.q - kI * base.pt.q) < 1e-9 ||
                     std::abs(two.pt.q + kI * base.pt.q) < 1e-9;
    CHECK(q_quarter);
    BranchState four = turns(base, 4.0, 16);
    CHECK(std::abs(four.pt.lam0 - base.pt.lam0) < 1e-9);
    CHECK(std::abs(four.pt.w - base.pt.w) < 1e-9);
    CHECK(std::abs(four.pt.q + base.pt.q) < 1e-9); // q closes after 8 turns

    // step halving: the same loop split into twice as many segments
    BranchState two_fine = turns(base, 2.0, 16);
    CHECK(std::abs(two_fine.pt.w - two.pt.w) < 1e-10);
    CHECK(std::abs(two_fine.pt.lam0 - two.pt.lam0) < 1e-10);

    // a loop avoiding every turning point is trivial
    PathSpec away;
    cdbl far_c = 10.0 * std::abs(tau);
    away.segs.push_back(Segment::arc(VAR_T, far_c, 1.0, 0.0, 2.0 * kPi));
    BranchState st2 = anchor;
    advance_branch(st2, VAR_T, far_c + 1.0);
    BranchState back = continue_branch(st2, away);
    CHECK(std::abs(back.pt.lam0 - st2.pt.lam0) < 1e-10);
    CHECK(std::abs(back.pt.w - st2.pt.w) < 1e-10);
    CHECK(std::abs(back.pt.s - st2.pt.s) < 1e-6);
}

TEST_CASE("quadrature sanity on rational integrands") {
    cdbl c(0, 1);
    auto ctx = make_context();
    // approach the origin from i infinity, clear of every turning point
    BranchState st = gamma_branch_state(cdbl(0.0, 9.0), c);
    advance_branch(st, VAR_T, cdbl(0.25, 0.0));
    // oint dt/t around the origin (no turning point inside radius 1/4)
    PathSpec circ;
    circ.segs.push_back(Segment::arc(VAR_T, 0.0, 0.25, 0.0, 2.0 * kPi));
    cdbl v = path_integral(ctx->t().invert(), circ, st);
    CHECK(std::abs(v - 2.0 * kPi * kI) < 1e-12);
    // int dt over a line
    PathSpec line;
    line.segs.push_back(Segment::line(VAR_T, cdbl(0.25, 0.0), cdbl(0.25, 1.0)));
    cdbl v2 = path_integral(ctx->constant(1), line, st);
    CHECK(std::abs(v2 - cdbl(0.0, 1.0)) < 1e-13);
}

TEST_CASE("compiled scalars agree with exact evaluation") {
    auto ctx = make_context();
    auto R = riccati_series(ctx, 2);
    BranchState st = gamma_branch_state(gamma_point(cdbl(0, 1), 7.0), cdbl(0, 1));
    for (int j = -1; j <= 2; ++j) {
        AlgebraicScalar a = R.coef(j);
        CompiledScalar f(a);
        CHECK(std::abs(f.eval(st.pt) - a.eval(st.pt)) <=
              1e-12 * std::max(1.0, std::abs(a.eval(st.pt))));
    }
}

TEST_CASE("numeric W matches the Bernoulli closed form") {
    for (cdbl c : {cdbl(0, 1), std::polar(1.0, 3.0 * kPi / 5.0)}) {
        auto W = voros_numeric_W(c, 2);
        CHECK(rel_err(W[0], w_closed_form(1, c)) < 1e-8);
        CHECK(rel_err(W[1], w_closed_form(2, c)) < 1e-6);
    }
}

TEST_CASE("numeric W is stable under contour deformation") {
    cdbl c = std::polar(1.0, 3.0 * kPi / 5.0);
    auto base = voros_numeric_W(c, 1);
    VorosWOptions small, large, tilted;
    small.radius_factor = 0.25;
    large.radius_factor = 0.8;
    tilted.ray_angle_offset = 0.25;
    for (const auto& o : {small, large, tilted}) {
        auto W = voros_numeric_W(c, 1, o);
        CHECK(std::abs(W[0] - base[0]) < 1e-9 * std::abs(base[0]));
    }
}

TEST_CASE("2V - U reproduces the W coefficients and is t-independent") {
    cdbl c(0, 1);
    cdbl t1 = gamma_point(c, 2.0);
    cdbl t2 = gamma_point(c, 3.0, 0.2);
    auto vu1 = voros_numeric_VU(t1, c, 3);
    auto vu2 = voros_numeric_VU(t2, c, 3);
    for (int n : {1, 3}) {
        cdbl want = w_closed_form((n + 1) / 2, c);
        CHECK(rel_err(vu1.two_v_minus_u[n - 1], want) < 1e-6);
        CHECK(rel_err(vu2.two_v_minus_u[n - 1], want) < 1e-6);
        CHECK(std::abs(vu1.two_v_minus_u[n - 1] - vu2.two_v_minus_u[n - 1]) <
              1e-8 * std::abs(want));
        // V and U separately depend on t
        CHECK(std::abs(vu1.V[n - 1] - vu2.V[n - 1]) > 1e-6 * std::abs(want));
    }
    // even orders vanish
    CHECK(std::abs(vu1.V[1]) == 0.0);
    CHECK(std::abs(vu1.U[1]) == 0.0);
}

TEST_CASE("residue loops") {
    cdbl want = -kPi * kI / 2.0;
    for (cdbl c : {cdbl(0, 1), std::polar(1.0, 3.0 * kPi / 5.0)}) {
        double scale = std::abs(c);
        CHECK(std::abs(residue_loop_tau1(c) - want) < 1e-10 * scale);
        CHECK(std::abs(residue_loop_tau1(c, 0.25) - want) < 1e-10 * scale);
        CHECK(std::abs(residue_loop_a1(gamma_point(c, 2.0), c) - want) < 1e-10 * scale);
    }
}

TEST_CASE("periods and merging relations") {
    for (cdbl c : {cdbl(0, 1), std::polar(1.0, 3.0 * kPi / 5.0)}) {
        auto rep = check_turning_integrals(gamma_point(c, 2.0), c);
        CHECK(rel_err(rep.q0_period, kPi * kI * c) < 1e-8);
        CHECK(rel_err(rep.delta_period, -2.0 * kPi * kI * c) < 1e-8);
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(rep.merge_lhs[j] - rep.merge_rhs[j]) <
                  1e-8 * std::abs(rep.merge_rhs[j]));
    }
}

TEST_CASE("asymptotic expansions along the distinguished ray") {
    cdbl c(0, 1);
    cdbl t = 1.0e4 * std::polar(1.0, std::arg(turning_points(c)[0]) - kPi / 3.0);
    BranchState st = gamma_branch_state(t, c);
    cdbl rt = std::sqrt(t);
    if (rt.real() < 0) rt = -rt;
    const cdbl s2 = std::sqrt(2.0);
    auto tp = [&](double e) { return std::pow(t, cdbl(-e)); };
    // remainders are O(|t|^{-order}); the asserted bounds add a small absolute
    // floor for double rounding on the leading O(|t|^{1/2}) terms
    CHECK(std::abs(st.pt.lam0 - (-(kI / s2) * rt + 0.5 * c * tp(1) -
                                 (3.0 * s2 * kI / 8.0) * c * c * tp(2.5))) < 1e-11);
    CHECK(std::abs(st.pt.w - (-s2 * kI * rt + 1.5 * c * tp(1) -
                              (21.0 * s2 * kI / 16.0) * c * c * tp(2.5))) < 1e-11);

    auto ctx = make_context();
    auto R = riccati_series(ctx, 2);
    auto sol = zero_param_solution(ctx, 4);
    CHECK(std::abs(CompiledScalar(R.coef(0)).eval(st.pt) -
                   (-0.25 * tp(1) + (9.0 * s2 * kI / 16.0) * c * tp(2.5))) < 1e-13);
    CHECK(std::abs(CompiledScalar(R.coef(1)).eval(st.pt) -
                   (-(17.0 * s2 * kI / 64.0) * tp(2.5))) < 1e-13);
    CHECK(std::abs(CompiledScalar(R.coef(2)).eval(st.pt)) < 100.0 * std::pow(1e4, -4.0));
    CHECK(std::abs(CompiledScalar(sol.lambda.coef(2)).eval(st.pt) -
                   (-(s2 * kI / 16.0) * tp(2.5))) < 1e-14);
    CHECK(std::abs(CompiledScalar(sol.lambda.coef(4)).eval(st.pt)) <
          100.0 * std::pow(1e4, -5.5));
    CHECK(std::abs(CompiledScalar(sol.nu.coef(1)).eval(st.pt) -
                   (-(kI / (2.0 * s2)) / rt - 0.5 * c * tp(2) +
                    (15.0 * s2 * kI / 16.0) * c * c * tp(3.5))) < 1e-16);
    CHECK(std::abs(CompiledScalar(sol.nu.coef(3)).eval(st.pt) -
                   ((5.0 * s2 * kI / 32.0) * tp(3.5))) < 1e-18);
}

TEST_CASE("exact Pade approximants") {
    // e^z, [1/1]: (1 + z/2) / (1 - z/2)
    std::vector<Rational> ez = {1, 1, Rational(1, 2)};
    Pade pd = pade_exact(ez, 1, 1);
    CHECK(pd.den[0] == 1);
    CHECK(pd.den[1] == Rational(-1, 2));
    CHECK(pd.num[0] == 1);
    CHECK(pd.num[1] == Rational(1, 2));
    CHECK_THROWS_AS((void)pade_exact(ez, 2, 2), std::invalid_argument);
}

TEST_CASE("polynomial roots") {
    // (z - 1)(z - 2i)(z + 3) = z^3 + (2 - 2i) z^2 + (-3 - 4i) z + 6i
    std::vector<cdbl> c = {cdbl(0, 6), cdbl(-3, -4), cdbl(2, -2), 1.0};
    auto r = polynomial_roots(c);
    REQUIRE(r.size() == 3);
    for (cdbl want : {cdbl(1, 0), cdbl(0, 2), cdbl(-3, 0)}) {
        double best = 1e300;
        for (cdbl got : r) best = std::min(best, std::abs(got - want));
        CHECK(best < 1e-10);
    }
}

TEST_CASE("Borel poles sit at +-2 pi i") {
    auto ser = p_voros_series(25);
    cdbl y(0, 3);
    for (int ord : {10, 20}) {
        auto bs = borel_pade_laplace(ser, y, -kPi / 2.0 + 0.2, ord);
        double best = 1e300;
        for (cdbl p : bs.borel_poles) best = std::min(best, std::abs(p - 2.0 * kPi * kI));
        CHECK(best < 0.03 * 2.0 * kPi);
        best = 1e300;
        for (cdbl p : bs.borel_poles) best = std::min(best, std::abs(p + 2.0 * kPi * kI));
        CHECK(best < 0.03 * 2.0 * kPi);
    }
    // summation refines with order
    cdbl v10 = borel_pade_laplace(ser, y, -kPi / 2.0 + 0.2, 10).value;
    cdbl v20 = borel_pade_laplace(ser, y, -kPi / 2.0 + 0.2, 20).value;
    CHECK(std::abs(v10 - v20) < 1e-8);
    CHECK_THROWS(borel_pade_laplace(ser, y, -kPi / 2.0, 20)); // pole on the ray
}

TEST_CASE("lateral jump of the Borel sum") {
    auto ser = p_voros_series(25);
    cdbl y(0, 3); // |c eta| = 3 on the singular direction
    cdbl e2 = std::exp(2.0 * kPi * kI * y);
    cdbl jr = lateral_jump_ratio(ser, y, 20);
    CHECK(std::abs(jr - (1.0 + e2)) < 1e-3);
    // sharp version: the jump itself matches e^{2 pi i c eta} to a few percent
    CHECK(std::abs((jr - 1.0) - e2) < 0.02 * std::abs(e2));
    // jump is stable under the lateral offset angle
    cdbl jr2 = lateral_jump_ratio(ser, y, 20, 0.35);
    CHECK(std::abs((jr2 - 1.0) - e2) < 0.02 * std::abs(e2));
    // zero series: both lateral sums vanish
    ZSeries zser(10);
    CHECK(std::abs(lateral_jump_ratio(zser, y, 8) - 1.0) < 1e-14);
}

TEST_CASE("numeric connection ratio per normalization") {
    cdbl y(0, 3);
    cdbl e2 = std::exp(2.0 * kPi * kI * y);
    auto inf = numeric_connection_ratio(Normalization::Infinity, y, 20);
    CHECK(std::abs(inf.alpha_ratio - 1.0) < 1e-3);
    CHECK(inf.max_inconsistency < 1e-12);
    auto tp = numeric_connection_ratio(Normalization::TurningPoint, y, 20);
    CHECK(std::abs(tp.alpha_ratio - (1.0 + e2)) < 1e-3);
    CHECK(tp.max_inconsistency < 1e-12);
    // sharp version: the turning-point ratio resolves the e^{2 pi i c eta}
    // correction itself
    CHECK(std::abs((tp.alpha_ratio - 1.0) - e2) < 0.02 * std::abs(e2));
}

TEST_CASE("parallel sweep agrees with the serial reference") {
    std::vector<cdbl> cs;
    for (int k = 0; k < 8; ++k)
        cs.push_back(std::polar(1.0 + 0.1 * k, 0.3 + 0.2 * k));
    auto serial = w1_sweep(cs, false);
    auto parallel = w1_sweep(cs, true);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
        CHECK(serial[i] == parallel[i]);
        CHECK(rel_err(serial[i], w_closed_form(1, cs[i])) < 1e-8);
    }
}
