#pragma once
// Stokes geometry tracing: P-Stokes curves of the Painleve equation in the
// t-plane (level sets Im int sqrt(Delta) dt = 0 from the P-turning points
// tau_j) and Stokes curves of the associated linear problem in the x-plane
// (Im int sqrt(Q_0) dx = 0 from a_1, a_2 and the double point x = lam0),
// with sign labels, analytic degeneration detection via the period integral,
// and deterministic SVG / CSV / JSON export.

#include "pwkb/numerics.hpp"

#include <string>

namespace pwkb {

struct TurningPointInfo {
    cdbl z;
    int multiplicity = 1; // 1 = simple, 2 = double
};

struct StokesCurve {
    int source = 0;     // index into StokesGraph::turning_points
    int direction = 0;  // outgoing ray index at the source
    int sign = +1;      // sign of Re int sqrt(potential): +1 / -1
    bool degenerate = false; // terminated inside another turning point's clearance
    int target = -1;         // the turning point hit, when degenerate
    std::vector<cdbl> points;
};

struct StokesGraph {
    std::vector<TurningPointInfo> turning_points;
    std::vector<StokesCurve> curves;
    double scale = 1.0; // geometry scale used for box/step/clearance
    bool has_degeneration() const;
    int curve_count_from(int tp) const;
};

struct TraceOptions {
    double step_factor = 1e-3;      // RK4 arclength step, in units of scale
    double box_factor = 4.0;        // tracing stops beyond box_factor * scale
    double clearance_factor = 0.02; // degeneracy capture radius, in scale units
    double seed_factor = 0.01;      // seed offset from the turning point
    double im_tol = 1e-8;           // bound on the projected phase residual
    bool parallel = false;          // trace curves over OpenMP threads
};

/// P-Stokes graph for parameter c != 0: three curves from each of the three
/// P-turning points (the on-sheet triple of the five local rays of the
/// (t - tau)^{5/4} model), signs labelled so that the curve leaving tau_j
/// towards infinity in the direction arg tau_j - pi/3 carries the minus sign.
StokesGraph trace_p_stokes(cdbl c, const TraceOptions& opt = {});

/// Stokes graph of the linear problem at (t, c) with Delta != 0: three curves
/// from each simple turning point a_1, a_2 and four from the double turning
/// point x = lam0; the branch is oriented so that Re int_{a_1}^{a_2} sqrt(Q_0)
/// is negative (the degenerating curve carries the minus sign).
StokesGraph trace_sl2_stokes(cdbl t, cdbl c, const TraceOptions& opt = {});

/// Critical angles theta in (arg_lo, arg_hi) where the turning-point period
/// int_{tau_1}^{tau_2} sqrt(Delta) dt at c = c_magnitude e^{i theta} becomes
/// real (Im period = 0), located by bisection to tolerance tol.
std::vector<double> detect_degeneration(double c_magnitude, double arg_lo,
                                        double arg_hi, double tol = 1e-10);

/// Deterministic exports (byte-identical for identical graphs).
std::string export_svg(const StokesGraph& g);
std::string export_csv(const StokesGraph& g);
nlohmann::json export_json(const StokesGraph& g);

} // namespace pwkb
