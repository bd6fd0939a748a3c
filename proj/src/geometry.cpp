#include "pwkb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace pwkb {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cdbl kI(0.0, 1.0);

double ang_dist(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return std::min(d, 2.0 * kPi - d);
}

// The phase field: sqrt(Delta) in the t-plane, sqrt(Q_0) in the x-plane.
cdbl field_value(const BranchState& st, int var) {
    return var == VAR_T ? st.pt.w : (st.pt.x - st.pt.lam0) * st.pt.s;
}

struct SeedRay {
    cdbl z0;      // seed point
    double phi;   // outgoing direction in the plane
    BranchState st; // branch at the seed
};

struct TraceSetup {
    int var = VAR_T;
    std::vector<TurningPointInfo> tps;
    std::vector<std::vector<SeedRay>> rays; // per turning point
    double scale = 1.0;
    cdbl center{};
};

// Trace one level-set curve Im Phi = 0 from a seed by unit-speed RK4 on
// dz/ds = sigma conj(f)/|f| with Newton projection back onto the level set.
StokesCurve trace_curve(const TraceSetup& su, int tp, int ray_idx,
                        const TraceOptions& opt) {
    const SeedRay& ray = su.rays[tp][ray_idx];
    StokesCurve cv;
    cv.source = tp;
    cv.direction = ray_idx;

    BranchState st = ray.st;
    cdbl z = ray.z0;
    cdbl f0 = field_value(st, su.var);
    cdbl step_dir = std::conj(f0) / std::abs(f0);
    double sigma = ((std::conj(step_dir) * std::polar(1.0, ray.phi)).real() >= 0.0)
                       ? 1.0
                       : -1.0;
    cv.sign = (int)sigma;

    double h = opt.step_factor * su.scale;
    double box = opt.box_factor * su.scale;
    double clear2 = opt.clearance_factor * su.scale;
    int max_steps = (int)(20.0 * box / h) + 16;
    cdbl phi_acc = 0.0; // running int f dz, real on the exact level set

    cv.points.push_back(su.tps[tp].z);
    cv.points.push_back(z);
    for (int step = 0; step < max_steps; ++step) {
        auto slope = [&](BranchState& s, cdbl zz) {
            advance_branch(s, su.var, zz);
            cdbl f = field_value(s, su.var);
            return sigma * std::conj(f) / std::abs(f);
        };
        BranchState s1 = st;
        cdbl k1 = sigma * std::conj(field_value(st, su.var)) /
                  std::abs(field_value(st, su.var));
        BranchState s2 = st;
        cdbl k2 = slope(s2, z + 0.5 * h * k1);
        BranchState s3 = st;
        cdbl k3 = slope(s3, z + 0.5 * h * k2);
        BranchState s4 = st;
        cdbl k4 = slope(s4, z + h * k3);
        cdbl z_new = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        (void)s1;
        // phase increment along the chord (Simpson), capturing drift
        BranchState sm = st;
        advance_branch(sm, su.var, 0.5 * (z + z_new));
        cdbl fm = field_value(sm, su.var);
        BranchState se = sm;
        advance_branch(se, su.var, z_new);
        cdbl fe = field_value(se, su.var);
        cdbl fb = field_value(st, su.var);
        phi_acc += ((z_new - z) / 6.0) * (fb + 4.0 * fm + fe);
        // Newton projection onto Im Phi = 0
        double drift = phi_acc.imag();
        cdbl corr = -kI * drift / fe;
        z_new += corr;
        advance_branch(se, su.var, z_new);
        phi_acc -= kI * drift;
        if (std::abs(phi_acc.imag()) > opt.im_tol * std::max(1.0, std::abs(phi_acc)))
            throw std::runtime_error("level-set projection lost the curve");
        st = se;
        z = z_new;
        cv.points.push_back(z);
        bool stop = false;
        for (int j = 0; j < (int)su.tps.size(); ++j) {
            if (j == tp && (int)cv.points.size() < 8) continue;
            if (j == tp) continue;
            if (std::abs(z - su.tps[j].z) < clear2) {
                cv.degenerate = true;
                cv.target = j;
                cv.points.push_back(su.tps[j].z);
                stop = true;
                break;
            }
        }
        if (stop || std::abs(z - su.center) > box) break;
    }
    // sign from the running phase direction: Re Phi grows with sign sigma
    return cv;
}

StokesGraph run_trace(const TraceSetup& su, const TraceOptions& opt) {
    StokesGraph g;
    g.turning_points = su.tps;
    g.scale = su.scale;
    std::vector<std::pair<int, int>> jobs;
    for (int tp = 0; tp < (int)su.rays.size(); ++tp)
        for (int r = 0; r < (int)su.rays[tp].size(); ++r) jobs.push_back({tp, r});
    std::vector<StokesCurve> out(jobs.size());
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
    for (int i = 0; i < (int)jobs.size(); ++i) {
        try {
            out[(size_t)i] = trace_curve(su, jobs[(size_t)i].first,
                                         jobs[(size_t)i].second, opt);
        } catch (...) {
#pragma omp critical
            err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    g.curves = std::move(out);
    return g;
}

// flip every sign at one turning point (the opposite sqrt branch there)
void flip_signs_at(StokesGraph& g, int tp) {
    for (auto& cv : g.curves)
        if (cv.source == tp) cv.sign = -cv.sign;
}

} // namespace

bool StokesGraph::has_degeneration() const {
    for (const auto& cv : curves)
        if (cv.degenerate) return true;
    return false;
}

int StokesGraph::curve_count_from(int tp) const {
    int n = 0;
    for (const auto& cv : curves)
        if (cv.source == tp) ++n;
    return n;
}

StokesGraph trace_p_stokes(cdbl c, const TraceOptions& opt) {
    auto taus = turning_points(c);
    TraceSetup su;
    su.var = VAR_T;
    su.scale = std::abs(taus[0]);
    su.center = 0.0;
    for (cdbl tau : taus) su.tps.push_back({tau, 1});
    su.rays.resize(3);

    double rho0 = opt.seed_factor * su.scale;
    for (int j = 0; j < 3; ++j) {
        cdbl tau = taus[(size_t)j];
        cdbl lam_star = -3.0 * c / (2.0 * tau);
        // local model: Delta ~ kappa u with u = (t - tau)^{1/2},
        // Phi ~ (4/5) sqrt(kappa) u^{5/2}; five rays on the double cover
        cdbl kappa = 2.0 * std::sqrt(6.0) * kI * lam_star;
        double psi0 = -std::arg(kappa) / 5.0;
        struct Local {
            double psi, phi;
        };
        std::vector<Local> rays5;
        for (int k = 0; k < 5; ++k) {
            double psi = psi0 + 2.0 * kPi * k / 5.0;
            rays5.push_back({psi, std::fmod(2.0 * psi + 4.0 * kPi, 2.0 * kPi)});
        }
        // keep the on-sheet triple: the ray closest to the outgoing direction
        // arg tau - pi/3 (the curve heading to infinity) and its two
        // u-plane neighbours
        double out_dir = std::arg(tau) - kPi / 3.0;
        int k_star = 0;
        for (int k = 1; k < 5; ++k)
            if (ang_dist(rays5[(size_t)k].phi, out_dir) <
                ang_dist(rays5[(size_t)k_star].phi, out_dir))
                k_star = k;
        for (int dk : {-1, 0, 1}) {
            const Local& L = rays5[(size_t)((k_star + dk + 5) % 5)];
            SeedRay ray;
            cdbl u = std::sqrt(rho0) * std::polar(1.0, L.psi);
            ray.z0 = tau + u * u;
            ray.phi = std::arg(u * u);
            // branch from the local model, then polished on the exact surface
            cdbl a = kI / std::sqrt(6.0); // a^2 = -1/6
            cdbl lam_guess = lam_star + a * u;
            auto roots = painleve_cubic_roots(ray.z0, c);
            cdbl lam = roots[0];
            for (cdbl r : roots)
                if (std::abs(r - lam_guess) < std::abs(lam - lam_guess)) lam = r;
            BranchState st;
            st.pt.t = ray.z0;
            st.pt.c = c;
            st.pt.lam0 = lam;
            cdbl w_local = std::sqrt(kappa) * std::sqrt(u);
            cdbl D = 6.0 * lam * lam + ray.z0;
            cdbl w = std::sqrt(D);
            if (std::abs(w - w_local) > std::abs(w + w_local)) w = -w;
            st.pt.w = w;
            st.pt.q = std::sqrt(w);
            st.pt.x = cdbl(1e8, 0.0);
            cdbl s2v = st.pt.x * st.pt.x + 2.0 * lam * st.pt.x + 3.0 * lam * lam +
                       ray.z0;
            cdbl s = std::sqrt(s2v);
            if (std::abs(s - st.pt.x) > std::abs(s + st.pt.x)) s = -s;
            st.pt.s = s;
            st.assert_consistent(1e-6);
            ray.st = st;
            su.rays[(size_t)j].push_back(ray);
        }
    }
    StokesGraph g = run_trace(su, opt);
    // orient the branch at each turning point so the outgoing curve to
    // infinity (the normalization direction) carries the minus sign
    for (int j = 0; j < 3; ++j)
        if (g.curves[(size_t)(3 * j + 1)].sign > 0) flip_signs_at(g, j);
    return g;
}

StokesGraph trace_sl2_stokes(cdbl t, cdbl c, const TraceOptions& opt) {
    // branch data at t, continued from the distinguished anchor
    cdbl tau = turning_points(c)[0];
    cdbl dir0 = std::polar(1.0, std::arg(tau) - kPi / 3.0);
    BranchState base = gamma_branch_state(tau + dir0 * (100.0 * std::abs(tau)), c);
    advance_branch(base, VAR_T, t);
    auto [a1, a2] = sl2_turning_points(base);
    cdbl lam = base.pt.lam0;
    if (std::abs(base.pt.w) < 1e-10)
        throw std::domain_error("Delta vanishes: turning points merge");

    TraceSetup su;
    su.var = VAR_X;
    su.scale = std::max({std::abs(a1 - a2), std::abs(a1 - lam), std::abs(a2 - lam)});
    su.center = (a1 + a2 + lam) / 3.0;
    su.tps = {{a1, 1}, {a2, 1}, {lam, 2}};
    su.rays.resize(3);

    double rho0 = opt.seed_factor * su.scale;
    auto seed_at = [&](cdbl x0) {
        BranchState st = base;
        anchor_x(st, x0 + 50.0 * su.scale * (x0 - su.center) /
                          std::max(std::abs(x0 - su.center), 1e-12));
        advance_branch(st, VAR_X, x0);
        return st;
    };
    // simple turning points: Phi ~ (2/3) sqrt(Q0'(a)) (x-a)^{3/2}, 3 rays
    const cdbl as[2] = {a1, a2};
    for (int j = 0; j < 2; ++j) {
        cdbl a = as[j], other = as[1 - j];
        cdbl q0p = (a - lam) * (a - lam) * (a - other); // Q0'(a)
        double base_ang = -std::arg(q0p) / 3.0;
        for (int k = 0; k < 3; ++k) {
            SeedRay ray;
            ray.phi = base_ang + 2.0 * kPi * k / 3.0;
            ray.z0 = a + std::polar(rho0, ray.phi);
            ray.st = seed_at(ray.z0);
            su.rays[(size_t)j].push_back(ray);
        }
    }
    // double turning point: Phi ~ (w/2)(x-lam)^2, 4 rays
    {
        double base_ang = -std::arg(base.pt.w) / 2.0;
        for (int k = 0; k < 4; ++k) {
            SeedRay ray;
            ray.phi = base_ang + kPi * k / 2.0;
            ray.z0 = lam + std::polar(rho0, ray.phi);
            ray.st = seed_at(ray.z0);
            su.rays[2].push_back(ray);
        }
    }
    StokesGraph g = run_trace(su, opt);
    // orient so that Re int_{a_1}^{a_2} sqrt(Q_0) < 0: the ray from a_1
    // towards a_2 must carry the minus sign (and the mirror ray at a_2)
    for (int j = 0; j < 2; ++j) {
        double towards = std::arg(as[1 - j] - as[j]);
        int best_k = 0;
        for (int k = 1; k < 3; ++k)
            if (ang_dist(su.rays[(size_t)j][(size_t)k].phi, towards) <
                ang_dist(su.rays[(size_t)j][(size_t)best_k].phi, towards))
                best_k = k;
        if (g.curves[(size_t)(3 * j + best_k)].sign > 0) flip_signs_at(g, j);
    }
    return g;
}

std::vector<double> detect_degeneration(double c_magnitude, double arg_lo,
                                        double arg_hi, double tol) {
    if (!(c_magnitude > 0.0)) throw std::domain_error("need |c| > 0");
    if (!(arg_hi > arg_lo)) throw std::invalid_argument("empty sweep range");
    auto im_period = [&](double th) {
        return delta_period(std::polar(c_magnitude, th)).imag();
    };
    const int n_grid = 48;
    std::vector<double> roots;
    double prev_th = arg_lo, prev_v = im_period(arg_lo);
    for (int i = 1; i <= n_grid; ++i) {
        double th = arg_lo + (arg_hi - arg_lo) * i / n_grid;
        double v = im_period(th);
        if (prev_v == 0.0) roots.push_back(prev_th);
        else if (v * prev_v < 0.0) {
            double lo = prev_th, hi = th, flo = prev_v;
            while (hi - lo > tol * 0.5) {
                double mid = 0.5 * (lo + hi);
                double fm = im_period(mid);
                if (fm == 0.0) { lo = hi = mid; break; }
                if (fm * flo < 0.0) hi = mid;
                else { lo = mid; flo = fm; }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_th = th;
        prev_v = v;
    }
    return roots;
}

// ------------------------------------------------------------------- exports

namespace {

std::string fmt(double v) {
    char buf[40];
    if (v == 0.0) v = 0.0; // normalize -0
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// decimated polyline (every 8th sample plus the last)
std::vector<cdbl> thin(const std::vector<cdbl>& pts) {
    std::vector<cdbl> out;
    for (size_t i = 0; i < pts.size(); i += 8) out.push_back(pts[i]);
    if (!pts.empty() && (pts.size() - 1) % 8 != 0) out.push_back(pts.back());
    return out;
}

} // namespace

std::string export_svg(const StokesGraph& g) {
    double R = 0.0;
    for (const auto& tp : g.turning_points) R = std::max(R, std::abs(tp.z));
    R = std::max(R + 2.0 * g.scale, 4.0 * g.scale);
    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\""
      << fmt(-R) << " " << fmt(-R) << " " << fmt(2 * R) << " " << fmt(2 * R)
      << "\">\n<rect x=\"" << fmt(-R) << "\" y=\"" << fmt(-R) << "\" width=\""
      << fmt(2 * R) << "\" height=\"" << fmt(2 * R) << "\" fill=\"white\"/>\n";
    // curves (y flipped so the upper half-plane is up)
    int cid = 0;
    for (const auto& cv : g.curves) {
        const char* color = cv.degenerate ? "#007700" : (cv.sign > 0 ? "#0033cc" : "#cc2200");
        s << "<polyline id=\"curve" << cid++ << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"" << fmt(0.012 * g.scale) << "\" points=\"";
        bool first = true;
        for (cdbl p : thin(cv.points)) {
            if (!first) s << " ";
            first = false;
            s << fmt(p.real()) << "," << fmt(-p.imag());
        }
        s << "\"/>\n";
        // sign glyph near the middle of the curve
        if (cv.points.size() > 4) {
            cdbl m = cv.points[cv.points.size() / 2];
            s << "<text x=\"" << fmt(m.real() + 0.06 * g.scale) << "\" y=\""
              << fmt(-m.imag()) << "\" font-size=\"" << fmt(0.18 * g.scale)
              << "\">" << (cv.sign > 0 ? "+" : "-") << "</text>\n";
        }
    }
    // cuts: dashed segments from each turning point away from the centroid
    cdbl centroid = 0.0;
    for (const auto& tp : g.turning_points) centroid += tp.z;
    centroid /= (double)g.turning_points.size();
    for (const auto& tp : g.turning_points) {
        cdbl d = tp.z - centroid;
        double n = std::abs(d);
        cdbl dir = n > 1e-12 ? d / n : cdbl(1.0, 0.0);
        cdbl e = tp.z + dir * (R - std::abs(tp.z));
        s << "<line x1=\"" << fmt(tp.z.real()) << "\" y1=\"" << fmt(-tp.z.imag())
          << "\" x2=\"" << fmt(e.real()) << "\" y2=\"" << fmt(-e.imag())
          << "\" stroke=\"#999999\" stroke-width=\"" << fmt(0.008 * g.scale)
          << "\" stroke-dasharray=\"" << fmt(0.05 * g.scale) << ","
          << fmt(0.05 * g.scale) << "\"/>\n";
    }
    for (const auto& tp : g.turning_points) {
        s << "<circle cx=\"" << fmt(tp.z.real()) << "\" cy=\"" << fmt(-tp.z.imag())
          << "\" r=\"" << fmt(0.04 * g.scale) << "\" fill=\"black\"/>\n";
        if (tp.multiplicity > 1)
            s << "<circle cx=\"" << fmt(tp.z.real()) << "\" cy=\""
              << fmt(-tp.z.imag()) << "\" r=\"" << fmt(0.07 * g.scale)
              << "\" fill=\"none\" stroke=\"black\" stroke-width=\""
              << fmt(0.01 * g.scale) << "\"/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string export_csv(const StokesGraph& g) {
    std::ostringstream s;
    s << "curve_id,source,direction,sign,re,im\n";
    for (size_t i = 0; i < g.curves.size(); ++i) {
        const auto& cv = g.curves[i];
        for (cdbl p : thin(cv.points))
            s << i << "," << cv.source << "," << cv.direction << "," << cv.sign
              << "," << fmt(p.real()) << "," << fmt(p.imag()) << "\n";
    }
    return s.str();
}

nlohmann::json export_json(const StokesGraph& g) {
    nlohmann::json j;
    j["scale"] = g.scale;
    j["degenerate"] = g.has_degeneration();
    j["turning_points"] = nlohmann::json::array();
    for (const auto& tp : g.turning_points)
        j["turning_points"].push_back(
            {{"re", tp.z.real()}, {"im", tp.z.imag()}, {"multiplicity", tp.multiplicity}});
    j["curves"] = nlohmann::json::array();
    for (const auto& cv : g.curves) {
        nlohmann::json c;
        c["source"] = cv.source;
        c["direction"] = cv.direction;
        c["sign"] = cv.sign;
        c["degenerate"] = cv.degenerate;
        c["target"] = cv.target;
        nlohmann::json pts = nlohmann::json::array();
        for (cdbl p : thin(cv.points)) pts.push_back({p.real(), p.imag()});
        c["points"] = pts;
        j["curves"].push_back(c);
    }
    return j;
}

} // namespace pwkb
