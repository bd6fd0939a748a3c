// Command-line front end: series dumps, exact vs numeric Voros coefficients,
// Stokes-geometry atlases, Stokes-multiplier tables, and the full
// verification report.
#include "pwkb/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace pwkb;

namespace {

const double kPi = 3.14159265358979323846;

// Complex numbers as strings: "2", "i", "-0.9i", "1+2i", "1.5-0.25i".
cdbl parse_complex(const std::string& raw) {
    std::string s;
    for (char ch : raw)
        if (!std::isspace((unsigned char)ch)) s.push_back(ch);
    if (s.empty()) throw CLI::ValidationError("empty complex literal");
    // split off a trailing imaginary part: the last '+'/'-' not part of an
    // exponent and not leading
    auto read_num = [](const std::string& p) -> double {
        if (p.empty() || p == "+") return 1.0;
        if (p == "-") return -1.0;
        size_t used = 0;
        double v = std::stod(p, &used);
        if (used != p.size()) throw CLI::ValidationError("bad number: " + p);
        return v;
    };
    if (s.back() == 'i' || s.back() == 'I') {
        std::string body = s.substr(0, s.size() - 1);
        size_t split = std::string::npos;
        for (size_t k = body.size(); k-- > 1;) {
            if ((body[k] == '+' || body[k] == '-') &&
                body[k - 1] != 'e' && body[k - 1] != 'E') {
                split = k;
                break;
            }
        }
        if (split == std::string::npos) return cdbl(0.0, read_num(body));
        return cdbl(read_num(body.substr(0, split)), read_num(body.substr(split)));
    }
    return cdbl(read_num(s), 0.0);
}

std::string format_complex(cdbl z) {
    std::ostringstream os;
    os.precision(15);
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

struct RunConfig {
    cdbl c{0.0, 1.0};
    cdbl t{0.0, 0.0};
    bool t_set = false;
    int K = 2, N = 4, n_max = 2;
    double tol = 1e-8;
    std::string out;       // output file or directory ("" = stdout)
    std::string format = "json"; // svg | csv | json
    long seed = 0;
};

// Load defaults from a JSON config file; command-line flags override.
void load_config(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot read config file: " + path);
    nlohmann::json j;
    in >> j;
    if (j.contains("c")) cfg.c = parse_complex(j["c"].get<std::string>());
    if (j.contains("t")) {
        cfg.t = parse_complex(j["t"].get<std::string>());
        cfg.t_set = true;
    }
    if (j.contains("orders")) {
        auto& o = j["orders"];
        if (o.contains("K")) cfg.K = o["K"].get<int>();
        if (o.contains("N")) cfg.N = o["N"].get<int>();
        if (o.contains("n_max")) cfg.n_max = o["n_max"].get<int>();
    }
    if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<long>();
}

void emit(const RunConfig& cfg, const std::string& payload) {
    if (cfg.out.empty()) {
        std::cout << payload;
        if (!payload.empty() && payload.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream f(cfg.out);
    if (!f) throw std::runtime_error("cannot write output file: " + cfg.out);
    f << payload;
}

cdbl default_t(const RunConfig& cfg) {
    if (cfg.t_set) return cfg.t;
    cdbl tau = turning_points(cfg.c)[0];
    return tau + 2.0 * std::abs(tau) * std::polar(1.0, std::arg(tau) - kPi / 3.0);
}

// ------------------------------------------------------------- subcommands

int cmd_series(const RunConfig& cfg) {
    auto ctx = make_context();
    auto sol1 = one_param_solution(ctx, cfg.K, cfg.N);
    auto R = riccati_series(ctx, cfg.N);

    auto dump_eta = [](const EtaSeries& s) {
        nlohmann::json j = nlohmann::json::array();
        for (int k = s.eff_lo(); k <= s.stored_hi(); ++k)
            j.push_back({{"eta_power", -k}, {"coef", s.coef(k).serialize()}});
        return j;
    };
    nlohmann::json out;
    out["orders"] = {{"K", cfg.K}, {"N", cfg.N}};
    for (int k = 0; k <= cfg.K; ++k)
        out["lambda"]["sector_" + std::to_string(k)] =
            dump_eta(sol1.lambda.sector(k));
    out["riccati"] = dump_eta(R);
    emit(cfg, out.dump(2));
    return 0;
}

int cmd_voros(const RunConfig& cfg) {
    auto exact = p_voros_series(2 * cfg.n_max - 1);
    auto numeric = voros_numeric_W(cfg.c, cfg.n_max);
    std::ostringstream csv;
    csv << "n,z_power,exact_coef,exact_value,contour_value,rel_error\n";
    csv.precision(15);
    bool ok = true;
    for (int n = 1; n <= cfg.n_max; ++n) {
        Rational w = exact.coef(2 * n - 1);
        cdbl want = rat_to_double(w) * std::pow(cfg.c, cdbl(1 - 2 * n));
        cdbl got = numeric[(size_t)n - 1];
        double rel = std::abs(got - want) / std::max(std::abs(want), 1e-300);
        ok = ok && rel <= cfg.tol;
        csv << n << "," << (2 * n - 1) << "," << w.get_str() << ","
            << format_complex(want) << "," << format_complex(got) << "," << rel
            << "\n";
    }
    emit(cfg, csv.str());
    return ok ? 0 : 1;
}

int cmd_geometry(const RunConfig& cfg, bool linear, bool sweep) {
    if (sweep) {
        auto roots =
            detect_degeneration(std::abs(cfg.c), std::arg(cfg.c) - 0.5,
                                std::arg(cfg.c) + 0.5, cfg.tol);
        nlohmann::json j;
        j["c_magnitude"] = std::abs(cfg.c);
        j["arg_range"] = {std::arg(cfg.c) - 0.5, std::arg(cfg.c) + 0.5};
        j["critical_angles"] = roots;
        emit(cfg, j.dump(2));
        return 0;
    }
    StokesGraph g = linear ? trace_sl2_stokes(default_t(cfg), cfg.c)
                           : trace_p_stokes(cfg.c);
    if (cfg.format == "svg")
        emit(cfg, export_svg(g));
    else if (cfg.format == "csv")
        emit(cfg, export_csv(g));
    else
        emit(cfg, export_json(g).dump(2));
    if (g.has_degeneration())
        std::cerr << "degeneration: saddle connection present\n";
    return 0;
}

int cmd_multipliers(const RunConfig& cfg) {
    nlohmann::json out;
    for (auto norm : {Normalization::Infinity, Normalization::TurningPoint}) {
        std::string nk = norm == Normalization::Infinity ? "infinity" : "tau1";
        for (auto side : {CSide::BelowPiHalf, CSide::AbovePiHalf}) {
            std::string sk =
                side == CSide::BelowPiHalf ? "below_pi_half" : "above_pi_half";
            auto tab = stokes_multiplier_table(norm, side);
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& s : tab.s) arr.push_back(s.str());
            out["tables"][nk][sk] = arr;
        }
        out["connection_ratio"][nk] = connection_ratio(norm).str();
    }
    cdbl y = cfg.c; // y = c eta evaluated at eta = 1 unless overridden via --c
    for (auto norm : {Normalization::Infinity, Normalization::TurningPoint}) {
        std::string nk = norm == Normalization::Infinity ? "infinity" : "tau1";
        auto nc = numeric_connection_ratio(norm, y, 20);
        out["numeric"][nk] = {{"y", format_complex(y)},
                              {"alpha_ratio", format_complex(nc.alpha_ratio)},
                              {"max_inconsistency", nc.max_inconsistency}};
    }
    emit(cfg, out.dump(2));
    return 0;
}

int cmd_verify_all(const RunConfig& cfg) {
    auto results = run_acceptance([](const CheckResult& r) {
        std::fprintf(stderr, "%s  %s\n", r.pass ? "PASS" : "FAIL",
                     r.check.c_str());
    });
    nlohmann::json report = nlohmann::json::array();
    for (const auto& r : results) report.push_back(r.to_json());
    nlohmann::json out = {{"seed", cfg.seed},
                          {"all_passed", all_passed(results)},
                          {"report", report}};
    emit(cfg, out.dump(2));
    return all_passed(results) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-WKB toolkit for the second Painleve equation"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, c_str, t_str, orders_str;

    app.add_option("--config", config_path, "JSON config file (flags override)");
    app.add_option("--c", c_str, "parameter c, e.g. 'i', '1+2i' (default i)");
    app.add_option("--t", t_str, "base point t (default: on the ray from tau_1)");
    app.add_option("--orders", orders_str, "orders K,N,n_max (default 2,4,2)");
    app.add_option("--tol", cfg.tol, "comparison tolerance")->capture_default_str();
    app.add_option("--out", cfg.out, "output file (default stdout)");
    app.add_option("--format", cfg.format, "geometry output: svg|csv|json")->capture_default_str()
        ->check(CLI::IsMember({"svg", "csv", "json"}));
    app.add_option("--seed", cfg.seed, "seed recorded in reports")->capture_default_str();

    auto* series = app.add_subcommand("series", "dump the formal series to JSON");
    auto* voros =
        app.add_subcommand("voros", "exact vs contour Voros coefficients (CSV)");
    auto* geometry =
        app.add_subcommand("geometry", "Stokes-geometry atlas / degeneration sweep");
    bool linear = false, sweep = false;
    geometry->add_flag("--linear", linear,
                       "trace the x-plane graph of the linear problem");
    geometry->add_flag("--sweep", sweep,
                       "root-find critical angles near arg c instead of tracing");
    auto* multipliers = app.add_subcommand(
        "multipliers", "Stokes-multiplier tables and connection ratio");
    auto* verify = app.add_subcommand("verify-all", "run the full check suite");
    // global flags may appear before or after the subcommand name
    for (auto* sub : {series, voros, geometry, multipliers, verify})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) load_config(config_path, cfg);
        if (!c_str.empty()) cfg.c = parse_complex(c_str);
        if (!t_str.empty()) {
            cfg.t = parse_complex(t_str);
            cfg.t_set = true;
        }
        if (!orders_str.empty()) {
            if (std::sscanf(orders_str.c_str(), "%d,%d,%d", &cfg.K, &cfg.N,
                            &cfg.n_max) < 2)
                throw CLI::ValidationError("--orders expects K,N[,n_max]");
        }
        if (series->parsed()) return cmd_series(cfg);
        if (voros->parsed()) return cmd_voros(cfg);
        if (geometry->parsed()) return cmd_geometry(cfg, linear, sweep);
        if (multipliers->parsed()) return cmd_multipliers(cfg);
        if (verify->parsed()) return cmd_verify_all(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
