// Benchmark of the OpenMP-parallel sweeps against their serial references:
// the Voros W_1 parameter sweep and the Stokes-curve tracer.
#include "pwkb/geometry.hpp"

#include <chrono>
#include <cstdio>
#include <vector>

using namespace pwkb;

namespace {

double seconds(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 16;

    std::vector<cdbl> cs;
    for (int k = 0; k < n; ++k)
        cs.push_back(std::polar(1.0 + 0.05 * k, 0.3 + 2.4 * k / n));

    std::vector<cdbl> serial_w, parallel_w;
    double ts = seconds([&] { serial_w = w1_sweep(cs, false); });
    double tp = seconds([&] { parallel_w = w1_sweep(cs, true); });
    bool same = serial_w == parallel_w;
    std::printf("w1 sweep (%d points): serial %.3fs, parallel %.3fs, "
                "speedup %.2fx, identical results: %s\n",
                n, ts, tp, ts / tp, same ? "yes" : "NO");

    TraceOptions ser, par;
    par.parallel = true;
    StokesGraph gs, gp;
    double gts = seconds([&] { gs = trace_p_stokes(std::polar(1.0, 1.2), ser); });
    double gtp = seconds([&] { gp = trace_p_stokes(std::polar(1.0, 1.2), par); });
    bool gsame = export_csv(gs) == export_csv(gp);
    std::printf("stokes tracer: serial %.3fs, parallel %.3fs, speedup %.2fx, "
                "identical results: %s\n",
                gts, gtp, gts / gtp, gsame ? "yes" : "NO");
    return (same && gsame) ? 0 : 1;
}
