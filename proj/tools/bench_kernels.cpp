// Benchmark of the OpenMP kernels against their serial counterparts. The
// parallel path must produce bit-identical results, so each timing pair is
// also an equality check; any discrepancy aborts with a nonzero exit.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "sinrcap/network.hpp"
#include "sinrcap/rng.hpp"

using namespace sinrcap;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

int mismatch = 0;

template <typename T>
void check_equal(const std::vector<T>& a, const std::vector<T>& b, const char* what, int n) {
    if (a == b) return;
    std::fprintf(stderr, "MISMATCH: %s at n=%d differs between serial and parallel\n", what, n);
    mismatch = 1;
}

}  // namespace

int main() {
    std::printf("threads available: %d\n", omp_get_max_threads());
    std::printf("%-26s %6s %12s %12s %8s\n", "kernel", "n", "serial_s", "parallel_s",
                "speedup");

    PathLossModel loss;
    PowerModel power;
    power.mode = PowerMode::UniformContinuous;
    SinrParams sinr;

    for (int n : {500, 1000, 2000}) {
        NetworkInstance inst = make_instance(n, loss, power, sinr, 97531ULL + n);
        const int reps = n <= 1000 ? 5 : 3;

        std::vector<double> serial_J, parallel_J;
        double ts = time_best_of(reps, [&] { serial_J = interference_all_J(inst, false); });
        double tp = time_best_of(reps, [&] { parallel_J = interference_all_J(inst, true); });
        check_equal(serial_J, parallel_J, "interference gain totals", n);
        std::printf("%-26s %6d %12.6f %12.6f %8.2f\n", "interference gain totals", n, ts, tp,
                    ts / tp);

        std::vector<double> serial_I, parallel_I;
        ts = time_best_of(reps, [&] { serial_I = interference_all_I(inst, false); });
        tp = time_best_of(reps, [&] { parallel_I = interference_all_I(inst, true); });
        check_equal(serial_I, parallel_I, "interference power totals", n);
        std::printf("%-26s %6d %12.6f %12.6f %8.2f\n", "interference power totals", n, ts, tp,
                    ts / tp);

        const double r_in = 0.01, r_out = 0.02;
        std::vector<int> serial_c, parallel_c;
        ts = time_best_of(reps, [&] { serial_c = annulus_counts_all(inst, r_in, r_out, false); });
        tp = time_best_of(reps, [&] { parallel_c = annulus_counts_all(inst, r_in, r_out, true); });
        check_equal(serial_c, parallel_c, "annulus counts", n);
        std::printf("%-26s %6d %12.6f %12.6f %8.2f\n", "annulus counts", n, ts, tp, ts / tp);
    }

    if (mismatch) return 1;
    std::printf("all parallel kernels matched their serial references exactly\n");
    return 0;
}
