#include "sinrcap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "sinrcap/concentration.hpp"
#include "sinrcap/cuts.hpp"
#include "sinrcap/expectations.hpp"
#include "sinrcap/network.hpp"
#include "sinrcap/rng.hpp"

namespace sinrcap {

namespace {

struct Checker {
    std::ostream& out;
    bool all_ok = true;

    void report(const std::string& name, bool ok, const std::string& detail) {
        out << (ok ? "[ok]   " : "[FAIL] ") << name;
        if (!detail.empty()) out << ": " << detail;
        out << "\n";
        if (!ok) all_ok = false;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Exhaustive min-cut value over all 2^m relay bipartitions, evaluated
// directly from the capacity matrix.  Independent of the flow solver.
double enumerate_min_cut(const CapacitatedDigraph& g) {
    const int m = g.relay_count();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
        CutSpec cut;
        for (int r = 0; r < m; ++r)
            if (mask & (1ULL << r)) cut.source_side.push_back(r);
        best = std::min(best, cut_capacity(g, cut));
    }
    return best;
}

bool check_flow_duality(Checker& ck, double tamper, std::uint64_t seed) {
    Rng rng(stream_seed(seed, 1));
    int worst_index = -1;
    double worst_gap = 0.0;
    const int cases = 300;
    for (int c = 0; c < cases; ++c) {
        const int m = 1 + static_cast<int>(rng.below(8));
        const bool gaussian = (c % 2 == 1);
        const double R = 0.5;
        CapacitatedDigraph g(m, R,
                             gaussian ? CapacityMode::GaussianRate
                                      : CapacityMode::ThresholdRate);
        auto random_cap = [&]() {
            if (gaussian) return rng.uniform01() < 0.3 ? 0.0 : rng.uniform(0.0, 2.0);
            return R * static_cast<double>(rng.below(4));
        };
        for (int u = 0; u < m; ++u) {
            g.set_cap(g.source(), 1 + u, random_cap());
            g.set_cap(1 + u, g.sink(), random_cap());
            for (int v = 0; v < m; ++v)
                if (u != v) g.set_cap(1 + u, 1 + v, random_cap());
        }
        const double flow = max_flow(g) + tamper;
        const double enumerated = enumerate_min_cut(g);
        const double scale = std::max({1.0, flow, enumerated});
        const double gap = std::abs(flow - enumerated) / scale;
        const double tol = gaussian ? 1e-9 : 0.0;
        if (gap > tol && gap > worst_gap) {
            worst_gap = gap;
            worst_index = c;
        }
    }
    const bool ok = worst_index < 0;
    ck.report("max-flow equals exhaustive min-cut on random digraphs", ok,
              ok ? std::to_string(cases) + " cases"
                 : "case " + std::to_string(worst_index) + " relative gap " + fmt(worst_gap));
    return ok;
}

NetworkInstance baseline_instance(int n, bool heterogeneous, std::uint64_t seed) {
    PathLossModel loss;  // c = 1e-3/64, alpha = 3, d_near = 1e-3
    PowerModel power;
    power.mode = heterogeneous ? PowerMode::UniformContinuous : PowerMode::Constant;
    SinrParams sinr;
    return make_instance(n, loss, power, sinr, seed);
}

bool check_rewrite_identity(Checker& ck, std::uint64_t seed) {
    double worst = 0.0;
    for (int variant = 0; variant < 2; ++variant) {
        NetworkInstance inst = baseline_instance(160, variant == 1, stream_seed(seed, 2 + variant));
        const int n = inst.n();
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                if (i == j) continue;
                const double a = sinr_value(inst, i, j);
                const double b = sinr_direct(inst, i, j);
                const double rel = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
                worst = std::max(worst, rel);
            }
        }
    }
    const bool ok = worst <= 1e-12;
    ck.report("aggregated-interference SINR matches direct evaluation", ok,
              "max relative difference " + fmt(worst));
    return ok;
}

bool check_disk_reduction(Checker& ck, std::uint64_t seed) {
    PathLossModel loss;
    PowerModel power;  // constant 0.01
    SinrParams sinr;
    sinr.gamma = 0.0;
    const double r0 = loss.inverse(sinr.beta * sinr.N0 / power.p0);
    long long mismatches = 0;
    for (int rep = 0; rep < 5; ++rep) {
        NetworkInstance inst = make_instance(200, loss, power, sinr, stream_seed(seed, 10 + rep));
        std::vector<double> interf = interference_all_J(inst, /*parallel=*/false);
        const int n = inst.n();
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                if (i == j) continue;
                const bool on =
                    link_capacity_with_interference(inst, i, j, interf[j]) > 0.0;
                const bool inside = torus_distance(inst.points[i], inst.points[j]) <= r0;
                if (on != inside) ++mismatches;
            }
    }
    const bool ok = mismatches == 0;
    ck.report("zero interference weight reduces links to a disk graph", ok,
              std::to_string(mismatches) + " mismatches, radius " + fmt(r0));
    return ok;
}

bool check_sandwich(Checker& ck, std::uint64_t seed) {
    long long violations = 0;
    long long bracketed_nodes = 0;
    for (int variant = 0; variant < 2; ++variant) {
        const bool het = variant == 1;
        NetworkInstance inst = baseline_instance(300, het, stream_seed(seed, 20 + variant));
        const int n = inst.n();
        const double E_L = expected_path_loss(inst.loss);
        ExpectationTable table =
            ExpectationTable::from_factors(n, E_L, inst.powers.model.mean());
        EpsilonSchedule eps = compute_epsilons(n, E_L, inst.powers.model.mean());
        const double low = coupled_interference_level(SinrModel::LowerCoupled, eps, table, het);
        const double high = coupled_interference_level(SinrModel::UpperCoupled, eps, table, het);
        std::vector<double> interf =
            het ? interference_all_I(inst, false) : interference_all_J(inst, false);
        for (int j = 0; j < n; ++j) {
            if (!(interf[j] >= high && interf[j] <= low)) continue;  // outside brackets
            ++bracketed_nodes;
            for (int i = 0; i < n; ++i) {
                if (i == j) continue;
                const double c = link_capacity_with_interference(inst, i, j, interf[j]);
                const double c_lo = capacity_from_sinr(
                    sinr_coupled(inst, i, j, SinrModel::LowerCoupled, eps, table), inst.sinr);
                const double c_hi = capacity_from_sinr(
                    sinr_coupled(inst, i, j, SinrModel::UpperCoupled, eps, table), inst.sinr);
                if (!(c_lo <= c && c <= c_hi)) ++violations;
            }
        }
    }
    const bool ok = violations == 0 && bracketed_nodes > 0;
    ck.report("coupled capacities sandwich actual capacities on bracketed receivers", ok,
              std::to_string(bracketed_nodes) + " bracketed receivers, " +
                  std::to_string(violations) + " violations");
    return ok;
}

bool check_annulus_binomial(Checker& ck, std::uint64_t seed) {
    // Receiver-count statistics against the exact binomial of the annulus area.
    PathLossModel loss;
    PowerModel power;
    power.mode = PowerMode::UniformContinuous;
    const int n = 500;
    const double r_in = 0.05, r_out = 0.11;
    const double area = torus_disk_area(r_out) - torus_disk_area(r_in);
    const double expected = (n - 1) * area;
    const int trials = 40;
    double total = 0.0;
    for (int t = 0; t < trials; ++t) {
        SinrParams sinr;
        NetworkInstance inst = make_instance(n, loss, power, sinr, stream_seed(seed, 40 + t));
        std::vector<int> counts = annulus_counts_all(inst, r_in, r_out, false);
        for (int c : counts) total += c;
    }
    const double mean = total / (static_cast<double>(trials) * n);
    const double sd = expected > 0.0 ? std::sqrt(expected) : 0.0;
    const double sigma = sd / std::sqrt(static_cast<double>(trials) * n);
    const bool ok = std::abs(mean - expected) <= 5.0 * sigma;
    ck.report("annulus occupancy matches its binomial mean", ok,
              "mean " + fmt(mean) + " vs " + fmt(expected) + " (5-sigma window " +
                  fmt(5.0 * sigma) + ")");
    return ok;
}

bool check_determinism(Checker& ck, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.n = 120;
    cfg.m = 12;
    cfg.k = 4;
    cfg.trials = 6;
    cfg.base_seed = seed;
    cfg.estimation.samples = 20000;
    InterferenceResult a = run_interference_experiment(cfg);
    InterferenceResult b = run_interference_experiment(cfg);
    bool same = a.rows.size() == b.rows.size();
    if (same)
        for (std::size_t i = 0; i < a.rows.size(); ++i)
            same = same && a.rows[i].trial == b.rows[i].trial &&
                   a.rows[i].node == b.rows[i].node && a.rows[i].J == b.rows[i].J &&
                   a.rows[i].I == b.rows[i].I;
    ck.report("repeated runs reproduce identical interference samples", same,
              std::to_string(a.rows.size()) + " rows compared");
    return same;
}

bool check_large_interference(Checker& ck, std::uint64_t seed) {
    // Large-instance sanity: population mean of per-receiver interference.
    PathLossModel loss;
    PowerModel power;
    SinrParams sinr;
    const int n = 2000;
    const double E_J = (n - 1) * expected_path_loss(loss);
    double total = 0.0;
    const int trials = 4;
    for (int t = 0; t < trials; ++t) {
        NetworkInstance inst = make_instance(n, loss, power, sinr, stream_seed(seed, 100 + t));
        std::vector<double> interf = interference_all_J(inst, true);
        for (double v : interf) total += v;
    }
    const double mean = total / (static_cast<double>(trials) * n);
    const bool ok = std::abs(mean - E_J) / E_J < 0.25;  // heavy-tailed, wide tolerance
    ck.report("large-instance interference mean is near its expectation", ok,
              "mean " + fmt(mean) + " vs " + fmt(E_J));
    return ok;
}

}  // namespace

bool run_verification(const VerifyOptions& opts, std::ostream& out) {
    Checker ck{out};
    check_flow_duality(ck, opts.tamper_capacity, opts.seed);
    check_rewrite_identity(ck, opts.seed);
    check_disk_reduction(ck, opts.seed);
    check_sandwich(ck, opts.seed);
    check_annulus_binomial(ck, opts.seed);
    check_determinism(ck, opts.seed);
    if (opts.full) check_large_interference(ck, opts.seed);
    out << (ck.all_ok ? "verification passed" : "verification FAILED") << "\n";
    return ck.all_ok;
}

}  // namespace sinrcap
