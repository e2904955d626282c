// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Each criterion pins its configuration, seeds and
// tolerances in code so a run is reproducible bit for bit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "sinrcap/concentration.hpp"
#include "sinrcap/config.hpp"
#include "sinrcap/csv.hpp"
#include "sinrcap/cuts.hpp"
#include "sinrcap/expectations.hpp"
#include "sinrcap/io.hpp"
#include "sinrcap/network.hpp"
#include "sinrcap/rng.hpp"

using namespace sinrcap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
    double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (static_cast<double>(v.size()) - 1.0) /
                     static_cast<double>(v.size()));
}

// Frequency slack: three binomial standard errors around the target bound.
double freq_slack(double bound, double samples) {
    double var = std::max(bound * (1.0 - bound), 1e-12);
    return 3.0 * std::sqrt(var / samples) + 1e-12;
}

// ---------------------------------------------------------------------------
// 1. Max-flow equals the exhaustive minimum cut on random digraphs.
Outcome criterion_flow_duality() {
    Rng rng(1101);
    const int reps = 1000;
    int mismatches = 0;
    double worst = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        int m = 1 + static_cast<int>(rng.below(12));
        bool gaussian = (rep % 2) == 1;
        double R = 0.5;
        CapacitatedDigraph g(m, R,
                             gaussian ? CapacityMode::GaussianRate
                                      : CapacityMode::ThresholdRate);
        auto draw = [&]() {
            if (gaussian)
                return rng.uniform01() < 0.35 ? 0.0 : rng.uniform01() * 1.5;
            return R * static_cast<double>(rng.below(3));
        };
        for (int v = 1; v <= m; ++v) g.set_cap(g.source(), v, draw());
        for (int u = 1; u <= m; ++u)
            for (int v = 1; v <= m; ++v)
                if (u != v) g.set_cap(u, v, draw());
        for (int u = 1; u <= m; ++u) g.set_cap(u, g.sink(), draw());

        double flow = max_flow(g);
        double cut = min_cut_bruteforce(g).value;
        double diff = std::abs(flow - cut);
        worst = std::max(worst, diff);
        if (gaussian ? diff > 1e-9 * std::max(1.0, cut) : flow != cut) ++mismatches;
    }
    return {mismatches == 0,
            fmt("%d/%d random digraphs agreed (worst |flow - cut| = %.3g)", reps - mismatches,
                reps, worst)};
}

// ---------------------------------------------------------------------------
// 2. With interference weight zero and constant power, the link set is
//    exactly the disk graph at the closed-form radius.
Outcome criterion_disk_reduction() {
    PathLossModel loss(1e-3 / 64.0, 3.0, 1e-3);
    SinrParams sinr;
    sinr.gamma = 0.0;
    PowerModel pw; // constant 0.01
    const double r0 = loss.inverse(sinr.beta * sinr.N0 / pw.p0);
    const int n = 300, instances = 100;
    long long mismatches = 0, links = 0;
    for (int rep = 0; rep < instances; ++rep) {
        NetworkInstance inst = make_instance(n, loss, pw, sinr, 2200 + rep);
        std::vector<double> J = interference_all_J(inst);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                bool on = link_capacity_with_interference(inst, i, j, J[static_cast<std::size_t>(j)]) > 0.0;
                bool disk = torus_distance(inst.points[static_cast<std::size_t>(i)],
                                           inst.points[static_cast<std::size_t>(j)]) <= r0;
                if (on != disk) ++mismatches;
                ++links;
            }
    }
    return {mismatches == 0, fmt("%lld ordered pairs against disk radius %.6f, %lld mismatches",
                                 links, r0, mismatches)};
}

// ---------------------------------------------------------------------------
// 3. The per-receiver rewrite of the SINR matches the direct definition on
//    over a million links.
Outcome criterion_rewrite_identity() {
    PathLossModel loss(1e-3 / 64.0, 3.0, 1e-3);
    SinrParams sinr; // defaults: N0 0.02, beta 0.2, gamma 0.02
    PowerModel constant;
    PowerModel uniform;
    uniform.mode = PowerMode::UniformContinuous;
    const int n = 101, instances = 100;
    long long links = 0, failures = 0;
    double worst = 0.0;
    for (int rep = 0; rep < instances; ++rep) {
        const PowerModel& pw = (rep % 2) ? uniform : constant;
        NetworkInstance inst = make_instance(n, loss, pw, sinr, 3300 + rep);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                double a = sinr_value(inst, i, j);
                double b = sinr_direct(inst, i, j);
                ++links;
                if (std::isinf(a) || std::isinf(b)) {
                    if (a != b) ++failures;
                    continue;
                }
                double rel = std::abs(a - b) / std::max(1.0, std::abs(b));
                worst = std::max(worst, rel);
                if (rel > 1e-12) ++failures;
            }
    }
    return {links >= 1000000 && failures == 0,
            fmt("%lld links, worst relative difference %.2e", links, worst)};
}

// ---------------------------------------------------------------------------
// 4. Coupled channels sandwich the actual one: per link, per cut and per
//    coding capacity, whenever the trial stays inside the deviation
//    brackets.
Outcome criterion_sandwich() {
    PathLossModel loss(0.02, 3.0, 0.3);
    SinrParams sinr;
    sinr.gamma = 0.002;
    const int n = 1000, m = 50, l = 2, k = 25, trials_per_scenario = 100;

    long long link_checked = 0, link_violations = 0;
    long long eligible = 0, cut_violations = 0, cap_violations = 0;
    Rng aux(4404);

    for (int scenario = 0; scenario < 2; ++scenario) {
        PowerModel pw;
        if (scenario == 1) pw.mode = PowerMode::UniformContinuous;
        bool het = scenario == 1;
        double E_L = expected_path_loss(loss);
        ExpectationTable table = ExpectationTable::from_factors(n, E_L, pw.mean());
        EpsilonSchedule eps = compute_epsilons(n, E_L, pw.mean());
        double mean = het ? table.E_I : table.E_J;
        double lo = (1.0 - eps.lower(het)) * mean;
        double hi = (1.0 + eps.upper(het)) * mean;

        for (int t = 0; t < trials_per_scenario; ++t) {
            NetworkInstance inst =
                make_instance(n, loss, pw, sinr, stream_seed(4500 + scenario, t));
            RoleAssignment roles = make_roles(n, l, m, aux);
            CutSpec cut{aux.subset(m, k)};
            std::vector<double> interference =
                het ? interference_all_I(inst) : interference_all_J(inst);

            bool all_bracketed = true;
            for (double v : interference)
                if (!(v >= lo && v <= hi)) all_bracketed = false;

            for (int i = 0; i < n; i += 9)
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    double v = interference[static_cast<std::size_t>(j)];
                    if (!(v >= lo && v <= hi)) continue;
                    double actual = link_capacity_with_interference(inst, i, j, v);
                    double pess = capacity_from_sinr(
                        sinr_coupled(inst, i, j, SinrModel::LowerCoupled, eps, table), sinr);
                    double opt = capacity_from_sinr(
                        sinr_coupled(inst, i, j, SinrModel::UpperCoupled, eps, table), sinr);
                    ++link_checked;
                    if (!(pess <= actual && actual <= opt)) ++link_violations;
                }

            if (!all_bracketed) continue;
            ++eligible;
            CapacitatedDigraph g_act = build_digraph(inst, roles, 0, SinrModel::Actual, eps,
                                                     table, &interference, true);
            CapacitatedDigraph g_lo = build_digraph(inst, roles, 0, SinrModel::LowerCoupled,
                                                    eps, table, &interference, true);
            CapacitatedDigraph g_hi = build_digraph(inst, roles, 0, SinrModel::UpperCoupled,
                                                    eps, table, &interference, true);
            double c_act = cut_capacity(g_act, cut);
            double c_lo = cut_capacity(g_lo, cut);
            double c_hi = cut_capacity(g_hi, cut);
            if (!(c_lo <= c_act && c_act <= c_hi)) ++cut_violations;

            double f_act = coding_capacity(inst, roles, SinrModel::Actual, eps, table,
                                           &interference, true)
                               .value;
            double f_lo = coding_capacity(inst, roles, SinrModel::LowerCoupled, eps, table,
                                          &interference, true)
                              .value;
            double f_hi = coding_capacity(inst, roles, SinrModel::UpperCoupled, eps, table,
                                          &interference, true)
                              .value;
            if (!(f_lo <= f_act && f_act <= f_hi)) ++cap_violations;
        }
    }
    bool pass = link_checked >= 1000000 && link_violations == 0 && eligible >= 100 &&
                cut_violations == 0 && cap_violations == 0;
    return {pass, fmt("%lld bracketed links, %lld violations; %lld fully bracketed trials, "
                      "%lld cut / %lld capacity violations",
                      link_checked, link_violations, eligible, cut_violations,
                      cap_violations)};
}

// ---------------------------------------------------------------------------
// 5. Interference totals at the dense benchmark geometry: empirical mean
//    within 1% of the population value, tail frequencies within sampling
//    slack of their Chernoff targets. The near-field cutoff 0.025 puts the
//    largest single gain exactly at 1, the scale the targets assume.
Outcome criterion_interference_tails() {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::ConstantPower;
    cfg.n = 2000;
    cfg.trials = 50;
    cfg.base_seed = 20250501;
    cfg.loss = PathLossModel(1e-3 / 64.0, 3.0, 0.025);
    cfg.estimation.samples = 200000;
    InterferenceResult res = run_interference_experiment(cfg);

    std::vector<double> J;
    J.reserve(res.rows.size());
    for (const auto& r : res.rows) J.push_back(r.J);
    double mean = mean_of(J);
    double rel = std::abs(mean - res.table.E_J) / res.table.E_J;

    double N = static_cast<double>(res.report.samples);
    bool lower_ok = res.report.lower_tail_freq <=
                    res.report.theory_lower_bound + freq_slack(res.report.theory_lower_bound, N);
    bool upper_ok = res.report.upper_tail_freq <=
                    res.report.theory_upper_bound + freq_slack(res.report.theory_upper_bound, N);
    bool pass = rel <= 0.01 && lower_ok && upper_ok;
    return {pass,
            fmt("mean %.4f vs %.4f (rel %.4f); tails %.2e/%.2e vs targets %.2e/%.2e",
                mean, res.table.E_J, rel, res.report.lower_tail_freq,
                res.report.upper_tail_freq, res.report.theory_lower_bound,
                res.report.theory_upper_bound)};
}

// ---------------------------------------------------------------------------
// 6. Random-cut capacity is unbiased for [m + k(m-k)] times the mean link
//    capacity, symmetrically in k and m-k.
Outcome criterion_cut_mean() {
    ExperimentConfig base;
    base.scenario = Scenario::ConstantPower;
    base.n = 400;
    base.m = 200;
    base.l = 1;
    base.trials = 300;
    base.base_seed = 660;
    base.loss = PathLossModel(0.02, 3.0, 0.02);
    base.sinr.gamma = 0.002;
    base.estimation.samples = 300000;

    const std::vector<int> ks = {0, 50, 100, 150, 200};
    std::vector<double> means(ks.size()), ses(ks.size());
    bool mean_ok = true;
    std::string worst_note;
    double worst_pull = 0.0;
    for (std::size_t idx = 0; idx < ks.size(); ++idx) {
        ExperimentConfig cfg = base;
        cfg.k = ks[idx];
        CutResult res = run_cut_experiment(cfg);
        std::vector<double> vals;
        vals.reserve(res.rows.size());
        for (const auto& r : res.rows) vals.push_back(r.C_k);
        means[idx] = mean_of(vals);
        ses[idx] = stderr_of(vals);
        double factor = static_cast<double>(cfg.m + cfg.k * (cfg.m - cfg.k));
        double sigma = std::sqrt(ses[idx] * ses[idx] +
                                 factor * factor * res.table.C_bar_se * res.table.C_bar_se);
        double pull = std::abs(means[idx] - res.report.center) / sigma;
        if (pull > worst_pull) {
            worst_pull = pull;
            worst_note = fmt("k=%d mean %.2f vs %.2f (%.2f sigma)", cfg.k, means[idx],
                             res.report.center, pull);
        }
        if (pull > 3.0) mean_ok = false;
    }
    bool sym_ok = true;
    for (auto [a, b] : {std::pair<int, int>{0, 4}, std::pair<int, int>{1, 3}}) {
        double gap = std::abs(means[static_cast<std::size_t>(a)] - means[static_cast<std::size_t>(b)]);
        double sigma = std::sqrt(ses[static_cast<std::size_t>(a)] * ses[static_cast<std::size_t>(a)] +
                                 ses[static_cast<std::size_t>(b)] * ses[static_cast<std::size_t>(b)]);
        if (gap > 3.0 * sigma) sym_ok = false;
    }
    return {mean_ok && sym_ok,
            fmt("worst mean pull: %s; symmetry pairs (k=0,200) and (k=50,150) within 3 sigma: %s",
                worst_note.c_str(), sym_ok ? "yes" : "NO")};
}

// ---------------------------------------------------------------------------
// 7. Coding capacity tail frequencies stay within a small multiple of the
//    1/m^alpha decay targets, in both power scenarios.
Outcome criterion_capacity_tails() {
    ExperimentConfig base;
    base.n = 100;
    base.m = 30;
    base.l = 1;
    base.k = 10;
    base.trials = 500;
    base.base_seed = 770;
    base.alpha_exponent = 1.0;
    base.loss = PathLossModel(0.02, 3.0, 0.02);
    base.sinr.gamma = 0.002;
    base.estimation.samples = 200000;

    std::string detail;
    bool pass = true;
    for (int scenario = 0; scenario < 2; ++scenario) {
        ExperimentConfig cfg = base;
        if (scenario == 1) {
            cfg.scenario = Scenario::HeterogeneousPower;
            cfg.power.mode = PowerMode::UniformContinuous;
        }
        CapacityResult res = run_capacity_experiment(cfg);
        const ConcentrationReport& rep = res.report;
        bool lower_ok = rep.lower_tail_freq <= 5.0 * rep.theory_lower_bound + 1e-12;
        bool upper_ok = rep.upper_tail_freq <= 5.0 * rep.theory_upper_bound + 1e-12;
        bool alt_ok = true;
        if (std::isfinite(rep.alt_lower_tail_freq))
            alt_ok = rep.alt_lower_tail_freq <= 5.0 * rep.theory_lower_bound + 1e-12 &&
                     rep.alt_upper_tail_freq <= 5.0 * rep.theory_upper_bound + 1e-12;
        pass = pass && lower_ok && upper_ok && alt_ok;
        detail += fmt("%s%s: tails %.4f/%.4f vs targets %.4f/%.4f", scenario ? "; " : "",
                      scenario ? "heterogeneous" : "constant", rep.lower_tail_freq,
                      rep.upper_tail_freq, rep.theory_lower_bound, rep.theory_upper_bound);
    }
    return {pass, detail};
}

// ---------------------------------------------------------------------------
// 8. Power-sensitive annulus counts follow the binomial law, and shrinking
//    the power range with n drives the overflow frequency down monotonically.
Outcome criterion_annulus() {
    // (a) mean count against n * pi * (r_max^2 - r_min^2) at the dense
    // heterogeneous benchmark.
    ExperimentConfig cfg;
    cfg.scenario = Scenario::HeterogeneousPower;
    cfg.power.mode = PowerMode::UniformContinuous;
    cfg.n = 2000;
    cfg.trials = 50;
    cfg.base_seed = 880;
    cfg.estimation.samples = 200000;
    AnnulusResult res = run_annulus_experiment(cfg);
    if (!res.prime_exists)
        return {false, "raised-level annulus family unexpectedly has no radii"};
    double target = static_cast<double>(cfg.n) * kPi *
                    (res.r_max_prime * res.r_max_prime - res.r_min_prime * res.r_min_prime);
    std::vector<double> trial_means(static_cast<std::size_t>(cfg.trials), 0.0);
    for (const auto& row : res.rows)
        trial_means[static_cast<std::size_t>(row.trial)] +=
            static_cast<double>(row.count_prime) / static_cast<double>(cfg.n);
    double mean = mean_of(trial_means);
    double se = stderr_of(trial_means);
    bool mean_ok = std::abs(mean - target) <= 3.0 * se + 1e-9;

    // (b) scaled power range: overflow frequency falls as n grows and hits
    // zero once the range collapses.
    ExperimentConfig scaled = cfg;
    scaled.m = 50;
    scaled.l = 1;
    scaled.k = 10;
    scaled.scaling.enabled = true;
    scaled.scaling.exponent = -0.5;
    scaled.scaling.reference_n = 500.0;
    scaled.eta = 1.0;
    const std::vector<std::pair<int, int>> runs = {{500, 40}, {1000, 20}, {2000, 10}};
    std::vector<double> freqs;
    bool families_ok = true;
    for (auto [nn, tt] : runs) {
        ExperimentConfig c = scaled;
        c.n = nn;
        c.trials = tt;
        c.base_seed = 881;
        AnnulusResult r = run_annulus_experiment(c);
        families_ok = families_ok && r.prime_exists;
        freqs.push_back(r.prime.upper_tail_freq);
    }
    bool trend_ok = families_ok && freqs[0] > freqs[1] && freqs[1] > freqs[2] &&
                    freqs[2] == 0.0;
    bool pass = mean_ok && trend_ok;
    return {pass, fmt("mean count %.4f vs target %.4f (se %.4f); overflow freq %.4f -> %.4f "
                      "-> %.4f under the shrinking power range",
                      mean, target, se, freqs[0], freqs[1], freqs[2])};
}

// ---------------------------------------------------------------------------
// 9. A run is a pure function of its configuration and seed: every artifact
//    except the timestamped manifest is byte-identical across reruns.
Outcome criterion_reproducibility() {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::HeterogeneousPower;
    cfg.power.mode = PowerMode::UniformContinuous;
    cfg.n = 100;
    cfg.m = 12;
    cfg.l = 2;
    cfg.k = 4;
    cfg.trials = 8;
    cfg.base_seed = 990;
    cfg.loss = PathLossModel(0.02, 3.0, 0.02);
    cfg.sinr.gamma = 0.002;
    cfg.estimation.samples = 40000;
    nlohmann::json resolved = run_config_to_json(cfg);

    fs::path dir_a = fs::temp_directory_path() / "sinrcap_acceptance_a";
    fs::path dir_b = fs::temp_directory_path() / "sinrcap_acceptance_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    write_run_artifacts(cfg, resolved, dir_a.string(), nullptr);
    write_run_artifacts(cfg, resolved, dir_b.string(), nullptr);

    const std::vector<std::string> files = {"interference.csv", "cut.csv", "capacity.csv",
                                            "annulus.csv",      "bounds.csv", "report.json"};
    int matched = 0;
    for (const auto& f : files)
        if (fnv1a64_file((dir_a / f).string()) == fnv1a64_file((dir_b / f).string())) ++matched;
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    return {matched == static_cast<int>(files.size()),
            fmt("%d/%zu artifacts byte-identical across independent reruns", matched,
                files.size())};
}

// ---------------------------------------------------------------------------
// 10. On instances satisfying the sensitive-neighbor cap, revealing cut
//     links one at a time never moves the conditional mean by more than
//     eta * R.
Outcome criterion_bounded_difference() {
    PathLossModel loss(0.02, 3.0, 0.02);
    SinrParams sinr;
    sinr.gamma = 0.002;
    PowerModel pw;
    pw.mode = PowerMode::UniformContinuous;
    pw.p_min = 0.0149;
    pw.p_max = 0.0151;
    const int n = 40;
    const double eta = 1.0;

    double E_L = expected_path_loss(loss);
    ExpectationTable table = ExpectationTable::from_factors(n, E_L, pw.mean());
    EpsilonSchedule eps = compute_epsilons(n, E_L, pw.mean());
    CouplingRadii radii = coupling_radii(loss, sinr, eps, table.E_I, pw.p_min, pw.p_max);

    Rng aux(101010);
    const int wanted = 100, max_attempts = 10000;
    int accepted = 0, with_sensitive = 0, failures = 0;
    double worst = 0.0;
    for (int attempt = 0; attempt < max_attempts && accepted < wanted; ++attempt) {
        NetworkInstance inst =
            make_instance(n, loss, pw, sinr, stream_seed(111000, attempt));
        std::vector<int> counts =
            annulus_counts_all(inst, radii.r_min_prime, radii.r_max_prime);
        bool ok = true;
        for (int c : counts)
            if (static_cast<double>(c) > eta) ok = false;
        if (!ok) continue;
        ++accepted;
        int m = 1 + static_cast<int>(aux.below(10));
        RoleAssignment roles = make_roles(n, 1, m, aux);
        CutSpec cut;
        for (int r = 0; r < m; ++r)
            if (aux.bernoulli(0.5)) cut.source_side.push_back(r);
        BoundedDifferenceResult res =
            bounded_difference_check(inst, roles, 0, cut, eta, eps, table);
        worst = std::max(worst, res.max_diff);
        if (res.sensitive_edges > 0) ++with_sensitive;
        if (!res.holds || res.max_diff > eta * inst.sinr.R * (1.0 + 1e-9)) ++failures;
    }
    bool pass = accepted == wanted && failures == 0;
    return {pass, fmt("%d instances met the neighbor cap (%d with sensitive links); "
                      "worst increment %.3f vs cap %.3f; %d failures",
                      accepted, with_sensitive, worst, eta * sinr.R, failures)};
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"max-flow equals exhaustive min-cut on random digraphs", criterion_flow_duality},
        {"zero-interference links reduce to the closed-form disk graph",
         criterion_disk_reduction},
        {"rewritten SINR matches the direct definition on 1e6+ links",
         criterion_rewrite_identity},
        {"coupled channels sandwich actual links, cuts and capacities", criterion_sandwich},
        {"interference mean and tails meet their concentration targets",
         criterion_interference_tails},
        {"random-cut capacity is unbiased and symmetric in the cut size", criterion_cut_mean},
        {"coding-capacity tails stay within the 1/m^alpha decay targets",
         criterion_capacity_tails},
        {"sensitive-annulus counts follow the binomial law and shrink with n",
         criterion_annulus},
        {"artifacts are byte-identical across reruns of one configuration",
         criterion_reproducibility},
        {"revealed cut links never move the conditional mean above eta*R",
         criterion_bounded_difference},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        std::printf("[%s] criterion %2zu: %s - %s (%.1fs)\n", out.pass ? "PASS" : "FAIL",
                    i + 1, criteria[i].name, out.detail.c_str(), secs);
        std::fflush(stdout);
        if (!out.pass) ++failed;
    }
    if (failed == 0)
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    else
        std::printf("acceptance: %d of %zu criteria FAILED\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
