#include "sinrcap/concentration.hpp"

#include <algorithm>
#include <omp.h>

namespace sinrcap {

void ExperimentConfig::validate() const {
    if (n < 2) throw std::invalid_argument("ExperimentConfig: need n >= 2");
    if (m < 1) throw std::invalid_argument("ExperimentConfig: need m >= 1");
    if (l < 1) throw std::invalid_argument("ExperimentConfig: need l >= 1");
    if (m + l + 1 > n) throw std::invalid_argument("ExperimentConfig: need m + l + 1 <= n");
    if (k < 0 || k > m) throw std::invalid_argument("ExperimentConfig: need 0 <= k <= m");
    if (trials < 1) throw std::invalid_argument("ExperimentConfig: need trials >= 1");
    if (!(eta > 0.0)) throw std::invalid_argument("ExperimentConfig: eta must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("ExperimentConfig: epsilon must lie in (0, 1)");
    if (!(alpha_exponent > 0.0))
        throw std::invalid_argument("ExperimentConfig: alpha_exponent must be positive");
    if (estimation.samples < 1)
        throw std::invalid_argument("ExperimentConfig: estimation.samples must be >= 1");
    loss.validate();
    power.validate();
    sinr.validate();
    bool constant = power.mode == PowerMode::Constant;
    if (scenario == Scenario::ConstantPower && !constant)
        throw std::invalid_argument(
            "ExperimentConfig: constant-power scenario needs a constant power model");
    if (scenario == Scenario::HeterogeneousPower && constant)
        throw std::invalid_argument(
            "ExperimentConfig: heterogeneous scenario needs a random power model");
}

PowerModel ExperimentConfig::effective_power() const {
    PowerModel pw = power;
    if (!scaling.enabled || pw.mode == PowerMode::Constant) return pw;
    if (!(scaling.reference_n > 0.0))
        throw std::invalid_argument("PowerScalingRule: reference_n must be positive");
    double factor = std::pow(static_cast<double>(n) / scaling.reference_n, scaling.exponent);
    pw.p_max = std::max(pw.p_min, pw.p_max * factor);
    return pw;
}

std::string quantity_name(Quantity q) {
    switch (q) {
    case Quantity::InterferenceJ: return "interference_gain_total";
    case Quantity::InterferenceI: return "interference_power_total";
    case Quantity::CutCapacityK: return "cut_capacity";
    case Quantity::CodingCapacity: return "coding_capacity";
    case Quantity::AnnulusCount: return "annulus_count";
    }
    throw std::logic_error("quantity_name: unknown quantity");
}

Quantity quantity_from_name(const std::string& name) {
    for (Quantity q : {Quantity::InterferenceJ, Quantity::InterferenceI,
                       Quantity::CutCapacityK, Quantity::CodingCapacity,
                       Quantity::AnnulusCount}) {
        if (quantity_name(q) == name) return q;
    }
    throw std::invalid_argument("quantity_from_name: unknown quantity '" + name + "'");
}

namespace {

void put(nlohmann::json& j, const char* key, double v) {
    if (std::isnan(v))
        j[key] = nullptr;
    else
        j[key] = v;
}

double take(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nan("");
    return j.at(key).get<double>();
}

} // namespace

nlohmann::json ConcentrationReport::to_json() const {
    nlohmann::json j;
    j["quantity"] = quantity_name(quantity);
    j["trials"] = trials;
    j["samples"] = samples;
    j["seed"] = seed;
    put(j, "center", center);
    put(j, "lower_threshold", lower_threshold);
    put(j, "upper_threshold", upper_threshold);
    put(j, "empirical_mean", empirical_mean);
    put(j, "empirical_sd", empirical_sd);
    put(j, "lower_tail_freq", lower_tail_freq);
    put(j, "upper_tail_freq", upper_tail_freq);
    put(j, "theory_lower_bound", theory_lower_bound);
    put(j, "theory_upper_bound", theory_upper_bound);
    put(j, "alt_lower_threshold", alt_lower_threshold);
    put(j, "alt_upper_threshold", alt_upper_threshold);
    put(j, "alt_lower_tail_freq", alt_lower_tail_freq);
    put(j, "alt_upper_tail_freq", alt_upper_tail_freq);
    put(j, "alt_theory_lower_bound", alt_theory_lower_bound);
    put(j, "alt_theory_upper_bound", alt_theory_upper_bound);
    put(j, "scaled_lower_freq", scaled_lower_freq);
    put(j, "scaled_upper_freq", scaled_upper_freq);
    j["sandwich_violations"] = sandwich_violations;
    put(j, "binomial_mean_prediction", binomial_mean_prediction);
    put(j, "binomial_tail_prediction", binomial_tail_prediction);
    j["family_exists"] = family_exists;
    return j;
}

ConcentrationReport ConcentrationReport::from_json(const nlohmann::json& j) {
    ConcentrationReport r;
    r.quantity = quantity_from_name(j.at("quantity").get<std::string>());
    r.trials = j.at("trials").get<long long>();
    r.samples = j.at("samples").get<long long>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.center = take(j, "center");
    r.lower_threshold = take(j, "lower_threshold");
    r.upper_threshold = take(j, "upper_threshold");
    r.empirical_mean = take(j, "empirical_mean");
    r.empirical_sd = take(j, "empirical_sd");
    r.lower_tail_freq = take(j, "lower_tail_freq");
    r.upper_tail_freq = take(j, "upper_tail_freq");
    r.theory_lower_bound = take(j, "theory_lower_bound");
    r.theory_upper_bound = take(j, "theory_upper_bound");
    r.alt_lower_threshold = take(j, "alt_lower_threshold");
    r.alt_upper_threshold = take(j, "alt_upper_threshold");
    r.alt_lower_tail_freq = take(j, "alt_lower_tail_freq");
    r.alt_upper_tail_freq = take(j, "alt_upper_tail_freq");
    r.alt_theory_lower_bound = take(j, "alt_theory_lower_bound");
    r.alt_theory_upper_bound = take(j, "alt_theory_upper_bound");
    r.scaled_lower_freq = take(j, "scaled_lower_freq");
    r.scaled_upper_freq = take(j, "scaled_upper_freq");
    r.sandwich_violations = j.at("sandwich_violations").get<long long>();
    r.binomial_mean_prediction = take(j, "binomial_mean_prediction");
    r.binomial_tail_prediction = take(j, "binomial_tail_prediction");
    r.family_exists = j.at("family_exists").get<bool>();
    return r;
}

namespace {

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
};

template <typename Iter, typename Get>
Moments moments_of(Iter begin, Iter end, Get get) {
    long long count = 0;
    double mean = 0.0;
    for (Iter it = begin; it != end; ++it) {
        ++count;
        mean += get(*it);
    }
    if (count == 0) return {};
    mean /= static_cast<double>(count);
    double var = 0.0;
    for (Iter it = begin; it != end; ++it) {
        double d = get(*it) - mean;
        var += d * d;
    }
    Moments m;
    m.mean = mean;
    m.sd = count > 1 ? std::sqrt(var / static_cast<double>(count - 1)) : 0.0;
    return m;
}

struct Prepared {
    PowerModel power;
    ExpectationTable table;
    EpsilonSchedule eps;
    bool heterogeneous = false;
};

Prepared prepare(const ExperimentConfig& cfg) {
    cfg.validate();
    Prepared p;
    p.power = cfg.effective_power();
    p.table = estimate_expectations(cfg.loss, p.power, cfg.sinr, cfg.n, cfg.estimation);
    p.eps = compute_epsilons(cfg.n, p.table.E_L, p.table.E_P);
    p.heterogeneous = cfg.scenario == Scenario::HeterogeneousPower;
    return p;
}

} // namespace

InterferenceResult run_interference_experiment(const ExperimentConfig& cfg) {
    Prepared pre = prepare(cfg);
    const int n = cfg.n;
    InterferenceResult result;
    result.table = pre.table;
    result.eps = pre.eps;
    result.rows.resize(static_cast<std::size_t>(cfg.trials) * static_cast<std::size_t>(n));

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < cfg.trials; ++t) {
        NetworkInstance inst = make_instance(n, cfg.loss, pre.power, cfg.sinr,
                                             stream_seed(cfg.base_seed, static_cast<std::uint64_t>(t)));
        std::vector<double> J(static_cast<std::size_t>(n));
        std::vector<double> I(static_cast<std::size_t>(n));
        interference_all_both(inst, J, I, false);
        std::size_t base = static_cast<std::size_t>(t) * static_cast<std::size_t>(n);
        for (int j = 0; j < n; ++j) {
            result.rows[base + static_cast<std::size_t>(j)] = {
                t, j, J[static_cast<std::size_t>(j)], I[static_cast<std::size_t>(j)]};
        }
    }

    bool het = pre.heterogeneous;
    double mean_value = het ? pre.table.E_I : pre.table.E_J;
    double mu = mean_value; // dimensionless when terms are [0, 1]-scaled
    ConcentrationReport& rep = result.report;
    rep.quantity = het ? Quantity::InterferenceI : Quantity::InterferenceJ;
    rep.trials = cfg.trials;
    rep.samples = static_cast<long long>(result.rows.size());
    rep.seed = cfg.base_seed;
    rep.center = mean_value;
    rep.lower_threshold = (1.0 - pre.eps.lower(het)) * mean_value;
    rep.upper_threshold = (1.0 + pre.eps.upper(het)) * mean_value;
    auto value_of = [het](const InterferenceRow& r) { return het ? r.I : r.J; };
    Moments mom = moments_of(result.rows.begin(), result.rows.end(), value_of);
    rep.empirical_mean = mom.mean;
    rep.empirical_sd = mom.sd;
    long long lo = 0;
    long long hi = 0;
    for (const auto& r : result.rows) {
        double v = value_of(r);
        if (v <= rep.lower_threshold) ++lo;
        if (v >= rep.upper_threshold) ++hi;
    }
    rep.lower_tail_freq = static_cast<double>(lo) / static_cast<double>(rep.samples);
    rep.upper_tail_freq = static_cast<double>(hi) / static_cast<double>(rep.samples);
    rep.theory_lower_bound = chernoff_lower_tail_bound(mu, pre.eps.lower(het));
    rep.theory_upper_bound = chernoff_upper_tail_bound(mu, pre.eps.upper(het));
    return result;
}

CutResult run_cut_experiment(const ExperimentConfig& cfg) {
    Prepared pre = prepare(cfg);
    const int n = cfg.n;
    const bool het = pre.heterogeneous;
    CutResult result;
    result.table = pre.table;
    result.eps = pre.eps;
    result.rows.resize(static_cast<std::size_t>(cfg.trials));

    double level_prime =
        coupled_interference_level(SinrModel::LowerCoupled, pre.eps, pre.table, het);
    double level_dprime =
        coupled_interference_level(SinrModel::UpperCoupled, pre.eps, pre.table, het);

    std::vector<long long> violations(static_cast<std::size_t>(cfg.trials), 0);

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < cfg.trials; ++t) {
        std::uint64_t trial_seed = stream_seed(cfg.base_seed, static_cast<std::uint64_t>(t));
        NetworkInstance inst =
            make_instance(n, cfg.loss, pre.power, cfg.sinr, stream_seed(trial_seed, 0));
        Rng rng(stream_seed(trial_seed, 1));
        RoleAssignment roles = make_roles(n, cfg.l, cfg.m, rng);
        CutSpec cut{rng.subset(cfg.m, cfg.k)};
        std::vector<double> interference =
            het ? interference_all_I(inst, false) : interference_all_J(inst, false);
        CapacitatedDigraph g = build_digraph(inst, roles, 0, SinrModel::Actual, pre.eps,
                                             pre.table, &interference, false);
        CapacitatedDigraph gp = build_digraph(inst, roles, 0, SinrModel::LowerCoupled,
                                              pre.eps, pre.table, nullptr, false);
        CapacitatedDigraph gpp = build_digraph(inst, roles, 0, SinrModel::UpperCoupled,
                                               pre.eps, pre.table, nullptr, false);
        CutRow row;
        row.trial = t;
        row.k = cfg.k;
        row.C_k = cut_capacity(g, cut);
        row.C_k_prime = cut_capacity(gp, cut);
        row.C_k_dprime = cut_capacity(gpp, cut);
        result.rows[static_cast<std::size_t>(t)] = row;

        bool bracketed = true;
        for (double v : interference) {
            if (!(v >= level_dprime && v <= level_prime)) {
                bracketed = false;
                break;
            }
        }
        if (bracketed && !(row.C_k_prime <= row.C_k && row.C_k <= row.C_k_dprime))
            violations[static_cast<std::size_t>(t)] = 1;
    }

    double factor = static_cast<double>(cfg.m + cfg.k * (cfg.m - cfg.k));
    ConcentrationReport& rep = result.report;
    rep.quantity = Quantity::CutCapacityK;
    rep.trials = cfg.trials;
    rep.samples = cfg.trials;
    rep.seed = cfg.base_seed;
    rep.center = factor * pre.table.C_bar;
    rep.lower_threshold = (1.0 - cfg.epsilon) * factor * pre.table.C_bar_prime;
    rep.upper_threshold = (1.0 + cfg.epsilon) * factor * pre.table.C_bar_dprime;
    Moments mom = moments_of(result.rows.begin(), result.rows.end(),
                             [](const CutRow& r) { return r.C_k; });
    rep.empirical_mean = mom.mean;
    rep.empirical_sd = mom.sd;
    long long lo = 0;
    long long hi = 0;
    long long bad = 0;
    for (const auto& r : result.rows) {
        if (r.C_k <= rep.lower_threshold) ++lo;
        if (r.C_k >= rep.upper_threshold) ++hi;
    }
    for (long long v : violations) bad += v;
    rep.lower_tail_freq = static_cast<double>(lo) / static_cast<double>(cfg.trials);
    rep.upper_tail_freq = static_cast<double>(hi) / static_cast<double>(cfg.trials);
    rep.sandwich_violations = bad;

    double R = cfg.sinr.R;
    double e2 = cfg.epsilon * cfg.epsilon;
    if (!het) {
        rep.theory_lower_bound = std::exp(-factor * (pre.table.C_bar_prime / R) * e2 / 2.0);
        rep.theory_upper_bound = std::exp(-factor * (pre.table.C_bar_dprime / R) * e2 / 3.0);
    } else {
        double cp = pre.table.C_bar_prime / R;
        double cpp = pre.table.C_bar_dprime / R;
        rep.theory_lower_bound =
            std::exp(-factor * cp * cp * e2 / (2.0 * cfg.eta * cfg.eta));
        rep.theory_upper_bound =
            std::exp(-factor * cpp * cpp * e2 / (2.0 * cfg.eta * cfg.eta));
        double eta1 = cfg.eta + 1.0;
        rep.alt_theory_lower_bound = std::exp(-factor * cp * cp * e2 / (2.0 * eta1 * eta1));
        rep.alt_theory_upper_bound = std::exp(-factor * cpp * cpp * e2 / (2.0 * eta1 * eta1));
    }
    return result;
}

CapacityResult run_capacity_experiment(const ExperimentConfig& cfg) {
    Prepared pre = prepare(cfg);
    const int n = cfg.n;
    const bool het = pre.heterogeneous;
    CapacityResult result;
    result.table = pre.table;
    result.eps = pre.eps;
    result.rows.resize(static_cast<std::size_t>(cfg.trials));

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < cfg.trials; ++t) {
        std::uint64_t trial_seed = stream_seed(cfg.base_seed, static_cast<std::uint64_t>(t));
        NetworkInstance inst =
            make_instance(n, cfg.loss, pre.power, cfg.sinr, stream_seed(trial_seed, 0));
        Rng rng(stream_seed(trial_seed, 1));
        RoleAssignment roles = make_roles(n, cfg.l, cfg.m, rng);
        std::vector<double> interference =
            het ? interference_all_I(inst, false) : interference_all_J(inst, false);
        bool other_dests = cfg.include_other_destinations_as_relays;
        CodingCapacityResult actual = coding_capacity(inst, roles, SinrModel::Actual, pre.eps,
                                                      pre.table, &interference, other_dests);
        CodingCapacityResult lower = coding_capacity(inst, roles, SinrModel::LowerCoupled,
                                                     pre.eps, pre.table, nullptr, other_dests);
        CodingCapacityResult upper = coding_capacity(inst, roles, SinrModel::UpperCoupled,
                                                     pre.eps, pre.table, nullptr, other_dests);
        CapacityRow row;
        row.trial = t;
        row.C = actual.value;
        row.C_prime = lower.value;
        row.C_dprime = upper.value;
        row.argmin_dest = actual.argmin;
        row.per_destination = actual.per_destination;
        result.rows[static_cast<std::size_t>(t)] = std::move(row);
    }

    double R = cfg.sinr.R;
    double m = static_cast<double>(cfg.m);
    double logm = std::log(m);
    double E0 = m * pre.table.C_bar;     // capacity units
    double E0_units = E0 / R;            // dimensionless, counts links at full rate
    double a = cfg.alpha_exponent;

    ConcentrationReport& rep = result.report;
    rep.quantity = Quantity::CodingCapacity;
    rep.trials = cfg.trials;
    rep.samples = cfg.trials;
    rep.seed = cfg.base_seed;
    rep.center = E0;
    Moments mom = moments_of(result.rows.begin(), result.rows.end(),
                             [](const CapacityRow& r) { return r.C; });
    rep.empirical_mean = mom.mean;
    rep.empirical_sd = mom.sd;

    double eps_lower;
    double eps_upper;
    if (!het) {
        eps_lower = std::sqrt(2.0 * a * logm / E0_units);
        eps_upper = std::sqrt(3.0 * a * logm / E0_units);
    } else {
        eps_lower = cfg.eta * std::sqrt(2.0 * a * m * logm) / E0_units;
        eps_upper = eps_lower;
        double alt = (cfg.eta + 1.0) * std::sqrt(2.0 * a * m * logm) / E0_units;
        rep.alt_lower_threshold = (1.0 - alt) * E0;
        rep.alt_upper_threshold = (1.0 + alt) * E0;
    }
    rep.lower_threshold = (1.0 - eps_lower) * E0;
    rep.upper_threshold = (1.0 + eps_upper) * E0;

    long long lo = 0;
    long long hi = 0;
    long long alt_lo = 0;
    long long alt_hi = 0;
    for (const auto& r : result.rows) {
        if (r.C <= rep.lower_threshold) ++lo;
        if (r.C >= rep.upper_threshold) ++hi;
        if (het) {
            if (r.C <= rep.alt_lower_threshold) ++alt_lo;
            if (r.C >= rep.alt_upper_threshold) ++alt_hi;
        }
    }
    double trials = static_cast<double>(cfg.trials);
    rep.lower_tail_freq = static_cast<double>(lo) / trials;
    rep.upper_tail_freq = static_cast<double>(hi) / trials;
    rep.theory_lower_bound = static_cast<double>(cfg.l) / std::pow(m, a);
    rep.theory_upper_bound = 1.0 / std::pow(m, a);
    rep.scaled_lower_freq = rep.lower_tail_freq * std::pow(m, a) / static_cast<double>(cfg.l);
    rep.scaled_upper_freq = rep.upper_tail_freq * std::pow(m, a);
    if (het) {
        rep.alt_lower_tail_freq = static_cast<double>(alt_lo) / trials;
        rep.alt_upper_tail_freq = static_cast<double>(alt_hi) / trials;
        rep.alt_theory_lower_bound = rep.theory_lower_bound;
        rep.alt_theory_upper_bound = rep.theory_upper_bound;
    }
    return result;
}

AnnulusResult run_annulus_experiment(const ExperimentConfig& cfg) {
    Prepared pre = prepare(cfg);
    const int n = cfg.n;
    const bool het = pre.heterogeneous;
    AnnulusResult result;
    result.table = pre.table;
    result.eps = pre.eps;

    double mean_interference = het ? pre.table.E_I : pre.table.E_J;
    double level_prime = (1.0 + pre.eps.upper(het)) * mean_interference;
    double level_dprime = (1.0 - pre.eps.lower(het)) * mean_interference;
    double noise = het ? cfg.sinr.N0 : cfg.sinr.N0 / pre.power.p0;
    double p_lo = het ? pre.power.p_min : 1.0;
    double p_hi = het ? pre.power.p_max : 1.0;

    // A family only supports counting when both radii exist and are
    // finite; an infinite radius means the channel degenerated to
    // always-on and there is no annulus to inspect. The radii values are
    // still recorded for the caller.
    auto family_radii = [&](double level, double& r_min, double& r_max) {
        auto lo = try_coupled_connection_radius(cfg.loss, cfg.sinr, noise, level, p_lo);
        auto hi = try_coupled_connection_radius(cfg.loss, cfg.sinr, noise, level, p_hi);
        if (lo) r_min = *lo;
        if (hi) r_max = *hi;
        return lo.has_value() && hi.has_value() && std::isfinite(*lo) && std::isfinite(*hi);
    };
    result.prime_exists = family_radii(level_prime, result.r_min_prime, result.r_max_prime);
    result.dprime_exists =
        family_radii(level_dprime, result.r_min_dprime, result.r_max_dprime);

    result.rows.resize(static_cast<std::size_t>(cfg.trials) * static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < cfg.trials; ++t) {
        NetworkInstance inst = make_instance(n, cfg.loss, pre.power, cfg.sinr,
                                             stream_seed(cfg.base_seed, static_cast<std::uint64_t>(t)));
        std::vector<int> prime_counts;
        std::vector<int> dprime_counts;
        if (result.prime_exists)
            prime_counts =
                annulus_counts_all(inst, result.r_min_prime, result.r_max_prime, false);
        if (result.dprime_exists)
            dprime_counts =
                annulus_counts_all(inst, result.r_min_dprime, result.r_max_dprime, false);
        std::size_t base = static_cast<std::size_t>(t) * static_cast<std::size_t>(n);
        for (int j = 0; j < n; ++j) {
            AnnulusRow row;
            row.trial = t;
            row.node = j;
            if (!prime_counts.empty()) row.count_prime = prime_counts[static_cast<std::size_t>(j)];
            if (!dprime_counts.empty())
                row.count_dprime = dprime_counts[static_cast<std::size_t>(j)];
            result.rows[base + static_cast<std::size_t>(j)] = row;
        }
    }

    auto fill_report = [&](ConcentrationReport& rep, Quantity q, bool exists, double r_min,
                           double r_max, auto get_count) {
        rep.quantity = q;
        rep.trials = cfg.trials;
        rep.seed = cfg.base_seed;
        rep.family_exists = exists;
        if (!exists) {
            rep.samples = 0;
            return;
        }
        rep.samples = static_cast<long long>(result.rows.size());
        Moments mom = moments_of(result.rows.begin(), result.rows.end(), get_count);
        rep.empirical_mean = mom.mean;
        rep.empirical_sd = mom.sd;
        double area = torus_disk_area(r_max) - torus_disk_area(r_min);
        rep.binomial_mean_prediction = static_cast<double>(n - 1) * area;
        rep.binomial_tail_prediction = binomial_upper_tail(n - 1, area, cfg.eta);
        rep.center = rep.binomial_mean_prediction;
        long long over = 0;
        for (const auto& r : result.rows)
            if (get_count(r) > cfg.eta) ++over;
        rep.upper_tail_freq = static_cast<double>(over) / static_cast<double>(rep.samples);
        rep.upper_threshold = cfg.eta;
    };
    fill_report(result.prime, Quantity::AnnulusCount, result.prime_exists,
                result.r_min_prime, result.r_max_prime,
                [](const AnnulusRow& r) { return static_cast<double>(r.count_prime); });
    fill_report(result.dprime, Quantity::AnnulusCount, result.dprime_exists,
                result.r_min_dprime, result.r_max_dprime,
                [](const AnnulusRow& r) { return static_cast<double>(r.count_dprime); });
    return result;
}

double azuma_bound(double lambda, const std::vector<double>& cs) {
    if (lambda == 0.0) return 1.0;
    if (!(lambda > 0.0)) throw std::invalid_argument("azuma_bound: lambda must be >= 0");
    double sum = 0.0;
    for (double c : cs) sum += c * c;
    if (sum == 0.0) return 0.0;
    return std::exp(-lambda * lambda / (2.0 * sum));
}

double binomial_upper_tail(int count, double p, double threshold) {
    if (count < 0) throw std::invalid_argument("binomial_upper_tail: count must be >= 0");
    if (threshold < 0.0) return 1.0;
    if (!(p > 0.0)) return 0.0;
    if (p >= 1.0) return static_cast<double>(count) > threshold ? 1.0 : 0.0;
    int cap = static_cast<int>(std::floor(threshold));
    if (cap >= count) return 0.0;
    double logp = std::log(p);
    double log1mp = std::log1p(-p);
    double lgn = std::lgamma(static_cast<double>(count) + 1.0);
    double cdf = 0.0;
    for (int i = 0; i <= cap; ++i) {
        double logpmf = lgn - std::lgamma(static_cast<double>(i) + 1.0) -
                        std::lgamma(static_cast<double>(count - i) + 1.0) +
                        static_cast<double>(i) * logp +
                        static_cast<double>(count - i) * log1mp;
        cdf += std::exp(logpmf);
    }
    double tail = 1.0 - cdf;
    return tail < 0.0 ? 0.0 : tail;
}

BoundedDifferenceResult bounded_difference_check(const NetworkInstance& inst,
                                                 const RoleAssignment& roles, int t_index,
                                                 const CutSpec& cut, double eta,
                                                 const EpsilonSchedule& eps,
                                                 const ExpectationTable& table) {
    if (inst.sinr.mode != CapacityMode::ThresholdRate)
        throw std::invalid_argument("bounded_difference_check: threshold mode only");
    BoundedDifferenceResult out;
    double R = inst.sinr.R;
    if (inst.constant_power()) {
        // Without power randomness every link state is already determined
        // by the layout; exposing links reveals nothing new.
        out.holds = true;
        return out;
    }
    if (t_index < 0 || t_index >= static_cast<int>(roles.destinations.size()))
        throw std::invalid_argument("bounded_difference_check: t_index out of range");

    double level = coupled_interference_level(SinrModel::LowerCoupled, eps, table, true);
    double needed = inst.sinr.N0 + inst.sinr.gamma * level;
    if (!(needed > 0.0)) {
        // Every link is unconditionally on; the cut value is deterministic.
        out.holds = true;
        return out;
    }
    double gain_scale = inst.sinr.beta * needed / (1.0 + inst.sinr.gamma * inst.sinr.beta);

    const PowerModel& pw = inst.powers.model;
    int m = static_cast<int>(roles.relays.size());
    std::vector<char> on_source_side(static_cast<std::size_t>(m), 0);
    for (int idx : cut.source_side) {
        if (idx < 0 || idx >= m)
            throw std::invalid_argument("bounded_difference_check: relay index out of range");
        on_source_side[static_cast<std::size_t>(idx)] = 1;
    }
    int t_node = roles.destinations[static_cast<std::size_t>(t_index)];

    // Cut links grouped by transmitter, each group in exposure order:
    // the source's links first, then each source-side relay's links into
    // the sink side followed by its link into the destination.
    struct Group {
        int src_node;
        std::vector<double> thresholds; // required power per sensitive link
    };
    std::vector<Group> groups;
    auto add_edge = [&](Group& g, int to_node) {
        double gain = inst.gain(g.src_node, to_node);
        double p_star = gain_scale / gain;
        double s = pw.survival(p_star);
        if (s <= 0.0 || s >= 1.0) return; // link state fixed for every power draw
        g.thresholds.push_back(p_star);
    };
    {
        Group g{roles.s, {}};
        for (int v = 0; v < m; ++v)
            if (!on_source_side[static_cast<std::size_t>(v)])
                add_edge(g, roles.relays[static_cast<std::size_t>(v)]);
        groups.push_back(std::move(g));
    }
    for (int u = 0; u < m; ++u) {
        if (!on_source_side[static_cast<std::size_t>(u)]) continue;
        Group g{roles.relays[static_cast<std::size_t>(u)], {}};
        for (int v = 0; v < m; ++v)
            if (!on_source_side[static_cast<std::size_t>(v)])
                add_edge(g, roles.relays[static_cast<std::size_t>(v)]);
        add_edge(g, t_node);
        groups.push_back(std::move(g));
    }

    double support_lo = pw.lower();
    double support_hi_open = pw.upper() * 2.0 + 1.0; // strictly above every atom

    for (const Group& g : groups) {
        int q = static_cast<int>(g.thresholds.size());
        out.sensitive_edges += q;
        if (q == 0) continue;
        if (q > 20)
            throw std::invalid_argument(
                "bounded_difference_check: too many sensitive links on one transmitter");
        for (int h = 0; h < q; ++h) {
            double worst = 0.0;
            for (std::uint32_t pattern = 0; pattern < (1u << h); ++pattern) {
                double lo = support_lo;
                double hi = support_hi_open;
                for (int e = 0; e < h; ++e) {
                    double thr = g.thresholds[static_cast<std::size_t>(e)];
                    if (pattern & (1u << e))
                        lo = std::max(lo, thr);
                    else
                        hi = std::min(hi, thr);
                }
                if (pw.interval_mass(lo, hi) <= 0.0) continue;
                double p_h = g.thresholds[static_cast<std::size_t>(h)];
                double on_lo = std::max(lo, p_h);
                double on_hi = hi;
                double off_lo = lo;
                double off_hi = std::min(hi, p_h);
                if (pw.interval_mass(on_lo, on_hi) <= 0.0 ||
                    pw.interval_mass(off_lo, off_hi) <= 0.0)
                    continue; // one branch impossible under this history
                double sum = 0.0;
                for (int gx = h + 1; gx < q; ++gx) {
                    double thr = g.thresholds[static_cast<std::size_t>(gx)];
                    double p_on = pw.conditional_survival(thr, on_lo, on_hi);
                    double p_off = pw.conditional_survival(thr, off_lo, off_hi);
                    sum += std::fabs(p_on - p_off);
                }
                worst = std::max(worst, 1.0 + sum);
            }
            out.max_diff = std::max(out.max_diff, R * worst);
        }
    }
    out.holds = out.max_diff <= eta * R * (1.0 + 1e-12);
    return out;
}

} // namespace sinrcap
