#include "sinrcap/expectations.hpp"

#include <algorithm>
#include <cmath>

namespace sinrcap {

double pair_distance_density(double r) {
    if (r <= 0.0 || r >= kMaxTorusDistance) return 0.0;
    if (r <= 0.5) return 2.0 * kPi * r;
    return 2.0 * kPi * r - 8.0 * r * std::acos(0.5 / r);
}

namespace {

double simpson_slice(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson_slice(a, m, fa, flm, fm);
    double right = simpson_slice(m, b, fm, frm, fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
    if (!(b > a)) return 0.0;
    double fa = f(a);
    double fb = f(b);
    double m = 0.5 * (a + b);
    double fm = f(m);
    double whole = simpson_slice(a, b, fa, fm, fb);
    // Scale the absolute budget off a first coarse pass; a second pass with
    // the refined estimate would only move the budget at the same order.
    double scale = std::fabs(whole);
    if (scale == 0.0) scale = 1.0;
    return adaptive_step(f, a, fa, b, fb, m, fm, whole, rel_tol * scale, 48);
}

double expected_path_loss(const PathLossModel& loss) {
    loss.validate();
    std::function<double(double)> integrand = [&loss](double r) {
        return loss(r) * pair_distance_density(r);
    };
    double bps[4] = {0.0, std::min(loss.d_near, kMaxTorusDistance), 0.5, kMaxTorusDistance};
    std::sort(bps, bps + 4);
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (bps[i + 1] > bps[i])
            total += adaptive_simpson(integrand, bps[i], bps[i + 1], 1e-10);
    }
    return total;
}

EpsilonSchedule compute_epsilons(int n, double E_L, double E_P) {
    if (n < 2) throw std::invalid_argument("compute_epsilons: need n >= 2");
    if (!(E_L > 0.0)) throw std::invalid_argument("compute_epsilons: E_L must be positive");
    if (!(E_P > 0.0)) throw std::invalid_argument("compute_epsilons: E_P must be positive");
    double logn = std::log(static_cast<double>(n));
    double mu_gain = static_cast<double>(n - 1) * E_L;
    double mu_power = static_cast<double>(n - 1) * E_P * E_L;
    EpsilonSchedule eps;
    eps.eps1 = std::sqrt(4.0 * logn / mu_gain);
    eps.eps1_prime = std::sqrt(6.0 * logn / mu_gain);
    eps.eps2 = std::sqrt(4.0 * logn / mu_power);
    eps.eps2_prime = std::sqrt(6.0 * logn / mu_power);
    return eps;
}

std::optional<double> try_coupled_connection_radius(const PathLossModel& loss,
                                                    const SinrParams& sinr, double noise,
                                                    double level, double p) {
    if (!(p > 0.0))
        throw std::invalid_argument("try_coupled_connection_radius: p must be positive");
    double effective_noise = noise + sinr.gamma * level;
    // Interference pinned below the negated noise floor leaves no positive
    // denominator; every link is clean at any distance.
    if (!(effective_noise > 0.0)) return std::numeric_limits<double>::infinity();
    double required_gain = sinr.beta * effective_noise / ((1.0 + sinr.gamma * sinr.beta) * p);
    if (required_gain > loss.max_value()) return std::nullopt;
    return loss.inverse(required_gain);
}

CouplingRadii coupling_radii(const PathLossModel& loss, const SinrParams& sinr,
                             const EpsilonSchedule& eps, double E_I, double p_min,
                             double p_max) {
    double level_hi = (1.0 + eps.eps2_prime) * E_I;
    double level_lo = (1.0 - eps.eps2) * E_I;
    struct Entry {
        const char* name;
        double level;
        double p;
        double CouplingRadii::* field;
    };
    const Entry entries[4] = {
        {"r_min_prime", level_hi, p_min, &CouplingRadii::r_min_prime},
        {"r_max_prime", level_hi, p_max, &CouplingRadii::r_max_prime},
        {"r_min_dprime", level_lo, p_min, &CouplingRadii::r_min_dprime},
        {"r_max_dprime", level_lo, p_max, &CouplingRadii::r_max_dprime},
    };
    CouplingRadii radii;
    for (const auto& e : entries) {
        auto r = try_coupled_connection_radius(loss, sinr, sinr.N0, e.level, e.p);
        if (!r)
            throw std::domain_error(std::string("coupling_radii: no positive solution for ") +
                                    e.name);
        radii.*(e.field) = *r;
    }
    return radii;
}

double B_coefficient(const PathLossModel& loss, const SinrParams& sinr, double p_min,
                     double p_max) {
    if (!(p_min > 0.0) || !(p_max >= p_min))
        throw std::invalid_argument("B_coefficient: need 0 < p_min <= p_max");
    double e = 2.0 / loss.alpha;
    return (std::pow(p_max, e) - std::pow(p_min, e)) *
           std::pow(loss.c * (1.0 + sinr.gamma * sinr.beta) / sinr.beta, e);
}

namespace {

// On-probability for a transmitter at power p under a fixed interference
// level: the torus disk area of its connection radius.
double on_probability(const PathLossModel& loss, const SinrParams& sinr, double noise,
                      double level, double p) {
    auto r = try_coupled_connection_radius(loss, sinr, noise, level, p);
    if (!r) return 0.0;
    return torus_disk_area(*r);
}

} // namespace

double coupled_mean_capacity(const PathLossModel& loss, const PowerModel& power,
                             const SinrParams& sinr, double level) {
    if (sinr.mode != CapacityMode::ThresholdRate)
        throw std::invalid_argument(
            "coupled_mean_capacity: closed form requires threshold mode");
    power.validate();
    switch (power.mode) {
    case PowerMode::Constant:
        return sinr.R * on_probability(loss, sinr, sinr.N0 / power.p0, level, 1.0);
    case PowerMode::TwoPointMixture:
        return sinr.R * (power.w_min * on_probability(loss, sinr, sinr.N0, level, power.p_min) +
                         (1.0 - power.w_min) *
                             on_probability(loss, sinr, sinr.N0, level, power.p_max));
    case PowerMode::UniformContinuous: {
        if (power.p_max == power.p_min)
            return sinr.R * on_probability(loss, sinr, sinr.N0, level, power.p_min);
        std::function<double(double)> f = [&](double p) {
            return on_probability(loss, sinr, sinr.N0, level, p);
        };
        double integral = adaptive_simpson(f, power.p_min, power.p_max, 1e-10);
        return sinr.R * integral / (power.p_max - power.p_min);
    }
    }
    return 0.0;
}

McEstimate mc_coupled_mean_capacity(const PathLossModel& loss, const PowerModel& power,
                                    const SinrParams& sinr, double level, long long samples,
                                    std::uint64_t seed) {
    if (samples < 1)
        throw std::invalid_argument("mc_coupled_mean_capacity: need samples >= 1");
    power.validate();
    sinr.validate();
    Rng rng(seed);
    bool constant = power.mode == PowerMode::Constant;
    double noise = constant ? sinr.N0 / power.p0 : sinr.N0;
    double sum = 0.0;
    double sumsq = 0.0;
    for (long long s = 0; s < samples; ++s) {
        TorusPoint a{rng.uniform01(), rng.uniform01()};
        TorusPoint b{rng.uniform01(), rng.uniform01()};
        double gain = loss(torus_distance(a, b));
        double signal = constant ? gain : power.sample(rng) * gain;
        double beta = sinr_form(signal, noise, sinr.gamma, level);
        double cap = capacity_from_sinr(beta, sinr);
        sum += cap;
        sumsq += cap * cap;
    }
    McEstimate est;
    double ns = static_cast<double>(samples);
    est.mean = sum / ns;
    double var = std::max(0.0, sumsq / ns - est.mean * est.mean);
    est.se = samples > 1 ? std::sqrt(var / (ns - 1.0)) : 0.0;
    return est;
}

ExpectationTable estimate_expectations(const PathLossModel& loss, const PowerModel& power,
                                       const SinrParams& sinr, int n,
                                       const EstimationConfig& cfg) {
    if (n < 2) throw std::invalid_argument("estimate_expectations: need n >= 2");
    if (cfg.samples < 1)
        throw std::invalid_argument("estimate_expectations: need samples >= 1");
    loss.validate();
    power.validate();
    sinr.validate();

    double E_L = expected_path_loss(loss);
    ExpectationTable table = ExpectationTable::from_factors(n, E_L, power.mean());
    table.provenance.samples = cfg.samples;
    table.provenance.seed = cfg.seed;

    // Mean link capacity under the actual channel: fresh layouts, one
    // receiver per layout, every other node as the transmitter. Layout
    // means are i.i.d., so their spread gives an honest standard error
    // even though links within one layout are dependent.
    long long instances = (cfg.samples + n - 2) / (n - 1);
    std::vector<double> means(static_cast<std::size_t>(instances));
    bool heterogeneous = power.heterogeneous();
    for (long long s = 0; s < instances; ++s) {
        std::uint64_t inst_seed = stream_seed(cfg.seed, static_cast<std::uint64_t>(s));
        NetworkInstance inst = make_instance(n, loss, power, sinr, inst_seed);
        Rng pick(splitmix64(inst_seed));
        int j = static_cast<int>(pick.below(static_cast<std::uint64_t>(n)));
        double interference =
            heterogeneous ? interference_I(inst, j) : interference_J(inst, j);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            acc += link_capacity_with_interference(inst, i, j, interference);
        }
        means[static_cast<std::size_t>(s)] = acc / static_cast<double>(n - 1);
    }
    double mean = 0.0;
    for (double v : means) mean += v;
    mean /= static_cast<double>(instances);
    double var = 0.0;
    for (double v : means) var += (v - mean) * (v - mean);
    table.C_bar = mean;
    table.C_bar_se = instances > 1 ? std::sqrt(var / (static_cast<double>(instances) *
                                                      (static_cast<double>(instances) - 1.0)))
                                   : 0.0;

    EpsilonSchedule eps = compute_epsilons(n, table.E_L, table.E_P);
    double mean_interference = heterogeneous ? table.E_I : table.E_J;
    double level_prime = (1.0 + eps.upper(heterogeneous)) * mean_interference;
    double level_dprime = (1.0 - eps.lower(heterogeneous)) * mean_interference;
    if (sinr.mode == CapacityMode::ThresholdRate) {
        table.C_bar_prime = coupled_mean_capacity(loss, power, sinr, level_prime);
        table.C_bar_dprime = coupled_mean_capacity(loss, power, sinr, level_dprime);
        table.provenance.closed_form = true;
    } else {
        table.C_bar_prime =
            mc_coupled_mean_capacity(loss, power, sinr, level_prime, cfg.samples,
                                     splitmix64(cfg.seed ^ 0x1)).mean;
        table.C_bar_dprime =
            mc_coupled_mean_capacity(loss, power, sinr, level_dprime, cfg.samples,
                                     splitmix64(cfg.seed ^ 0x2)).mean;
        table.provenance.closed_form = false;
    }
    return table;
}

} // namespace sinrcap
