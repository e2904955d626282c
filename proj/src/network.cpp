#include "sinrcap/network.hpp"

#include <omp.h>

namespace sinrcap {

NetworkInstance make_instance(int n, const PathLossModel& loss, const PowerModel& power,
                              const SinrParams& sinr, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("make_instance: need n >= 2");
    loss.validate();
    power.validate();
    sinr.validate();
    NetworkInstance inst;
    inst.loss = loss;
    inst.sinr = sinr;
    inst.powers.model = power;
    inst.points.resize(static_cast<std::size_t>(n));
    inst.powers.values.resize(static_cast<std::size_t>(n));
    Rng rng(seed);
    for (auto& p : inst.points) {
        p.x = rng.uniform01();
        p.y = rng.uniform01();
    }
    for (auto& v : inst.powers.values) v = power.sample(rng);
    return inst;
}

namespace {

// Kahan sum of term(k) over k != j, ascending. Ascending order plus the
// compensation keeps repeated evaluations and the parallel per-receiver
// split bit-for-bit identical.
template <typename Term>
double compensated_total(int n, int j, Term term) {
    double sum = 0.0;
    double comp = 0.0;
    for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        double y = term(k) - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace

double interference_J(const NetworkInstance& inst, int j) {
    const auto& pts = inst.points;
    const auto& pj = pts[static_cast<std::size_t>(j)];
    return compensated_total(inst.n(), j, [&](int k) {
        return inst.loss(torus_distance(pts[static_cast<std::size_t>(k)], pj));
    });
}

double interference_I(const NetworkInstance& inst, int j) {
    const auto& pts = inst.points;
    const auto& pj = pts[static_cast<std::size_t>(j)];
    return compensated_total(inst.n(), j, [&](int k) {
        return inst.powers.values[static_cast<std::size_t>(k)] *
               inst.loss(torus_distance(pts[static_cast<std::size_t>(k)], pj));
    });
}

InterferencePair interference_both(const NetworkInstance& inst, int j) {
    const auto& pts = inst.points;
    const auto& pj = pts[static_cast<std::size_t>(j)];
    double sum_j = 0.0;
    double comp_j = 0.0;
    double sum_i = 0.0;
    double comp_i = 0.0;
    for (int k = 0; k < inst.n(); ++k) {
        if (k == j) continue;
        double gain = inst.loss(torus_distance(pts[static_cast<std::size_t>(k)], pj));
        double yj = gain - comp_j;
        double tj = sum_j + yj;
        comp_j = (tj - sum_j) - yj;
        sum_j = tj;
        double weighted = inst.powers.values[static_cast<std::size_t>(k)] * gain;
        double yi = weighted - comp_i;
        double ti = sum_i + yi;
        comp_i = (ti - sum_i) - yi;
        sum_i = ti;
    }
    return {sum_j, sum_i};
}

void interference_all_both(const NetworkInstance& inst, std::vector<double>& J,
                           std::vector<double>& I, bool parallel) {
    int n = inst.n();
    J.resize(static_cast<std::size_t>(n));
    I.resize(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < n; ++j) {
        InterferencePair p = interference_both(inst, j);
        J[static_cast<std::size_t>(j)] = p.J;
        I[static_cast<std::size_t>(j)] = p.I;
    }
}

std::vector<double> interference_all_J(const NetworkInstance& inst, bool parallel) {
    int n = inst.n();
    std::vector<double> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = interference_J(inst, j);
    return out;
}

std::vector<double> interference_all_I(const NetworkInstance& inst, bool parallel) {
    int n = inst.n();
    std::vector<double> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = interference_I(inst, j);
    return out;
}

double sinr_with_interference(const NetworkInstance& inst, int i, int j, double interference) {
    if (i == j) throw std::invalid_argument("sinr_with_interference: need i != j");
    double L = inst.gain(i, j);
    if (inst.constant_power()) {
        double noise = inst.sinr.N0 / inst.powers.model.p0;
        return sinr_form(L, noise, inst.sinr.gamma, interference);
    }
    double signal = inst.powers.values[static_cast<std::size_t>(i)] * L;
    return sinr_form(signal, inst.sinr.N0, inst.sinr.gamma, interference);
}

double sinr_value(const NetworkInstance& inst, int i, int j) {
    double interference =
        inst.constant_power() ? interference_J(inst, j) : interference_I(inst, j);
    return sinr_with_interference(inst, i, j, interference);
}

double sinr_direct(const NetworkInstance& inst, int i, int j) {
    if (i == j) throw std::invalid_argument("sinr_direct: need i != j");
    const auto& pts = inst.points;
    const auto& pj = pts[static_cast<std::size_t>(j)];
    double sum = 0.0;
    for (int k = 0; k < inst.n(); ++k) {
        if (k == i || k == j) continue;
        sum += inst.powers.values[static_cast<std::size_t>(k)] *
               inst.loss(torus_distance(pts[static_cast<std::size_t>(k)], pj));
    }
    double num = inst.powers.values[static_cast<std::size_t>(i)] * inst.gain(i, j);
    double den = inst.sinr.N0 + inst.sinr.gamma * sum;
    return num / den;
}

double sinr_coupled(const NetworkInstance& inst, int i, int j, SinrModel model,
                    const EpsilonSchedule& eps, const ExpectationTable& table) {
    if (model == SinrModel::Actual) return sinr_value(inst, i, j);
    double level = coupled_interference_level(model, eps, table, !inst.constant_power());
    return sinr_with_interference(inst, i, j, level);
}

int annulus_count(const NetworkInstance& inst, int j, double r_in, double r_out) {
    if (!(r_in >= 0.0) || !(r_out >= r_in))
        throw std::invalid_argument("annulus_count: need 0 <= r_in <= r_out");
    const auto& pts = inst.points;
    const auto& pj = pts[static_cast<std::size_t>(j)];
    double lo2 = r_in * r_in;
    double hi2 = r_out * r_out;
    int count = 0;
    for (int k = 0; k < inst.n(); ++k) {
        if (k == j) continue;
        double d2 = torus_distance2(pts[static_cast<std::size_t>(k)], pj);
        if (d2 > lo2 && d2 <= hi2) ++count;
    }
    return count;
}

std::vector<int> annulus_counts_all(const NetworkInstance& inst, double r_in, double r_out,
                                    bool parallel) {
    int n = inst.n();
    std::vector<int> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(j)] = annulus_count(inst, j, r_in, r_out);
    return out;
}

namespace reference {

double torus_distance(const TorusPoint& a, const TorusPoint& b) {
    double best = std::numeric_limits<double>::infinity();
    for (int sx = -1; sx <= 1; ++sx) {
        for (int sy = -1; sy <= 1; ++sy) {
            double dx = a.x - b.x + sx;
            double dy = a.y - b.y + sy;
            double d = std::sqrt(dx * dx + dy * dy);
            if (d < best) best = d;
        }
    }
    return best;
}

double interference_J(const NetworkInstance& inst, int j) {
    long double sum = 0.0L;
    for (int k = 0; k < inst.n(); ++k) {
        if (k == j) continue;
        sum += static_cast<long double>(
            inst.loss(reference::torus_distance(inst.points[static_cast<std::size_t>(k)],
                                     inst.points[static_cast<std::size_t>(j)])));
    }
    return static_cast<double>(sum);
}

double interference_I(const NetworkInstance& inst, int j) {
    long double sum = 0.0L;
    for (int k = 0; k < inst.n(); ++k) {
        if (k == j) continue;
        sum += static_cast<long double>(inst.powers.values[static_cast<std::size_t>(k)]) *
               static_cast<long double>(
                   inst.loss(reference::torus_distance(inst.points[static_cast<std::size_t>(k)],
                                            inst.points[static_cast<std::size_t>(j)])));
    }
    return static_cast<double>(sum);
}

double sinr(const NetworkInstance& inst, int i, int j) {
    long double sum = 0.0L;
    for (int k = 0; k < inst.n(); ++k) {
        if (k == i || k == j) continue;
        sum += static_cast<long double>(inst.powers.values[static_cast<std::size_t>(k)]) *
               static_cast<long double>(
                   inst.loss(reference::torus_distance(inst.points[static_cast<std::size_t>(k)],
                                            inst.points[static_cast<std::size_t>(j)])));
    }
    long double num = static_cast<long double>(inst.powers.values[static_cast<std::size_t>(i)]) *
                      static_cast<long double>(
                          inst.loss(reference::torus_distance(inst.points[static_cast<std::size_t>(i)],
                                                   inst.points[static_cast<std::size_t>(j)])));
    long double den = static_cast<long double>(inst.sinr.N0) +
                      static_cast<long double>(inst.sinr.gamma) * sum;
    return static_cast<double>(num / den);
}

} // namespace reference

} // namespace sinrcap
