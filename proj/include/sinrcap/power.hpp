#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sinrcap/rng.hpp"

namespace sinrcap {

enum class PowerMode {
    Constant,          // every node transmits at p0
    UniformContinuous, // i.i.d. uniform on [p_min, p_max]
    TwoPointMixture,   // p_min with weight w_min, else p_max
};

struct PowerModel {
    PowerMode mode = PowerMode::Constant;
    double p0 = 0.01;
    double p_min = 0.01;
    double p_max = 0.02;
    double w_min = 0.5;

    void validate() const {
        switch (mode) {
        case PowerMode::Constant:
            if (!(p0 > 0.0)) throw std::invalid_argument("PowerModel: p0 must be positive");
            break;
        case PowerMode::UniformContinuous:
        case PowerMode::TwoPointMixture:
            if (!(p_min > 0.0)) throw std::invalid_argument("PowerModel: p_min must be positive");
            if (!(p_max >= p_min))
                throw std::invalid_argument("PowerModel: need p_max >= p_min");
            if (mode == PowerMode::TwoPointMixture && !(w_min >= 0.0 && w_min <= 1.0))
                throw std::invalid_argument("PowerModel: w_min must lie in [0, 1]");
            break;
        }
    }

    bool heterogeneous() const { return mode != PowerMode::Constant; }

    double lower() const { return mode == PowerMode::Constant ? p0 : p_min; }
    double upper() const { return mode == PowerMode::Constant ? p0 : p_max; }

    double mean() const {
        switch (mode) {
        case PowerMode::Constant: return p0;
        case PowerMode::UniformContinuous: return 0.5 * (p_min + p_max);
        case PowerMode::TwoPointMixture: return w_min * p_min + (1.0 - w_min) * p_max;
        }
        return p0;
    }

    double sample(Rng& rng) const {
        switch (mode) {
        case PowerMode::Constant: return p0;
        case PowerMode::UniformContinuous: return rng.uniform(p_min, p_max);
        case PowerMode::TwoPointMixture: return rng.bernoulli(w_min) ? p_min : p_max;
        }
        return p0;
    }

    // Pr(P >= x). Degenerate two-point atoms (p_min == p_max) count the
    // whole mass at that single atom.
    double survival(double x) const {
        switch (mode) {
        case PowerMode::Constant:
            return x <= p0 ? 1.0 : 0.0;
        case PowerMode::UniformContinuous: {
            if (x <= p_min) return 1.0;
            if (x > p_max) return 0.0;
            if (p_max == p_min) return x <= p_max ? 1.0 : 0.0;
            return (p_max - x) / (p_max - p_min);
        }
        case PowerMode::TwoPointMixture: {
            double s = 0.0;
            if (x <= p_min) s += w_min;
            if (x <= p_max) s += 1.0 - w_min;
            return s;
        }
        }
        return 0.0;
    }

    // Pr(P in [lo, hi)). {P >= lo} splits into {lo <= P < hi} and
    // {P >= hi}, so the two survival values settle atoms at the endpoints
    // correctly on their own.
    double interval_mass(double lo, double hi) const {
        if (!(hi > lo)) return 0.0;
        double m = survival(lo) - survival(hi);
        if (m < 0.0) m = 0.0;
        if (m > 1.0) m = 1.0;
        return m;
    }

    // Pr(P >= x | P in [lo, hi)). Zero-mass intervals condition on nothing
    // and return 0.
    double conditional_survival(double x, double lo, double hi) const {
        double mass = interval_mass(lo, hi);
        if (mass <= 0.0) return 0.0;
        double eff_lo = x > lo ? x : lo;
        double num = interval_mass(eff_lo, hi);
        double r = num / mass;
        if (r < 0.0) r = 0.0;
        if (r > 1.0) r = 1.0;
        return r;
    }
};

struct PowerAssignment {
    PowerModel model;
    std::vector<double> values;
};

inline PowerAssignment sample_powers(const PowerModel& model, int n, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("sample_powers: n must be nonnegative");
    model.validate();
    PowerAssignment out;
    out.model = model;
    out.values.resize(static_cast<std::size_t>(n));
    Rng rng(seed);
    for (auto& v : out.values) v = model.sample(rng);
    return out;
}

} // namespace sinrcap
