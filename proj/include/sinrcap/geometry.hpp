#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sinrcap/rng.hpp"

namespace sinrcap {

inline constexpr double kPi = 3.14159265358979323846;

// Largest separation realizable on the unit torus: half the diagonal.
inline constexpr double kMaxTorusDistance = 0.70710678118654752440;

struct TorusPoint {
    double x = 0.0;
    double y = 0.0;
};

inline double wrap_unit(double v) {
    double w = v - std::floor(v);
    // floor(-1e-20) = -1 makes w == 1.0 for tiny negatives; fold it back.
    if (w >= 1.0) w = 0.0;
    return w;
}

// Squared shortest distance on the unit torus, per-axis minimal image.
// Kept separate so radius comparisons can avoid the square root.
inline double torus_distance2(const TorusPoint& a, const TorusPoint& b) {
    double dx = std::fabs(a.x - b.x);
    double dy = std::fabs(a.y - b.y);
    if (dx > 0.5) dx = 1.0 - dx;
    if (dy > 0.5) dy = 1.0 - dy;
    return dx * dx + dy * dy;
}

inline double torus_distance(const TorusPoint& a, const TorusPoint& b) {
    return std::sqrt(torus_distance2(a, b));
}

// Attenuation c * max(d, d_near)^(-alpha). The near-field floor keeps the
// gain finite for coincident points.
struct PathLossModel {
    double c = 1e-3 / 64.0;
    double alpha = 3.0;
    double d_near = 1e-3;

    PathLossModel() = default;
    PathLossModel(double c_, double alpha_, double d_near_)
        : c(c_), alpha(alpha_), d_near(d_near_) {
        validate();
    }

    void validate() const {
        if (!(c > 0.0)) throw std::invalid_argument("PathLossModel: c must be positive");
        if (!(alpha > 0.0)) throw std::invalid_argument("PathLossModel: alpha must be positive");
        if (!(d_near > 0.0)) throw std::invalid_argument("PathLossModel: d_near must be positive");
    }

    double operator()(double d) const {
        double eff = d < d_near ? d_near : d;
        return c * std::pow(eff, -alpha);
    }

    // Largest attainable gain; values above it have no preimage.
    double max_value() const { return c * std::pow(d_near, -alpha); }

    // Distance at which the gain equals v. Values above max_value() are a
    // caller error; values attained only inside the near-field plateau map
    // to d_near.
    double inverse(double v) const {
        if (!(v > 0.0)) throw std::domain_error("PathLossModel::inverse: value must be positive");
        double ceiling = max_value();
        if (v > ceiling) throw std::domain_error("PathLossModel::inverse: value exceeds max attenuation");
        double d = std::pow(c / v, 1.0 / alpha);
        return d < d_near ? d_near : d;
    }
};

// n points i.i.d. uniform on the unit torus; x then y per point so the
// layout is a pure function of the seed.
inline std::vector<TorusPoint> sample_points(int n, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("sample_points: n must be nonnegative");
    Rng rng(seed);
    std::vector<TorusPoint> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) {
        p.x = rng.uniform01();
        p.y = rng.uniform01();
    }
    return pts;
}

// Area of the set of torus points within distance r of a fixed point.
// A plain disk until r = 1/2, then the four lens caps that wrap past the
// facing edges are removed, and the whole torus is covered at half the
// diagonal.
inline double torus_disk_area(double r) {
    if (r <= 0.0) return 0.0;
    if (r >= kMaxTorusDistance) return 1.0;
    if (r <= 0.5) return kPi * r * r;
    return kPi * r * r - 4.0 * r * r * std::acos(0.5 / r) + std::sqrt(4.0 * r * r - 1.0);
}

} // namespace sinrcap
