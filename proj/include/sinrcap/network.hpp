#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sinrcap/geometry.hpp"
#include "sinrcap/power.hpp"
#include "sinrcap/tables.hpp"

namespace sinrcap {

enum class CapacityMode {
    ThresholdRate, // rate R when the SINR clears the threshold, else 0
    GaussianRate,  // Shannon rate of the achieved SINR when it clears, else 0
};

struct SinrParams {
    double N0 = 0.02;    // ambient noise power
    double beta = 0.2;   // SINR threshold for a usable link
    double gamma = 0.02; // processing gain applied to interference
    double R = 1.0;      // rate carried by a usable link in threshold mode
    CapacityMode mode = CapacityMode::ThresholdRate;

    void validate() const {
        if (!(N0 > 0.0)) throw std::invalid_argument("SinrParams: N0 must be positive");
        if (!(beta > 0.0)) throw std::invalid_argument("SinrParams: beta must be positive");
        if (!(gamma >= 0.0)) throw std::invalid_argument("SinrParams: gamma must be nonnegative");
        if (!(R > 0.0)) throw std::invalid_argument("SinrParams: R must be positive");
    }
};

struct NetworkInstance {
    std::vector<TorusPoint> points;
    PowerAssignment powers;
    PathLossModel loss;
    SinrParams sinr;

    int n() const { return static_cast<int>(points.size()); }
    bool constant_power() const { return powers.model.mode == PowerMode::Constant; }
    double gain(int i, int j) const {
        return loss(torus_distance(points[static_cast<std::size_t>(i)],
                                   points[static_cast<std::size_t>(j)]));
    }
};

// Node layout first, transmit powers second, all from one stream, so an
// instance is a pure function of (n, models, seed).
NetworkInstance make_instance(int n, const PathLossModel& loss, const PowerModel& power,
                              const SinrParams& sinr, std::uint64_t seed);

// Total gain at receiver j from every other node, and the power-weighted
// variant. Compensated summation in node order; the error stays O(eps)
// regardless of n, which the SINR rewrite below relies on.
double interference_J(const NetworkInstance& inst, int j);
double interference_I(const NetworkInstance& inst, int j);

// Per-receiver totals for the whole network. The parallel path splits over
// receivers only; each inner sum is the same serial loop, so results are
// byte-identical to the serial path at any thread count.
std::vector<double> interference_all_J(const NetworkInstance& inst, bool parallel = true);
std::vector<double> interference_all_I(const NetworkInstance& inst, bool parallel = true);

// Both totals of one receiver in a single pass over the gains. Each total
// matches its single-quantity counterpart bit for bit, because the terms
// and the summation order are identical.
struct InterferencePair {
    double J = 0.0;
    double I = 0.0;
};

InterferencePair interference_both(const NetworkInstance& inst, int j);

void interference_all_both(const NetworkInstance& inst, std::vector<double>& J,
                           std::vector<double>& I, bool parallel = true);

// Shared SINR kernel: signal / (noise + gamma * (interference - signal)),
// where interference includes the signal's own contribution and is reduced
// by it here. Every channel variant goes through this one expression, so
// for fixed (signal, noise, gamma) the result is monotone nonincreasing in
// the interference argument, operation by operation, in floating point.
// A nonpositive denominator means interference fell below the self term;
// the link is then unconditionally clean and the SINR is reported infinite.
inline double sinr_form(double signal, double noise, double gamma, double interference) {
    double den = noise + gamma * (interference - signal);
    if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
    return signal / den;
}

enum class SinrModel {
    Actual,       // per-receiver interference as realized
    LowerCoupled, // interference pinned at (1 + eps') times its mean; pessimistic
    UpperCoupled, // interference pinned at (1 - eps) times its mean; optimistic
};

// The constant a coupled channel substitutes for the per-receiver
// interference total (gain total under constant power, received-power
// total otherwise).
inline double coupled_interference_level(SinrModel model, const EpsilonSchedule& eps,
                                         const ExpectationTable& table, bool heterogeneous) {
    double mean = heterogeneous ? table.E_I : table.E_J;
    switch (model) {
    case SinrModel::LowerCoupled: return (1.0 + eps.upper(heterogeneous)) * mean;
    case SinrModel::UpperCoupled: return (1.0 - eps.lower(heterogeneous)) * mean;
    case SinrModel::Actual: break;
    }
    throw std::logic_error("coupled_interference_level: actual channel has no fixed level");
}

// SINR of link i -> j given the interference total at j (gain total under
// constant power, received-power total otherwise).
double sinr_with_interference(const NetworkInstance& inst, int i, int j, double interference);

// SINR via the per-receiver rewrite: one interference total per receiver,
// self term removed inside sinr_form.
double sinr_value(const NetworkInstance& inst, int i, int j);

// SINR summed directly over the n-2 interferers, the way the model is
// defined. Slower and numerically independent of sinr_value; kept as the
// second route for consistency checks.
double sinr_direct(const NetworkInstance& inst, int i, int j);

// SINR under a coupled channel (Actual falls back to sinr_value).
double sinr_coupled(const NetworkInstance& inst, int i, int j, SinrModel model,
                    const EpsilonSchedule& eps, const ExpectationTable& table);

inline double capacity_from_sinr(double beta, const SinrParams& p) {
    if (!(beta >= p.beta)) return 0.0;
    if (p.mode == CapacityMode::ThresholdRate) return p.R;
    return 0.5 * std::log2(1.0 + beta);
}

inline double link_capacity(const NetworkInstance& inst, int i, int j) {
    return capacity_from_sinr(sinr_value(inst, i, j), inst.sinr);
}

inline double link_capacity_with_interference(const NetworkInstance& inst, int i, int j,
                                              double interference) {
    return capacity_from_sinr(sinr_with_interference(inst, i, j, interference), inst.sinr);
}

// Number of nodes k != j with r_in < d(k, j) <= r_out, compared in the
// squared domain.
int annulus_count(const NetworkInstance& inst, int j, double r_in, double r_out);

std::vector<int> annulus_counts_all(const NetworkInstance& inst, double r_in, double r_out,
                                    bool parallel = true);

// Plain serial long double implementations used as numerical oracles in
// tests. The distance minimizes over the nine unit translates instead of
// folding per axis.
namespace reference {

double torus_distance(const TorusPoint& a, const TorusPoint& b);
double interference_J(const NetworkInstance& inst, int j);
double interference_I(const NetworkInstance& inst, int j);
double sinr(const NetworkInstance& inst, int i, int j);

} // namespace reference

} // namespace sinrcap
