#pragma once

#include <functional>
#include <optional>

#include "sinrcap/geometry.hpp"
#include "sinrcap/network.hpp"
#include "sinrcap/power.hpp"
#include "sinrcap/tables.hpp"

namespace sinrcap {

// Density of the distance between two independent uniform points on the
// unit torus. Supported on [0, sqrt(2)/2]; the second branch removes the
// part of the circle of radius r that wraps past the half-width.
double pair_distance_density(double r);

// Adaptive Simpson quadrature to a relative tolerance on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol);

// Mean gain between two independent uniform points, by piecewise
// quadrature with breakpoints at the near-field edge and the half-width.
double expected_path_loss(const PathLossModel& loss);

// Deviation fractions sized so the interference tail probabilities decay
// like 1/n^2.
EpsilonSchedule compute_epsilons(int n, double E_L, double E_P);

struct EstimationConfig {
    long long samples = 1'000'000;
    std::uint64_t seed = 123456789;
};

// Connection radius under a coupled channel with fixed interference level:
// a transmitter at power p reaches exactly the receivers within the
// returned distance. Empty when even the near-field gain is too weak;
// infinity when the denominator of the SINR can never be positive, which
// makes every link clean.
std::optional<double> try_coupled_connection_radius(const PathLossModel& loss,
                                                    const SinrParams& sinr, double noise,
                                                    double level, double p);

// The four radii bracketing power-sensitive links for the two coupled
// channels. Throws std::domain_error naming the radius that has no
// positive solution.
CouplingRadii coupling_radii(const PathLossModel& loss, const SinrParams& sinr,
                             const EpsilonSchedule& eps, double E_I, double p_min,
                             double p_max);

// Coefficient relating the annulus width to the interference level:
// r_max^2 - r_min^2 times [N0 + gamma * level]^(2/alpha).
double B_coefficient(const PathLossModel& loss, const SinrParams& sinr, double p_min,
                     double p_max);

// Mean link capacity under a coupled channel with the given interference
// level, threshold mode only: the on-probability is the torus disk area of
// the power-dependent connection radius, averaged over the power law.
double coupled_mean_capacity(const PathLossModel& loss, const PowerModel& power,
                             const SinrParams& sinr, double level);

struct McEstimate {
    double mean = 0.0;
    double se = 0.0;
};

// Monte Carlo estimate of the same mean by direct link draws; the second
// route for cross-checking coupled_mean_capacity, and the only route in
// Gaussian mode.
McEstimate mc_coupled_mean_capacity(const PathLossModel& loss, const PowerModel& power,
                                    const SinrParams& sinr, double level, long long samples,
                                    std::uint64_t seed);

// Population table for a network of n nodes: factor means in closed form,
// mean link capacity by Monte Carlo over fresh layouts, coupled means in
// closed form when threshold mode permits.
ExpectationTable estimate_expectations(const PathLossModel& loss, const PowerModel& power,
                                       const SinrParams& sinr, int n,
                                       const EstimationConfig& cfg);

} // namespace sinrcap
