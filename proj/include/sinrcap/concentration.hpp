#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "sinrcap/cuts.hpp"
#include "sinrcap/expectations.hpp"
#include "sinrcap/network.hpp"

namespace sinrcap {

enum class Scenario { ConstantPower, HeterogeneousPower };

// Optional shrinking of the top of the power range as n grows, keeping the
// expected number of power-sensitive neighbors bounded. The bottom of the
// range stays put and acts as a floor.
struct PowerScalingRule {
    bool enabled = false;
    double exponent = -0.5; // 1 - alpha/2 at the default attenuation exponent 3
    double reference_n = 500.0;
};

struct ExperimentConfig {
    Scenario scenario = Scenario::ConstantPower;
    int n = 2000;
    int m = 200;   // relay count
    int l = 1;     // destination count
    int k = 50;    // relays on the source side of the inspected cut
    int trials = 200;
    std::uint64_t base_seed = 1;
    double alpha_exponent = 1.0; // decay order in the 1/m^alpha capacity targets
    double eta = 1.0;            // assumed cap on power-sensitive neighbors
    double epsilon = 0.2;        // relative deviation checked in the cut experiment
    SinrParams sinr;
    PathLossModel loss;
    PowerModel power;
    PowerScalingRule scaling;
    EstimationConfig estimation;
    bool include_other_destinations_as_relays = true;
    int threads = 0; // 0 leaves the runtime default

    void validate() const;

    // Power model with the scaling rule applied at this n.
    PowerModel effective_power() const;
};

enum class Quantity {
    InterferenceJ,
    InterferenceI,
    CutCapacityK,
    CodingCapacity,
    AnnulusCount,
};

std::string quantity_name(Quantity q);
Quantity quantity_from_name(const std::string& name);

// One experiment's tail-versus-bound summary. Fields that do not apply to
// a quantity stay NaN (or -1 for the violation counter).
struct ConcentrationReport {
    Quantity quantity = Quantity::InterferenceJ;
    long long trials = 0;
    long long samples = 0;
    std::uint64_t seed = 0;

    double center = std::nan("");          // mean the thresholds are anchored to
    double lower_threshold = std::nan(""); // values at or below count as lower tail
    double upper_threshold = std::nan(""); // values at or above count as upper tail
    double empirical_mean = std::nan("");
    double empirical_sd = std::nan("");
    double lower_tail_freq = std::nan("");
    double upper_tail_freq = std::nan("");
    double theory_lower_bound = std::nan("");
    double theory_upper_bound = std::nan("");

    // Variant anchored to the looser bounded-difference constant used by
    // the capacity proofs (eta + 1 in place of eta).
    double alt_lower_threshold = std::nan("");
    double alt_upper_threshold = std::nan("");
    double alt_lower_tail_freq = std::nan("");
    double alt_upper_tail_freq = std::nan("");
    double alt_theory_lower_bound = std::nan("");
    double alt_theory_upper_bound = std::nan("");

    // Tail frequencies rescaled by the decay target, m^alpha / l below and
    // m^alpha above.
    double scaled_lower_freq = std::nan("");
    double scaled_upper_freq = std::nan("");

    long long sandwich_violations = -1;

    // Annulus-count experiments compare against the exact binomial law.
    double binomial_mean_prediction = std::nan("");
    double binomial_tail_prediction = std::nan("");
    bool family_exists = true;

    nlohmann::json to_json() const;
    static ConcentrationReport from_json(const nlohmann::json& j);
};

struct InterferenceRow {
    int trial = 0;
    int node = 0;
    double J = 0.0;
    double I = 0.0;
};

struct InterferenceResult {
    std::vector<InterferenceRow> rows;
    ConcentrationReport report;
    ExpectationTable table;
    EpsilonSchedule eps;
};

struct CutRow {
    int trial = 0;
    int k = 0;
    double C_k = 0.0;
    double C_k_prime = 0.0;
    double C_k_dprime = 0.0;
};

struct CutResult {
    std::vector<CutRow> rows;
    ConcentrationReport report;
    ExpectationTable table;
    EpsilonSchedule eps;
};

struct CapacityRow {
    int trial = 0;
    double C = 0.0;
    double C_prime = 0.0;
    double C_dprime = 0.0;
    int argmin_dest = 0;
    std::vector<double> per_destination; // actual-channel flow toward each destination
};

struct CapacityResult {
    std::vector<CapacityRow> rows;
    ConcentrationReport report;
    ExpectationTable table;
    EpsilonSchedule eps;
};

struct AnnulusRow {
    int trial = 0;
    int node = 0;
    int count_prime = -1; // -1 when the family has no radii
    int count_dprime = -1;
};

struct AnnulusResult {
    std::vector<AnnulusRow> rows;
    ConcentrationReport prime;  // family at the raised interference level
    ConcentrationReport dprime; // family at the lowered interference level
    bool prime_exists = false;
    bool dprime_exists = false;
    double r_min_prime = std::nan("");
    double r_max_prime = std::nan("");
    double r_min_dprime = std::nan("");
    double r_max_dprime = std::nan("");
    ExpectationTable table;
    EpsilonSchedule eps;
};

// Per-receiver interference totals across fresh layouts against the
// deviation thresholds and their Chernoff targets.
InterferenceResult run_interference_experiment(const ExperimentConfig& cfg);

// Capacity of a random cut of fixed size per layout, under the actual and
// both coupled channels, against the coupling-based tail targets.
CutResult run_cut_experiment(const ExperimentConfig& cfg);

// Network coding capacity per layout under the three channels, against the
// 1/m^alpha concentration targets.
CapacityResult run_capacity_experiment(const ExperimentConfig& cfg);

// Neighbor counts in the power-sensitive annuli against the exact binomial
// law. A family whose radii have no solution is reported absent rather
// than failing the run.
AnnulusResult run_annulus_experiment(const ExperimentConfig& cfg);

// Tail bounds for a sum of [0, 1]-scaled independent terms with
// dimensionless mean mu.
inline double chernoff_lower_tail_bound(double mu, double eps) {
    return std::exp(-mu * eps * eps / 2.0);
}
inline double chernoff_upper_tail_bound(double mu, double eps) {
    return std::exp(-mu * eps * eps / 3.0);
}

// Martingale tail bound exp(-lambda^2 / (2 sum c_i^2)); lambda = 0 gives
// the trivial bound 1.
double azuma_bound(double lambda, const std::vector<double>& cs);

// Pr(X > threshold) for X ~ Binomial(count, p), evaluated exactly.
double binomial_upper_tail(int count, double p, double threshold);

struct BoundedDifferenceResult {
    double max_diff = 0.0;
    bool holds = true;
    int sensitive_edges = 0;
};

// Empirical check of the martingale increment bound behind the
// heterogeneous cut lemma: with the layout frozen and only the transmit
// powers random, exposing the cut's links one at a time must never move
// the conditional expectation of the cut capacity by more than eta * R.
// Conditional link probabilities are enumerated exactly over the outcome
// patterns of earlier links sharing the transmitter.
BoundedDifferenceResult bounded_difference_check(const NetworkInstance& inst,
                                                 const RoleAssignment& roles, int t_index,
                                                 const CutSpec& cut, double eta,
                                                 const EpsilonSchedule& eps,
                                                 const ExpectationTable& table);

} // namespace sinrcap
