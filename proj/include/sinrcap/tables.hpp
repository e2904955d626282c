#pragma once

#include <cstdint>
#include <stdexcept>

namespace sinrcap {

// How a tabulated expectation was obtained, for run manifests.
struct TableProvenance {
    bool closed_form = true;
    long long samples = 0;
    std::uint64_t seed = 0;
};

// Population means the coupled channel models and the tail bounds consume.
// E_J and E_I are stored alongside the factors they are products of so the
// relation E_J = (n-1) E_L (and E_I = (n-1) E_P E_L) holds exactly in
// floating point.
struct ExpectationTable {
    int n = 0;
    double E_L = 0.0;       // mean gain between two independent uniform points
    double E_J = 0.0;       // mean total gain at a receiver from the n-1 others
    double E_P = 0.0;       // mean transmit power
    double E_I = 0.0;       // mean total received power from the n-1 others
    double C_bar = 0.0;     // mean point-to-point capacity under the actual channel
    double C_bar_se = 0.0;  // standard error of the C_bar estimate (0 if closed form)
    double C_bar_prime = 0.0;  // mean capacity under the pessimistic coupled channel
    double C_bar_dprime = 0.0; // mean capacity under the optimistic coupled channel
    TableProvenance provenance;

    static ExpectationTable from_factors(int n, double E_L, double E_P) {
        if (n < 2) throw std::invalid_argument("ExpectationTable: need n >= 2");
        ExpectationTable t;
        t.n = n;
        t.E_L = E_L;
        t.E_P = E_P;
        t.E_J = static_cast<double>(n - 1) * E_L;
        t.E_I = static_cast<double>(n - 1) * E_P * E_L;
        return t;
    }
};

// Deviation fractions used by the interference tail bounds and by the
// coupled channel models. Plain eps values guard the lower tail, primed
// values the upper tail.
struct EpsilonSchedule {
    double eps1 = 0.0;       // lower tail, constant power
    double eps1_prime = 0.0; // upper tail, constant power
    double eps2 = 0.0;       // lower tail, heterogeneous power
    double eps2_prime = 0.0; // upper tail, heterogeneous power

    double lower(bool heterogeneous) const { return heterogeneous ? eps2 : eps1; }
    double upper(bool heterogeneous) const { return heterogeneous ? eps2_prime : eps1_prime; }
};

// Distances bracketing the set of links whose state can depend on the
// interference level, for each coupled channel. Primed radii belong to the
// pessimistic channel, double primed to the optimistic one.
struct CouplingRadii {
    double r_min_prime = 0.0;
    double r_max_prime = 0.0;
    double r_min_dprime = 0.0;
    double r_max_dprime = 0.0;
};

} // namespace sinrcap
