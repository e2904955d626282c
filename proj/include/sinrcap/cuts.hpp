#pragma once

#include <vector>

#include "sinrcap/network.hpp"
#include "sinrcap/rng.hpp"

namespace sinrcap {

// Disjoint source, destination and relay roles drawn uniformly from the
// node set.
struct RoleAssignment {
    int s = 0;
    std::vector<int> destinations;
    std::vector<int> relays;
};

RoleAssignment make_roles(int n, int l, int m, Rng& rng);

// Relay indices (positions within the relay list, not node ids) on the
// source side of a cut, sorted ascending.
struct CutSpec {
    std::vector<int> source_side;

    int k() const { return static_cast<int>(source_side.size()); }
};

// Dense capacity matrix for one source-destination flow problem.
// Node 0 is the source, 1..m the relays, m+1 the destination. There are no
// direct source-destination links, and nothing enters the source or leaves
// the destination, so those capacities stay zero.
class CapacitatedDigraph {
  public:
    CapacitatedDigraph(int m, double R, CapacityMode mode)
        : m_(m), R_(R), mode_(mode),
          caps_(static_cast<std::size_t>((m + 2) * (m + 2)), 0.0) {
        if (m < 1) throw std::invalid_argument("CapacitatedDigraph: need m >= 1");
    }

    int relay_count() const { return m_; }
    int size() const { return m_ + 2; }
    int source() const { return 0; }
    int sink() const { return m_ + 1; }
    double rate() const { return R_; }
    CapacityMode mode() const { return mode_; }

    double cap(int u, int v) const {
        return caps_[static_cast<std::size_t>(u * size() + v)];
    }
    void set_cap(int u, int v, double c) {
        caps_[static_cast<std::size_t>(u * size() + v)] = c;
    }

  private:
    int m_;
    double R_;
    CapacityMode mode_;
    std::vector<double> caps_;
};

// Flow digraph toward destinations[t_index] under the chosen channel.
// Capacities always come from the full instance, so nodes outside the
// digraph, including the other destinations, still interfere. When
// include_other_destinations is set, the other destinations take relay
// slots after the dedicated relays. For the actual channel, interference
// points at per-node totals (gain totals under constant power, received
// power otherwise); pass nullptr to have them computed on the fly. Coupled
// channels use their fixed level instead.
CapacitatedDigraph build_digraph(const NetworkInstance& inst, const RoleAssignment& roles,
                                 int t_index, SinrModel model, const EpsilonSchedule& eps,
                                 const ExpectationTable& table,
                                 const std::vector<double>* interference,
                                 bool include_other_destinations);

// Total capacity crossing from {source} + the cut's source side to the
// rest: source links into sink-side relays, relay links across the cut,
// and source-side relay links into the destination.
double cut_capacity(const CapacitatedDigraph& g, const CutSpec& cut);

inline double expected_cut_capacity(int m, int k, double mean_link_capacity) {
    return static_cast<double>(m + k * (m - k)) * mean_link_capacity;
}

struct MinCutResult {
    double value = 0.0;
    CutSpec cut;
};

// Exhaustive minimum over all 2^m relay partitions. Ties resolve to the
// lexicographically smallest sorted index set. Guarded to m <= 20.
MinCutResult min_cut_bruteforce(const CapacitatedDigraph& g);

// Dinic max-flow. Threshold-mode capacities are exact multiples of the
// rate and are routed through integer arithmetic; Gaussian-mode flows run
// on doubles with a relative residual floor.
double max_flow(const CapacitatedDigraph& g);

struct CodingCapacityResult {
    double value = 0.0;
    std::vector<double> per_destination;
    int argmin = 0;
};

// Network coding capacity toward a destination set: the smallest
// max-flow among the per-destination problems.
CodingCapacityResult coding_capacity(const NetworkInstance& inst, const RoleAssignment& roles,
                                     SinrModel model, const EpsilonSchedule& eps,
                                     const ExpectationTable& table,
                                     const std::vector<double>* interference,
                                     bool include_other_destinations);

} // namespace sinrcap
