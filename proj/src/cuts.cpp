#include "sinrcap/cuts.hpp"

#include <algorithm>
#include <cmath>

namespace sinrcap {

RoleAssignment make_roles(int n, int l, int m, Rng& rng) {
    if (l < 1 || m < 1) throw std::invalid_argument("make_roles: need l >= 1 and m >= 1");
    if (l + m + 1 > n) throw std::invalid_argument("make_roles: need l + m + 1 <= n");
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    rng.shuffle(perm);
    RoleAssignment roles;
    roles.s = perm[0];
    roles.destinations.assign(perm.begin() + 1, perm.begin() + 1 + l);
    roles.relays.assign(perm.begin() + 1 + l, perm.begin() + 1 + l + m);
    return roles;
}

CapacitatedDigraph build_digraph(const NetworkInstance& inst, const RoleAssignment& roles,
                                 int t_index, SinrModel model, const EpsilonSchedule& eps,
                                 const ExpectationTable& table,
                                 const std::vector<double>* interference,
                                 bool include_other_destinations) {
    if (t_index < 0 || t_index >= static_cast<int>(roles.destinations.size()))
        throw std::invalid_argument("build_digraph: t_index out of range");
    int t_node = roles.destinations[static_cast<std::size_t>(t_index)];

    std::vector<int> relay_nodes = roles.relays;
    if (include_other_destinations) {
        for (int d = 0; d < static_cast<int>(roles.destinations.size()); ++d) {
            if (d != t_index)
                relay_nodes.push_back(roles.destinations[static_cast<std::size_t>(d)]);
        }
    }
    int m = static_cast<int>(relay_nodes.size());

    bool actual = model == SinrModel::Actual;
    double level = 0.0;
    if (!actual)
        level = coupled_interference_level(model, eps, table, !inst.constant_power());

    std::vector<double> computed;
    if (actual && interference == nullptr) {
        computed = inst.constant_power() ? interference_all_J(inst, false)
                                         : interference_all_I(inst, false);
        interference = &computed;
    }
    auto interference_at = [&](int node) {
        return actual ? (*interference)[static_cast<std::size_t>(node)] : level;
    };
    auto capacity = [&](int from_node, int to_node) {
        return link_capacity_with_interference(inst, from_node, to_node,
                                               interference_at(to_node));
    };

    CapacitatedDigraph g(m, inst.sinr.R, inst.sinr.mode);
    for (int v = 0; v < m; ++v)
        g.set_cap(g.source(), v + 1, capacity(roles.s, relay_nodes[static_cast<std::size_t>(v)]));
    for (int u = 0; u < m; ++u) {
        int u_node = relay_nodes[static_cast<std::size_t>(u)];
        for (int v = 0; v < m; ++v) {
            if (u == v) continue;
            g.set_cap(u + 1, v + 1, capacity(u_node, relay_nodes[static_cast<std::size_t>(v)]));
        }
        g.set_cap(u + 1, g.sink(), capacity(u_node, t_node));
    }
    return g;
}

double cut_capacity(const CapacitatedDigraph& g, const CutSpec& cut) {
    int m = g.relay_count();
    std::vector<char> on_source_side(static_cast<std::size_t>(g.size()), 0);
    on_source_side[static_cast<std::size_t>(g.source())] = 1;
    for (int idx : cut.source_side) {
        if (idx < 0 || idx >= m)
            throw std::invalid_argument("cut_capacity: relay index out of range");
        on_source_side[static_cast<std::size_t>(idx + 1)] = 1;
    }
    double total = 0.0;
    for (int u = 0; u < g.size(); ++u) {
        if (!on_source_side[static_cast<std::size_t>(u)]) continue;
        for (int v = 0; v < g.size(); ++v) {
            if (on_source_side[static_cast<std::size_t>(v)]) continue;
            total += g.cap(u, v);
        }
    }
    return total;
}

MinCutResult min_cut_bruteforce(const CapacitatedDigraph& g) {
    int m = g.relay_count();
    if (m > 20) throw std::invalid_argument("min_cut_bruteforce: m > 20 is intractable");
    MinCutResult best;
    bool first = true;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        CutSpec cut;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) cut.source_side.push_back(i);
        double value = cut_capacity(g, cut);
        bool better = first || value < best.value;
        if (!better && value == best.value) {
            better = std::lexicographical_compare(cut.source_side.begin(),
                                                  cut.source_side.end(),
                                                  best.cut.source_side.begin(),
                                                  best.cut.source_side.end());
        }
        if (better) {
            best.value = value;
            best.cut = std::move(cut);
            first = false;
        }
    }
    return best;
}

namespace {

// Dinic blocking-flow max-flow on an adjacency list. Instantiated with
// integers for threshold mode and doubles for Gaussian mode.
template <typename Cap>
class Dinic {
  public:
    Dinic(int nodes, Cap floor) : adj_(static_cast<std::size_t>(nodes)), floor_(floor) {}

    void add_edge(int u, int v, Cap c) {
        adj_[static_cast<std::size_t>(u)].push_back(
            {v, c, static_cast<int>(adj_[static_cast<std::size_t>(v)].size())});
        adj_[static_cast<std::size_t>(v)].push_back(
            {u, Cap(0), static_cast<int>(adj_[static_cast<std::size_t>(u)].size()) - 1});
    }

    Cap run(int s, int t) {
        Cap total(0);
        while (bfs(s, t)) {
            iter_.assign(adj_.size(), 0);
            while (true) {
                Cap pushed = dfs(s, t, unbounded());
                if (!(pushed > floor_)) break;
                total += pushed;
            }
        }
        return total;
    }

  private:
    struct Edge {
        int to;
        Cap cap;
        int rev;
    };

    static Cap unbounded() { return std::numeric_limits<Cap>::max(); }

    bool bfs(int s, int t) {
        level_.assign(adj_.size(), -1);
        level_[static_cast<std::size_t>(s)] = 0;
        std::vector<int> queue{s};
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int u = queue[head];
            for (const Edge& e : adj_[static_cast<std::size_t>(u)]) {
                if (e.cap > floor_ && level_[static_cast<std::size_t>(e.to)] < 0) {
                    level_[static_cast<std::size_t>(e.to)] =
                        level_[static_cast<std::size_t>(u)] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        return level_[static_cast<std::size_t>(t)] >= 0;
    }

    Cap dfs(int u, int t, Cap limit) {
        if (u == t) return limit;
        for (int& i = iter_[static_cast<std::size_t>(u)];
             i < static_cast<int>(adj_[static_cast<std::size_t>(u)].size()); ++i) {
            Edge& e = adj_[static_cast<std::size_t>(u)][static_cast<std::size_t>(i)];
            if (!(e.cap > floor_) ||
                level_[static_cast<std::size_t>(e.to)] !=
                    level_[static_cast<std::size_t>(u)] + 1)
                continue;
            Cap pushed = dfs(e.to, t, std::min(limit, e.cap));
            if (pushed > floor_) {
                e.cap -= pushed;
                adj_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)].cap +=
                    pushed;
                return pushed;
            }
        }
        return Cap(0);
    }

    std::vector<std::vector<Edge>> adj_;
    std::vector<int> level_;
    std::vector<int> iter_;
    Cap floor_;
};

} // namespace

double max_flow(const CapacitatedDigraph& g) {
    int nodes = g.size();
    if (g.mode() == CapacityMode::ThresholdRate) {
        Dinic<long long> dinic(nodes, 0);
        for (int u = 0; u < nodes; ++u) {
            for (int v = 0; v < nodes; ++v) {
                double c = g.cap(u, v);
                if (c > 0.0) dinic.add_edge(u, v, std::llround(c / g.rate()));
            }
        }
        return static_cast<double>(dinic.run(g.source(), g.sink())) * g.rate();
    }
    double max_cap = 0.0;
    for (int u = 0; u < nodes; ++u)
        for (int v = 0; v < nodes; ++v) max_cap = std::max(max_cap, g.cap(u, v));
    double floor = max_cap * 1e-12;
    Dinic<double> dinic(nodes, floor);
    for (int u = 0; u < nodes; ++u) {
        for (int v = 0; v < nodes; ++v) {
            double c = g.cap(u, v);
            if (c > floor) dinic.add_edge(u, v, c);
        }
    }
    return dinic.run(g.source(), g.sink());
}

CodingCapacityResult coding_capacity(const NetworkInstance& inst, const RoleAssignment& roles,
                                     SinrModel model, const EpsilonSchedule& eps,
                                     const ExpectationTable& table,
                                     const std::vector<double>* interference,
                                     bool include_other_destinations) {
    if (roles.destinations.empty())
        throw std::invalid_argument("coding_capacity: need at least one destination");
    std::vector<double> computed;
    if (model == SinrModel::Actual && interference == nullptr) {
        computed = inst.constant_power() ? interference_all_J(inst, false)
                                         : interference_all_I(inst, false);
        interference = &computed;
    }
    CodingCapacityResult result;
    result.per_destination.resize(roles.destinations.size());
    for (int t = 0; t < static_cast<int>(roles.destinations.size()); ++t) {
        CapacitatedDigraph g = build_digraph(inst, roles, t, model, eps, table, interference,
                                             include_other_destinations);
        double flow = max_flow(g);
        result.per_destination[static_cast<std::size_t>(t)] = flow;
        if (t == 0 || flow < result.value) {
            result.value = flow;
            result.argmin = t;
        }
    }
    return result;
}

} // namespace sinrcap
