#pragma once

// QoS-aware path selection over the multigraph: occupation-weighted link
// costs, reduction to a simple graph, deterministic Dijkstra, and the
// relaxation loop that lowers the occupation exponent m and finally splits
// the demand into fragments when no single path satisfies the delay bound.

#include <optional>
#include <vector>

#include "backhaul/core_graph.hpp"

namespace backhaul {

// Cost of carrying rate_mbps over one link at occupation exponent m:
//   occupation^m * mean_delay_ms   if the link is up and residual > rate_mbps,
//   +infinity                      otherwise.
// m == 0 uses the 0^0 == 1 convention, so every admissible link costs its
// mean delay.
double link_weight(const Link& link, double rate_mbps, double m);

// One directed step of a path, using interface k between from and to.
struct PathHop {
    int from = 0;
    int to = 0;
    int interface = 1;
    LinkId link_id() const { return LinkId(from, to, interface); }
    bool operator==(const PathHop&) const = default;
};

struct Fragment {
    double rate_mbps = 0.0;
    std::vector<PathHop> path;
    double sum_weight = 0.0;
    double sum_mean_delay_ms = 0.0;
    double m_used = 0.0;  // exponent in force when the fragment was admitted
};

struct RouteResult {
    bool feasible = false;  // false: demand rejected, topology left untouched
    std::vector<Fragment> fragments;
    int total_iterations = 0;  // Dijkstra invocations, counted even on failure
    QosProfile qos;
    double total_rate_mbps() const;
};

struct RoutingParams {
    double m_initial = 4.0;
    double m_step = 1.0;
    double min_fragment_mbps = 0.2;  // fragments at or below this never split
    bool valid() const {
        return m_initial >= 0.0 && m_step > 0.0 && min_fragment_mbps > 0.0;
    }
};

// Simple graph left after picking, for every node pair, the parallel
// interface of least weight. Ties prefer the smaller mean delay, then the
// higher interface number.
struct ReducedEdge {
    int to = 0;
    int interface = 1;
    double weight = 0.0;
    double delay_ms = 0.0;
};

class ReducedGraph {
public:
    void add_node(int id);
    void add_edge(int a, int b, int interface, double weight, double delay_ms);
    bool has_node(int id) const { return adjacency_.count(id) != 0; }
    // Neighbors in ascending node order; empty for isolated nodes.
    const std::vector<ReducedEdge>& neighbors(int node) const;
    const std::map<int, std::vector<ReducedEdge>>& adjacency() const { return adjacency_; }
    // Edge a->b if present.
    const ReducedEdge* edge(int a, int b) const;

private:
    std::map<int, std::vector<ReducedEdge>> adjacency_;
};

// Collapses the multigraph to a simple graph for a demand of rate_mbps at
// exponent m. Node pairs whose every interface has infinite weight carry no
// edge; all topology nodes are kept.
ReducedGraph reduce_multigraph(const Topology& topo, double rate_mbps, double m);

struct PathSearchResult {
    std::vector<int> nodes;  // source..destination inclusive
    double sum_weight = 0.0;
    double sum_delay_ms = 0.0;
};

// Minimum-total-weight path by Dijkstra. Fully deterministic: ties prefer the
// smaller summed mean delay, then fewer hops, then the lexicographically
// smallest node sequence. Returns std::nullopt when no path exists; throws
// std::invalid_argument when either endpoint is missing. source == destination
// yields the trivial path (one node, zero edges, zero weight).
std::optional<PathSearchResult> shortest_path(const ReducedGraph& graph,
                                              int source, int destination);

// Sum of mean delays over the hops. Throws UnknownLinkError if any hop names
// a link absent from the topology.
double path_delay(const Topology& topo, const std::vector<PathHop>& path);

// Routes one demand from source to destination:
//   1. Dijkstra over the reduced graph at the current exponent m.
//   2. Admit the path if its mean-delay sum is within qos.max_delay_ms,
//      committing the fragment's load link by link.
//   3. Otherwise lower m by m_step (clamped at 0) and retry; once m is
//      exhausted, split the rate into two equal halves and route each half
//      independently (m restarts at m_initial), so later fragments see the
//      occupations left by earlier ones.
// A fragment at or below min_fragment_mbps that still has no admissible path
// makes the whole demand infeasible: the result carries feasible == false and
// every occupation is restored bit-for-bit to its pre-call value.
// Throws std::invalid_argument on bad endpoints, an invalid QoS demand or
// invalid parameters.
RouteResult route(Topology& topo, int source, int destination,
                  const QosProfile& qos, const RoutingParams& params);

}  // namespace backhaul
