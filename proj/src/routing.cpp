#include "backhaul/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace backhaul {

double link_weight(const Link& link, double rate_mbps, double m) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (!link.up) return inf;
    if (!(residual_capacity(link) > rate_mbps)) return inf;  // strict gate
    if (m == 0.0) return link.mean_delay_ms;                 // 0^0 == 1
    return std::pow(link.occupation, m) * link.mean_delay_ms;
}

double RouteResult::total_rate_mbps() const {
    if (fragments.empty()) return 0.0;
    // Every fragment rate is the demand times a power of two, so summing the
    // fractions keeps all partial sums exactly representable.
    double fraction = 0.0;
    for (const Fragment& f : fragments) fraction += f.rate_mbps / qos.rate_mbps;
    return fraction * qos.rate_mbps;
}

void ReducedGraph::add_node(int id) { adjacency_.try_emplace(id); }

void ReducedGraph::add_edge(int a, int b, int interface, double weight,
                            double delay_ms) {
    const auto insert = [](std::vector<ReducedEdge>& edges, ReducedEdge edge) {
        auto pos = std::lower_bound(
            edges.begin(), edges.end(), edge,
            [](const ReducedEdge& x, const ReducedEdge& y) { return x.to < y.to; });
        edges.insert(pos, edge);
    };
    insert(adjacency_[a], {b, interface, weight, delay_ms});
    insert(adjacency_[b], {a, interface, weight, delay_ms});
}

const std::vector<ReducedEdge>& ReducedGraph::neighbors(int node) const {
    static const std::vector<ReducedEdge> empty;
    const auto it = adjacency_.find(node);
    return it == adjacency_.end() ? empty : it->second;
}

const ReducedEdge* ReducedGraph::edge(int a, int b) const {
    for (const ReducedEdge& e : neighbors(a))
        if (e.to == b) return &e;
    return nullptr;
}

ReducedGraph reduce_multigraph(const Topology& topo, double rate_mbps, double m) {
    ReducedGraph g;
    for (const auto& [id, role] : topo.nodes()) {
        (void)role;
        g.add_node(id);
    }

    struct Best {
        int interface = 0;
        double weight = 0.0;
        double delay = 0.0;
    };
    std::map<std::pair<int, int>, Best> best;
    for (const auto& [id, link] : topo.links()) {
        const double w = link_weight(link, rate_mbps, m);
        if (!std::isfinite(w)) continue;
        const Best cand{id.k, w, link.mean_delay_ms};
        auto [it, inserted] = best.try_emplace({id.i, id.j}, cand);
        if (inserted) continue;
        Best& cur = it->second;
        // Interfaces arrive in ascending k, so on a full tie the later
        // (higher) interface replaces the earlier one.
        if (cand.weight < cur.weight ||
            (cand.weight == cur.weight && cand.delay <= cur.delay))
            cur = cand;
    }
    for (const auto& [pair, b] : best)
        g.add_edge(pair.first, pair.second, b.interface, b.weight, b.delay);
    return g;
}

namespace {

// Path cost as compared by the search: summed weight, then summed mean delay,
// then hop count. All finite, so lexicographic tuple order is a strict weak
// ordering.
using Cost = std::tuple<double, double, int>;

bool tight(const Cost& from, const ReducedEdge& e, const Cost& to) {
    return std::get<0>(from) + e.weight == std::get<0>(to) &&
           std::get<1>(from) + e.delay_ms == std::get<1>(to) &&
           std::get<2>(from) + 1 == std::get<2>(to);
}

}  // namespace

std::optional<PathSearchResult> shortest_path(const ReducedGraph& graph, int source,
                                              int destination) {
    if (!graph.has_node(source) || !graph.has_node(destination))
        throw std::invalid_argument("shortest_path: unknown endpoint");
    if (source == destination)
        return PathSearchResult{{source}, 0.0, 0.0};

    // Dijkstra, run to exhaustion so every reachable node carries its final
    // cost (the reconstruction below relies on that).
    std::map<int, Cost> dist;
    using Entry = std::tuple<double, double, int, int>;  // cost..., node
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist.emplace(source, Cost{0.0, 0.0, 0});
    queue.push({0.0, 0.0, 0, source});
    std::set<int> settled;

    while (!queue.empty()) {
        const auto [w, d, hops, u] = queue.top();
        queue.pop();
        if (!settled.insert(u).second) continue;
        for (const ReducedEdge& e : graph.neighbors(u)) {
            if (settled.count(e.to)) continue;
            const Cost cand{w + e.weight, d + e.delay_ms, hops + 1};
            const auto it = dist.find(e.to);
            if (it == dist.end() || cand < it->second) {
                dist[e.to] = cand;
                queue.push({std::get<0>(cand), std::get<1>(cand),
                            std::get<2>(cand), e.to});
            }
        }
    }
    if (!settled.count(destination)) return std::nullopt;

    // A "tight" edge advances some optimal prefix: its endpoints' final costs
    // differ by exactly the edge. Walking tight edges from the source, always
    // into nodes that can still reach the destination tightly, yields the
    // lexicographically smallest node sequence among all optimal paths.
    std::set<int> reaches_destination{destination};
    for (bool grew = true; grew;) {
        grew = false;
        for (const auto& [u, cost] : dist) {
            if (reaches_destination.count(u)) continue;
            for (const ReducedEdge& e : graph.neighbors(u)) {
                const auto to = dist.find(e.to);
                if (to == dist.end() || !reaches_destination.count(e.to)) continue;
                if (tight(cost, e, to->second)) {
                    reaches_destination.insert(u);
                    grew = true;
                    break;
                }
            }
        }
    }

    PathSearchResult result;
    result.nodes.push_back(source);
    int current = source;
    while (current != destination) {
        const Cost& here = dist.at(current);
        int next = -1;
        for (const ReducedEdge& e : graph.neighbors(current)) {  // ascending e.to
            const auto to = dist.find(e.to);
            if (to == dist.end() || !reaches_destination.count(e.to)) continue;
            if (tight(here, e, to->second)) {
                next = e.to;
                break;
            }
        }
        // Guaranteed by construction; the hop count strictly increases, so
        // this loop terminates.
        if (next < 0) throw std::logic_error("shortest_path: broken tight chain");
        result.nodes.push_back(next);
        current = next;
    }
    const Cost& total = dist.at(destination);
    result.sum_weight = std::get<0>(total);
    result.sum_delay_ms = std::get<1>(total);
    return result;
}

double path_delay(const Topology& topo, const std::vector<PathHop>& path) {
    double sum = 0.0;
    for (const PathHop& hop : path) sum += topo.link_at(hop.link_id()).mean_delay_ms;
    return sum;
}

namespace {

struct FragmentRouter {
    Topology& topo;
    int source;
    int destination;
    const QosProfile& qos;
    const RoutingParams& params;
    std::vector<Fragment> fragments;
    int iterations = 0;

    bool place(double rate) {
        double m = params.m_initial;
        for (;;) {
            const ReducedGraph graph = reduce_multigraph(topo, rate, m);
            const auto found = shortest_path(graph, source, destination);
            ++iterations;
            // The admission gate ignores m, so a disconnected graph stays
            // disconnected at every lower exponent: go straight to splitting.
            if (!found) break;
            if (found->sum_delay_ms <= qos.max_delay_ms) {
                admit(rate, m, graph, *found);
                return true;
            }
            if (m <= 0.0) break;
            m = std::max(0.0, m - params.m_step);
        }
        if (rate <= params.min_fragment_mbps) return false;
        if (!smallest_piece_fits(rate)) return false;
        const double half = rate / 2.0;  // exact: exponent decrement
        return place(half) && place(half);
    }

    // One look-ahead before splitting: the smallest fragment the halving
    // chain can ever produce, routed at m = 0 (weights are delays, the most
    // permissive setting). If even that cannot meet the bound, no descendant
    // can — larger rates only shrink the admissible edge set.
    bool smallest_piece_fits(double rate) {
        double leaf = rate;
        while (leaf > params.min_fragment_mbps) leaf /= 2.0;
        const auto found =
            shortest_path(reduce_multigraph(topo, leaf, 0.0), source, destination);
        ++iterations;
        return found && found->sum_delay_ms <= qos.max_delay_ms;
    }

    void admit(double rate, double m, const ReducedGraph& graph,
               const PathSearchResult& found) {
        Fragment fragment;
        fragment.rate_mbps = rate;
        fragment.sum_weight = found.sum_weight;
        fragment.sum_mean_delay_ms = found.sum_delay_ms;
        fragment.m_used = m;
        for (std::size_t t = 1; t < found.nodes.size(); ++t) {
            const int a = found.nodes[t - 1];
            const int b = found.nodes[t];
            const ReducedEdge* e = graph.edge(a, b);
            fragment.path.push_back({a, b, e->interface});
            commit_load(topo, LinkId(a, b, e->interface), rate);
        }
        fragments.push_back(std::move(fragment));
    }
};

}  // namespace

RouteResult route(Topology& topo, int source, int destination,
                  const QosProfile& qos, const RoutingParams& params) {
    if (!topo.has_node(source) || !topo.has_node(destination))
        throw std::invalid_argument("route: unknown endpoint node");
    if (source == destination)
        throw std::invalid_argument("route: source equals destination");
    if (!qos.valid())
        throw std::invalid_argument("route: demand needs positive rate and delay bound");
    if (!params.valid())
        throw std::invalid_argument("route: invalid routing parameters");

    std::map<LinkId, double> occupations_before;
    for (const auto& [id, link] : topo.links())
        occupations_before.emplace(id, link.occupation);

    FragmentRouter router{topo, source, destination, qos, params};
    const bool placed = router.place(qos.rate_mbps);

    RouteResult result;
    result.qos = qos;
    result.total_iterations = router.iterations;
    result.feasible = placed;
    if (placed) {
        result.fragments = std::move(router.fragments);
    } else {
        // Bit-exact rollback of every partial commitment.
        for (auto& [id, link] : topo.links())
            link.occupation = occupations_before.at(id);
    }
    return result;
}

}  // namespace backhaul
