#include "backhaul/experiments.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "backhaul/routing.hpp"
#include "backhaul/stochastic.hpp"

namespace backhaul {

void ScenarioConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("scenario: trials must be >= 1");
    if (!topology.has_node(source))
        throw std::invalid_argument("scenario: unknown source node");
    if (!topology.has_node(destination))
        throw std::invalid_argument("scenario: unknown destination node");
    if (source == destination)
        throw std::invalid_argument("scenario: source equals destination");
    if (!qos.valid())
        throw std::invalid_argument("scenario: QoS needs positive rate and delay bound");
    if (!routing.valid())
        throw std::invalid_argument("scenario: invalid routing parameters");
    if (!occupation_params.valid() || !delay_params.valid())
        throw std::invalid_argument("scenario: beta shape parameters must be positive");
    for (const LinkId& id : failed_links)
        if (!topology.has_link(id))
            throw std::invalid_argument("scenario: unknown failed link " + id.str());
    for (double m : m_sweep)
        if (!(m >= 0.0))
            throw std::invalid_argument("scenario: sweep exponents must be >= 0");
}

namespace {

std::map<LinkId, double> zero_link_map(const Topology& topo) {
    std::map<LinkId, double> m;
    for (const auto& [id, link] : topo.links()) {
        (void)link;
        m.emplace(id, 0.0);
    }
    return m;
}

void add_fragment_traffic(std::map<LinkId, double>& traffic, const RouteResult& r) {
    for (const Fragment& f : r.fragments)
        for (const PathHop& hop : f.path) traffic.at(hop.link_id()) += f.rate_mbps;
}

// Sum of freshly sampled instantaneous hop delays for one fragment.
double instantaneous_path_delay(const Topology& topo, const Fragment& f,
                                const BetaParams& params, Rng& rng) {
    double sum = 0.0;
    for (const PathHop& hop : f.path)
        sum += sample_instantaneous_delay(topo.link_at(hop.link_id()), params, rng);
    return sum;
}

struct TrialOutcome {
    RouteResult result;
    Topology topo;  // post-routing state, for delay sampling
    Rng rng;        // stream position after occupations and routing
};

// One allocation/sweep trial: fresh occupations, one routed demand.
TrialOutcome run_single_demand_trial(const ScenarioConfig& config, double m_initial,
                                     std::uint64_t trial) {
    TrialOutcome out{{}, config.topology, make_trial_rng(config.seed, trial)};
    if (config.sample_occupations)
        sample_occupations(out.topo, config.occupation_params, out.rng);
    RoutingParams params = config.routing;
    params.m_initial = m_initial;
    out.result = route(out.topo, config.source, config.destination, config.qos, params);
    return out;
}

}  // namespace

TrialStats run_allocation(const ScenarioConfig& config) {
    config.validate();

    TrialStats stats;
    stats.per_link_mean_traffic_mbps = zero_link_map(config.topology);
    long long iterations = 0;
    int infeasible = 0;

    for (int t = 0; t < config.trials; ++t) {
        TrialOutcome out = run_single_demand_trial(config, config.routing.m_initial,
                                                   static_cast<std::uint64_t>(t));
        iterations += out.result.total_iterations;
        if (!out.result.feasible) {
            ++infeasible;  // an infeasible trial allocates nothing
            continue;
        }
        add_fragment_traffic(stats.per_link_mean_traffic_mbps, out.result);
    }

    const double n = static_cast<double>(config.trials);
    for (auto& [id, sum] : stats.per_link_mean_traffic_mbps) sum /= n;
    stats.mean_iterations = static_cast<double>(iterations) / n;
    stats.infeasible_fraction = static_cast<double>(infeasible) / n;
    stats.offered_load_mbps = config.qos.rate_mbps;  // one demand per trial
    stats.admitted_load_mbps =
        static_cast<double>(config.trials - infeasible) * config.qos.rate_mbps / n;
    stats.blocked_load_mbps =
        static_cast<double>(infeasible) * config.qos.rate_mbps / n;
    return stats;
}

std::vector<SweepPoint> run_m_sweep(const ScenarioConfig& config) {
    config.validate();
    if (config.m_sweep.empty())
        throw std::invalid_argument("sweep: no exponents configured");

    std::vector<SweepPoint> points;
    points.reserve(config.m_sweep.size());
    for (double m : config.m_sweep) {
        long long iterations = 0;
        int admitted = 0, violations = 0;
        // Same master seed for every exponent: trial i sees identical
        // occupation draws at each m, so points differ only through routing.
        for (int t = 0; t < config.trials; ++t) {
            TrialOutcome out =
                run_single_demand_trial(config, m, static_cast<std::uint64_t>(t));
            iterations += out.result.total_iterations;
            if (!out.result.feasible) continue;
            ++admitted;
            bool violated = false;
            for (const Fragment& f : out.result.fragments)
                if (instantaneous_path_delay(out.topo, f, config.delay_params,
                                             out.rng) > config.qos.max_delay_ms)
                    violated = true;
            if (violated) ++violations;
        }
        SweepPoint p;
        p.m = m;
        p.violation_probability =
            admitted == 0 ? 0.0
                          : static_cast<double>(violations) / static_cast<double>(admitted);
        p.mean_iterations =
            static_cast<double>(iterations) / static_cast<double>(config.trials);
        points.push_back(p);
    }
    return points;
}

TrialStats run_failure(const ScenarioConfig& config) {
    config.validate();
    if (config.failed_links.empty())
        throw std::invalid_argument("failure run: no failed links configured");

    TrialStats stats;
    stats.per_link_mean_traffic_mbps = zero_link_map(config.topology);
    long long iterations = 0, flows = 0, blocked_flows = 0;
    double admitted_sum = 0.0, blocked_sum = 0.0, offered_sum = 0.0;

    const double r0 = config.qos.rate_mbps;
    for (int t = 0; t < config.trials; ++t) {
        Rng rng = make_trial_rng(config.seed, static_cast<std::uint64_t>(t));
        Topology topo = config.topology;
        if (config.sample_occupations)
            sample_occupations(topo, config.occupation_params, rng);

        // Collect the load the failed links were carrying, then take them down.
        double load = 0.0;
        for (const LinkId& id : config.failed_links) {
            const Link& link = topo.link_at(id);
            if (link.up) load += link.occupation * link.capacity_mbps;
            topo.set_link_up(id, false);
        }

        // Quantize into full-rate flows plus one remainder flow; a remainder
        // below the routable minimum is dropped and never offered.
        int full = static_cast<int>(std::floor(load / r0));
        double remainder = load - static_cast<double>(full) * r0;
        if (remainder < 0.0) {  // floor landed above load/r0 after rounding
            --full;
            remainder = load - static_cast<double>(full) * r0;
        }
        const bool route_remainder =
            full >= 0 && remainder >= config.routing.min_fragment_mbps;
        if (full < 0) full = 0;

        double admitted_t = 0.0, blocked_t = 0.0;
        // Routing is deterministic and a blocked flow rolls the state back
        // bit-for-bit, so once one full-rate flow blocks, the rest of the
        // trial's full-rate flows are provably identical: reuse the result.
        std::optional<int> blocked_iterations;
        for (int f = 0; f < full; ++f) {
            ++flows;
            if (blocked_iterations) {
                iterations += *blocked_iterations;
                ++blocked_flows;
                blocked_t += r0;
                continue;
            }
            const RouteResult r =
                route(topo, config.source, config.destination,
                      {r0, config.qos.max_delay_ms}, config.routing);
            iterations += r.total_iterations;
            if (r.feasible) {
                admitted_t += r0;
                add_fragment_traffic(stats.per_link_mean_traffic_mbps, r);
            } else {
                ++blocked_flows;
                blocked_t += r0;
                blocked_iterations = r.total_iterations;
            }
        }
        if (route_remainder) {
            ++flows;
            const RouteResult r =
                route(topo, config.source, config.destination,
                      {remainder, config.qos.max_delay_ms}, config.routing);
            iterations += r.total_iterations;
            if (r.feasible) {
                admitted_t += remainder;
                add_fragment_traffic(stats.per_link_mean_traffic_mbps, r);
            } else {
                ++blocked_flows;
                blocked_t += remainder;
            }
        }

        admitted_sum += admitted_t;
        blocked_sum += blocked_t;
        offered_sum += admitted_t + blocked_t;  // conserved by construction
    }

    const double n = static_cast<double>(config.trials);
    for (auto& [id, sum] : stats.per_link_mean_traffic_mbps) sum /= n;
    stats.admitted_load_mbps = admitted_sum / n;
    stats.blocked_load_mbps = blocked_sum / n;
    stats.offered_load_mbps = offered_sum / n;
    stats.infeasible_fraction =
        flows == 0 ? 0.0
                   : static_cast<double>(blocked_flows) / static_cast<double>(flows);
    stats.mean_iterations =
        flows == 0 ? 0.0
                   : static_cast<double>(iterations) / static_cast<double>(flows);
    return stats;
}

}  // namespace backhaul
