#pragma once

// Monte Carlo experiments over the routing layer: per-link traffic allocation,
// delay-violation sweeps over the occupation exponent, and traffic
// reallocation after a link failure. Trials are driven by per-trial derived
// generators, so results are bit-reproducible for a given seed.

#include <cstdint>
#include <map>
#include <vector>

#include "backhaul/core_graph.hpp"
#include "backhaul/routing.hpp"
#include "backhaul/stochastic.hpp"

namespace backhaul {

struct ScenarioConfig {
    Topology topology;
    QosProfile qos{8.0, 30.0};
    RoutingParams routing;
    BetaParams occupation_params{1.0, 1.0};
    BetaParams delay_params{5.0, 5.0};
    int trials = 5000;
    std::uint64_t seed = 0;
    int source = 1;
    int destination = 4;
    // When false, trials keep the occupations stored in the topology instead
    // of redrawing them (deterministic what-if runs).
    bool sample_occupations = true;
    std::vector<LinkId> failed_links;  // consumed by run_failure
    std::vector<double> m_sweep;       // consumed by run_m_sweep

    // Throws std::invalid_argument when any field is out of range for the
    // requested use.
    void validate() const;
};

struct TrialStats {
    // Mean traffic carried per link, averaged over every trial (infeasible
    // trials contribute zero).
    std::map<LinkId, double> per_link_mean_traffic_mbps;
    double violation_probability = 0.0;  // share of admitted trials violating
    double mean_iterations = 0.0;
    double infeasible_fraction = 0.0;
    double admitted_load_mbps = 0.0;  // mean per trial
    double blocked_load_mbps = 0.0;   // mean per trial
    double offered_load_mbps = 0.0;   // mean per trial
};

struct SweepPoint {
    double m = 0.0;
    double violation_probability = 0.0;
    double mean_iterations = 0.0;
};

// Routes one demand per trial on freshly sampled occupations and averages the
// per-link allocation. Infeasible trials allocate nothing and are reported in
// infeasible_fraction.
TrialStats run_allocation(const ScenarioConfig& config);

// For each exponent in config.m_sweep, runs the allocation trials and, per
// admitted trial, draws instantaneous delays hop by hop: the trial violates
// when any fragment's instantaneous delay sum strictly exceeds the delay
// bound. Violation probability is conditional on admitted trials;
// mean_iterations averages over all trials. Trial seeds are shared across
// sweep points, so every m sees identical occupation draws.
std::vector<SweepPoint> run_m_sweep(const ScenarioConfig& config);

// Per trial: samples occupations with every link up, reads the carried load
// off each configured failed link (occupation * capacity), marks it down,
// quantizes the load into flows of qos.rate_mbps (the final remainder keeps
// its rate, or is discarded below min_fragment_mbps), and routes the flows in
// sequence with commitment. Blocked (infeasible) flows accumulate into
// blocked_load_mbps; admitted + blocked load equals offered load exactly.
// mean_iterations is per flow here.
TrialStats run_failure(const ScenarioConfig& config);

}  // namespace backhaul
