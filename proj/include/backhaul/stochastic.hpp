#pragma once

// Randomness layer: Beta-distributed link occupations and instantaneous
// delays, plus the per-trial generator derivation that keeps Monte Carlo runs
// reproducible for a given master seed.

#include <cstdint>
#include <random>

#include "backhaul/core_graph.hpp"

namespace backhaul {

using Rng = std::mt19937_64;

struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;
    bool valid() const { return alpha > 0.0 && beta > 0.0; }
};

// Beta(alpha, beta) density at x. Throws std::domain_error outside [0, 1].
// Endpoints follow the usual conventions: 0 at x=0 when alpha > 1, 0 at x=1
// when beta > 1, finite at alpha == 1 / beta == 1, +infinity when the density
// diverges (alpha < 1 at x=0, beta < 1 at x=1).
double beta_pdf(double x, const BetaParams& params);

// Beta sampler built as G1 / (G1 + G2) from two gamma variates with shapes
// alpha and beta. Deterministic given the generator state.
class BetaSampler {
public:
    explicit BetaSampler(const BetaParams& params);  // throws std::invalid_argument
    double operator()(Rng& rng);

private:
    std::gamma_distribution<double> gamma_alpha_;
    std::gamma_distribution<double> gamma_beta_;
};

// One-shot convenience wrapper around BetaSampler.
double sample_beta(const BetaParams& params, Rng& rng);

// Redraws the occupation of every link that is up (in LinkId order); links
// that are down keep their stored occupation.
void sample_occupations(Topology& topo, const BetaParams& params, Rng& rng);

// Instantaneous delay draw for one link: 2 * mean_delay_ms * Beta(params).
// Mean-preserving for symmetric params, supported on [0, 2 * mean_delay_ms].
double sample_instantaneous_delay(const Link& link, const BetaParams& params, Rng& rng);

// Child generator for one trial, derived from (master seed, trial index) so
// trials are independent streams and any trial can be replayed in isolation.
Rng make_trial_rng(std::uint64_t master_seed, std::uint64_t trial_index);

}  // namespace backhaul
