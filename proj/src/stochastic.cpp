#include "backhaul/stochastic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace backhaul {

double beta_pdf(double x, const BetaParams& params) {
    if (!params.valid())
        throw std::invalid_argument("beta_pdf: shape parameters must be positive");
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("beta_pdf: x outside [0, 1]");

    const double a = params.alpha, b = params.beta;
    constexpr double inf = std::numeric_limits<double>::infinity();

    // x^(a-1) and (1-x)^(b-1) hit 0 * log(0) at the endpoints, so settle the
    // limit explicitly: the density vanishes when the exponent is positive and
    // diverges when it is negative.
    if (x == 0.0) {
        if (a > 1.0) return 0.0;
        if (a < 1.0) return inf;
        return b;  // a == 1: density is b * (1-x)^(b-1)
    }
    if (x == 1.0) {
        if (b > 1.0) return 0.0;
        if (b < 1.0) return inf;
        return a;
    }

    const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    return std::exp(log_norm + (a - 1.0) * std::log(x) +
                    (b - 1.0) * std::log1p(-x));
}

BetaSampler::BetaSampler(const BetaParams& params)
    : gamma_alpha_(params.alpha, 1.0), gamma_beta_(params.beta, 1.0) {
    if (!params.valid())
        throw std::invalid_argument("BetaSampler: shape parameters must be positive");
}

double BetaSampler::operator()(Rng& rng) {
    // Ratio of gamma variates; redraw the (measure-zero) double-underflow
    // case so the quotient is always defined.
    double g1 = 0.0, g2 = 0.0;
    do {
        g1 = gamma_alpha_(rng);
        g2 = gamma_beta_(rng);
    } while (g1 == 0.0 && g2 == 0.0);
    return g1 / (g1 + g2);
}

double sample_beta(const BetaParams& params, Rng& rng) {
    BetaSampler sampler(params);
    return sampler(rng);
}

void sample_occupations(Topology& topo, const BetaParams& params, Rng& rng) {
    BetaSampler sampler(params);
    for (auto& [id, link] : topo.links())
        if (link.up) link.occupation = sampler(rng);
}

double sample_instantaneous_delay(const Link& link, const BetaParams& params,
                                  Rng& rng) {
    return 2.0 * link.mean_delay_ms * sample_beta(params, rng);
}

Rng make_trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(trial_index),
                      static_cast<std::uint32_t>(trial_index >> 32)};
    return Rng(seq);
}

}  // namespace backhaul
