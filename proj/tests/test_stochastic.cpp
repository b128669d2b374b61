#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "backhaul/core_graph.hpp"
#include "backhaul/stochastic.hpp"
#include "stat_util.hpp"

using namespace backhaul;
namespace bt = backhaul::testing;

TEST_CASE("beta density matches hand-computed values") {
    // Beta(5,5) at 1/2: Gamma(10)/Gamma(5)^2 * (1/2)^8 = 630/256.
    CHECK(beta_pdf(0.5, {5.0, 5.0}) == doctest::Approx(2.4609375).epsilon(1e-12));
    // Beta(1,1) is the uniform density.
    for (double x : {0.0, 0.17, 0.5, 0.93, 1.0})
        CHECK(beta_pdf(x, {1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
    // Beta(1,3) at 0: Gamma(4)/(Gamma(1)Gamma(3)) = 3.
    CHECK(beta_pdf(0.0, {1.0, 3.0}) == doctest::Approx(3.0).epsilon(1e-12));
    // Beta(2,2) at 1/4: 6 * (1/4) * (3/4) = 9/8.
    CHECK(beta_pdf(0.25, {2.0, 2.0}) == doctest::Approx(1.125).epsilon(1e-12));
}

TEST_CASE("beta density endpoint conventions") {
    CHECK(beta_pdf(0.0, {2.0, 5.0}) == 0.0);
    CHECK(beta_pdf(1.0, {5.0, 2.0}) == 0.0);
    CHECK(std::isinf(beta_pdf(0.0, {0.5, 1.0})));
    CHECK(std::isinf(beta_pdf(1.0, {1.0, 0.5})));
    CHECK_THROWS_AS(beta_pdf(-0.1, {2.0, 2.0}), std::domain_error);
    CHECK_THROWS_AS(beta_pdf(1.1, {2.0, 2.0}), std::domain_error);
    CHECK_THROWS_AS(beta_pdf(0.5, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(beta_pdf(0.5, {1.0, -2.0}), std::invalid_argument);
}

TEST_CASE("beta density integrates to one") {
    for (BetaParams p : {BetaParams{1, 3}, {3, 1}, {1, 1}, {5, 5}, {2.5, 7.5}}) {
        const double integral =
            bt::integrate([&](double x) { return beta_pdf(x, p); }, 0.0, 1.0, 1e-10);
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("beta sampler matches the first two closed-form moments") {
    const int n = 1000000;
    for (BetaParams p : {BetaParams{1, 3}, {3, 1}, {1, 1}, {5, 5}}) {
        Rng rng(42);
        BetaSampler sampler(p);
        std::vector<double> draws(n);
        for (double& d : draws) {
            d = sampler(rng);
            REQUIRE(d >= 0.0);
            REQUIRE(d <= 1.0);
        }
        const double true_mean = p.alpha / (p.alpha + p.beta);
        const double s = p.alpha + p.beta;
        const double true_var = p.alpha * p.beta / (s * s * (s + 1.0));
        CHECK(std::abs(bt::mean_of(draws) - true_mean) <= 0.01 * true_mean);
        CHECK(std::abs(bt::variance_of(draws) - true_var) <= 0.05 * true_var);
    }
}

TEST_CASE("beta sampler passes a Kolmogorov-Smirnov check") {
    const int n = 100000;
    for (BetaParams p : {BetaParams{1, 3}, {3, 1}, {1, 1}, {5, 5}}) {
        Rng rng(7);
        BetaSampler sampler(p);
        std::vector<double> draws(n);
        for (double& d : draws) d = sampler(rng);
        const bt::NumericCdf cdf([&](double x) { return beta_pdf(x, p); });
        CHECK(bt::ks_statistic(std::move(draws), cdf) < 0.01);
    }
}

TEST_CASE("beta sampling is deterministic for a given generator state") {
    Rng a(99), b(99);
    BetaSampler sa({2.0, 3.0}), sb({2.0, 3.0});
    for (int i = 0; i < 200; ++i) CHECK(sa(a) == sb(b));
}

TEST_CASE("occupation resampling touches exactly the links that are up") {
    Topology topo = build_reference_topology();
    for (auto& [id, link] : topo.links()) link.occupation = 0.5;
    topo.set_link_up(LinkId(2, 3, 1), false);

    Rng rng(3);
    sample_occupations(topo, {2.0, 2.0}, rng);

    CHECK(topo.link_at(LinkId(2, 3, 1)).occupation == 0.5);  // down: untouched
    for (const auto& [id, link] : topo.links()) {
        if (!link.up) continue;
        CHECK(link.occupation >= 0.0);
        CHECK(link.occupation <= 1.0);
        CHECK(link.occupation != 0.5);  // a continuous redraw never hits it
    }

    // Same seed, same starting topology: bit-identical occupations.
    Topology t1 = build_reference_topology(), t2 = build_reference_topology();
    Rng r1(11), r2(11);
    sample_occupations(t1, {1.0, 3.0}, r1);
    sample_occupations(t2, {1.0, 3.0}, r2);
    for (const auto& [id, link] : t1.links())
        CHECK(link.occupation == t2.link_at(id).occupation);
}

TEST_CASE("instantaneous delay is a mean-preserving spread on [0, 2 * mean]") {
    Link link;
    link.id = LinkId(1, 2, 1);
    link.capacity_mbps = 50.0;
    link.mean_delay_ms = 20.0;

    Rng rng(5);
    const int n = 200000;
    std::vector<double> draws(n);
    for (double& d : draws) {
        d = sample_instantaneous_delay(link, {5.0, 5.0}, rng);
        REQUIRE(d >= 0.0);
        REQUIRE(d <= 40.0);
    }
    CHECK(bt::mean_of(draws) == doctest::Approx(20.0).epsilon(0.01));

    Link zero = link;
    zero.mean_delay_ms = 0.0;
    for (int i = 0; i < 10; ++i)
        CHECK(sample_instantaneous_delay(zero, {5.0, 5.0}, rng) == 0.0);
}

TEST_CASE("trial generators are reproducible and distinct across trials") {
    Rng a = make_trial_rng(1234, 0);
    Rng b = make_trial_rng(1234, 0);
    for (int i = 0; i < 50; ++i) CHECK(a() == b());

    Rng c = make_trial_rng(1234, 1);
    Rng d = make_trial_rng(4321, 0);
    Rng e = make_trial_rng(1234, 0);
    bool differs_c = false, differs_d = false;
    for (int i = 0; i < 50; ++i) {
        const auto v = e();
        differs_c |= (c() != v);
        differs_d |= (d() != v);
    }
    CHECK(differs_c);
    CHECK(differs_d);
}
