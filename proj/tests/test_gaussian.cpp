#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "heatsharp/detail/quadrature.hpp"
#include "heatsharp/errors.hpp"
#include "heatsharp/gaussian.hpp"

using namespace heatsharp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("construction validates its parameters") {
    CHECK_THROWS_AS(Gaussian::from_amplitude(0.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(Gaussian::from_amplitude(-1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(Gaussian::from_amplitude(1.0, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(Gaussian::from_log_amplitude(0.0, 0.0,
                                                 std::numeric_limits<double>::infinity()),
                    DomainError);
    const Gaussian g = Gaussian::from_amplitude(2.0, -1.0, 3.0);
    CHECK_THAT(g.amplitude(), WithinRel(2.0, 1e-15));
    CHECK(g.center == -1.0);
    CHECK(g.width == 3.0);
    CHECK(Gaussian::from_log_amplitude(0.5, 0.0, -2.0).width == -2.0);
}

TEST_CASE("heat kernel peak height and unit mass") {
    for (double t : {0.1, 1.0, 7.5}) {
        const Gaussian k = heat_kernel(t);
        CHECK_THAT(evaluate(k, 0.0),
                   WithinRel(1.0 / (2.0 * std::sqrt(std::acos(-1.0) * t)), 1e-14));
        CHECK_THAT(integral(k), WithinRel(1.0, 1e-14));
    }
    CHECK_THROWS_AS(heat_kernel(0.0), DomainError);
    CHECK_THROWS_AS(heat_kernel(-1.0), DomainError);
}

TEST_CASE("kernel convolution reproduces the semigroup") {
    for (double s : {0.25, 1.0, 4.0}) {
        for (double t : {0.5, 1.0, 10.0}) {
            const Gaussian c = convolve(heat_kernel(s), heat_kernel(t));
            const Gaussian direct = heat_kernel(s + t);
            CHECK(c.width == s + t);
            CHECK(c.center == 0.0);
            CHECK_THAT(c.log_amplitude, WithinAbs(direct.log_amplitude, 1e-14));
        }
    }
}

TEST_CASE("convolution against quadrature for shifted and growing factors") {
    const Gaussian f = Gaussian::from_amplitude(1.3, 0.7, 2.0);
    const Gaussian g = Gaussian::from_amplitude(0.6, -1.2, 5.0);
    const Gaussian c = convolve(f, g);
    CHECK(c.width == 7.0);
    CHECK_THAT(c.center, WithinAbs(-0.5, 1e-15));
    for (double x : {-2.0, 0.0, 1.5}) {
        const double direct = detail::adaptive_simpson(
            [&](double y) { return evaluate(f, x - y) * evaluate(g, y); }, -60.0, 60.0, 1e-13);
        CHECK_THAT(evaluate(c, x), WithinRel(direct, 1e-10));
    }

    // A growing second factor is fine while 1/tau1 + 1/tau2 stays positive.
    const Gaussian grow = Gaussian::from_amplitude(1.0, 0.0, -4.0);
    const Gaussian mixed = convolve(heat_kernel(1.0), grow);
    CHECK(mixed.width == -3.0);
    CHECK_THAT(mixed.amplitude(), WithinRel(2.0 / std::sqrt(3.0), 1e-14));
    for (double x : {0.0, 1.0, 2.5}) {
        const double direct = detail::adaptive_simpson(
            [&](double y) { return evaluate(heat_kernel(1.0), x - y) * evaluate(grow, y); },
            -50.0, 50.0, 1e-13);
        CHECK_THAT(evaluate(mixed, x), WithinRel(direct, 1e-9));
    }
}

TEST_CASE("divergent convolutions are rejected") {
    // 1/2 - 1 < 0: the integrand grows faster than the kernel decays.
    CHECK_THROWS_AS(convolve(heat_kernel(2.0), Gaussian::from_amplitude(1.0, 0.0, -1.0)),
                    DivergentConvolution);
    // Exactly balanced widths diverge too (the exponent becomes linear).
    CHECK_THROWS_AS(convolve(heat_kernel(1.0), Gaussian::from_amplitude(1.0, 0.0, -1.0)),
                    DivergentConvolution);
}

TEST_CASE("powers rescale amplitude and width") {
    const Gaussian k = heat_kernel(2.0);
    const Gaussian p = power(k, 3.0);
    CHECK(p.width == 2.0 / 3.0);
    CHECK_THAT(p.log_amplitude, WithinRel(3.0 * k.log_amplitude, 1e-15));
    for (double x : {-1.0, 0.3, 2.0})
        CHECK_THAT(evaluate(p, x), WithinRel(std::pow(evaluate(k, x), 3.0), 1e-13));

    const Gaussian same = power(k, 1.0);
    CHECK(same.log_amplitude == k.log_amplitude);
    CHECK(same.width == k.width);

    CHECK_THROWS_AS(power(k, 0.0), DomainError);
    CHECK_THROWS_AS(power(k, -2.0), DomainError);
    CHECK_THROWS_AS(power(k, std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("kernel norms factor into alpha and the time power") {
    for (double t : {0.1, 1.0, 10.0}) {
        for (double qv : {1.0, 4.0 / 3.0, 2.0, 3.0}) {
            const Exponent q = Exponent::finite(qv);
            const double expected = alpha(q) * std::pow(t, -decay_exponent(q));
            CHECK_THAT(lp_norm(heat_kernel(t), q), WithinRel(expected, 1e-14));
        }
        CHECK_THAT(lp_norm(heat_kernel(t), Exponent::infinity()),
                   WithinRel(alpha(Exponent::infinity()) * std::pow(t, -0.5), 1e-14));
    }
}

TEST_CASE("general norms match quadrature") {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 40; ++k) {
        const double a = std::exp(-2.0 + 4.0 * unit(rng));
        const double mu = -3.0 + 6.0 * unit(rng);
        const double tau = std::exp(-2.0 + 4.0 * unit(rng));
        const double pv = 1.0 + 4.0 * unit(rng);
        const Gaussian g = Gaussian::from_amplitude(a, mu, tau);
        const Exponent p = Exponent::finite(pv);
        const double mass = detail::adaptive_simpson(
            [&](double x) { return std::pow(evaluate(g, x), pv); }, mu - 60.0 * std::sqrt(tau),
            mu + 60.0 * std::sqrt(tau), 1e-12 * std::pow(a, pv) * std::sqrt(tau));
        CAPTURE(a, mu, tau, pv);
        CHECK_THAT(lp_norm(g, p), WithinRel(std::pow(mass, 1.0 / pv), 1e-9));
    }
}

TEST_CASE("sup norm is the amplitude") {
    const Gaussian g = Gaussian::from_amplitude(3.7, 1.0, 0.5);
    CHECK_THAT(lp_norm(g, Exponent::infinity()), WithinRel(3.7, 1e-15));
    CHECK(log_lp_norm(g, Exponent::infinity()) == g.log_amplitude);
}

TEST_CASE("growing profiles have no finite integral or norm") {
    const Gaussian grow = Gaussian::from_amplitude(1.0, 0.0, -1.0);
    CHECK_THROWS_AS(integral(grow), NonNormable);
    CHECK_THROWS_AS(lp_norm(grow, Exponent::finite(2.0)), NonNormable);
}

TEST_CASE("extremal input is the matched kernel power") {
    const Gaussian e = extremal_input(Exponent::finite(2.0), Exponent::finite(2.0), 0.7);
    const Gaussian k = heat_kernel(0.7);
    CHECK(e.width == k.width);
    CHECK(e.log_amplitude == k.log_amplitude);

    const Gaussian f = extremal_input(Exponent::parse("3/2"), Exponent::finite(3.0), 2.0);
    const Gaussian ref = power(heat_kernel(2.0), 2.0);
    CHECK_THAT(f.width, WithinRel(ref.width, 1e-15));
    CHECK_THAT(f.log_amplitude, WithinRel(ref.log_amplitude, 1e-15));

    CHECK_THROWS_AS(extremal_input(Exponent::finite(1.0), Exponent::finite(2.0), 1.0),
                    LimitOnlyExtremizer);
    CHECK_THROWS_AS(extremal_input(Exponent::finite(2.0), Exponent::finite(1.0), 1.0),
                    LimitOnlyExtremizer);
    CHECK_THROWS_AS(extremal_input(Exponent::finite(3.0), Exponent::finite(3.0), 1.0),
                    InvalidTriple);
    CHECK_THROWS_AS(extremal_input(Exponent::finite(2.0), Exponent::finite(2.0), 0.0),
                    DomainError);
}

TEST_CASE("random Gaussian inputs never beat the sharp bound") {
    std::mt19937_64 rng(99173);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<double> pool = {1.0, 5.0 / 4.0, 4.0 / 3.0, 3.0 / 2.0, 2.0, 3.0, 4.0};
    for (int k = 0; k < 300; ++k) {
        const double a = std::exp(-2.0 + 4.0 * unit(rng));
        const double mu = -4.0 + 8.0 * unit(rng);
        const double tau = std::exp(std::log(0.01) + std::log(1e4) * unit(rng));
        const double t = std::exp(std::log(0.1) + std::log(100.0) * unit(rng));
        const Exponent p = Exponent::finite(pool[rng() % pool.size()]);
        Exponent q = Exponent::finite(pool[rng() % pool.size()]);
        if (p.reciprocal() + q.reciprocal() < 1.0) q = conjugate(p);
        const YoungTriple triple = young_r(p, q);
        const Gaussian f = Gaussian::from_amplitude(a, mu, tau);
        const Gaussian u = convolve(f, heat_kernel(t));
        const double bound = heat_estimate_constant(p, q) *
                             std::pow(t, -decay_exponent(q)) * lp_norm(f, p);
        CAPTURE(a, mu, tau, t, p.str(), q.str());
        CHECK(lp_norm(u, triple.r) <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("matched kernel powers attain the bound exactly") {
    const std::vector<std::pair<const char*, const char*>> pairs = {
        {"4/3", "4/3"}, {"3/2", "3"}, {"2", "2"}, {"5/4", "2"}, {"3", "6/5"}};
    for (const auto& [ps, qs] : pairs) {
        const Exponent p = Exponent::parse(ps);
        const Exponent q = Exponent::parse(qs);
        const YoungTriple triple = young_r(p, q);
        for (double t : {0.2, 1.0, 5.0}) {
            const Gaussian f = extremal_input(p, q, t);
            const double ratio =
                std::exp(log_lp_norm(convolve(f, heat_kernel(t)), triple.r) -
                         std::log(heat_estimate_constant(p, q)) +
                         decay_exponent(q) * std::log(t) - log_lp_norm(f, p));
            CAPTURE(ps, qs, t);
            CHECK_THAT(ratio, WithinAbs(1.0, 1e-12));
        }
    }
}
