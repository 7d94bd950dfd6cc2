#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "support.hpp"
#include "unifed/beta.hpp"
#include "unifed/errors.hpp"

using namespace unifed;

TEST_CASE("beta density") {
    SUBCASE("mu = 0.5, phi = 2 is the uniform") {
        for (double y = 0.0; y <= 1.0; y += 0.1) {
            CHECK(beta_density(y, {0.5, 2.0}) ==
                  doctest::Approx(1.0).epsilon(1e-14));
        }
    }

    SUBCASE("integer-shape reference value") {
        // shapes (2, 2): Gamma(4)/Gamma(2)^2 * 0.25 = 1.5
        CHECK(beta_density(0.5, {0.5, 4.0}) ==
              doctest::Approx(1.5).epsilon(1e-12));
    }

    SUBCASE("zero outside the support") {
        CHECK(beta_density(-0.5, {0.3, 5.0}) == 0.0);
        CHECK(beta_density(1.5, {0.3, 5.0}) == 0.0);
    }

    SUBCASE("endpoint limits") {
        // both shapes above one: density vanishes at the edges
        CHECK(beta_density(0.0, {0.5, 4.0}) == 0.0);
        CHECK(beta_density(1.0, {0.5, 4.0}) == 0.0);
        // shape below one: the edge blows up
        CHECK(std::isinf(beta_density(0.0, {0.2, 1.0})));
    }

    SUBCASE("normalizes to one") {
        const double mass = testsupport::integrate(
            [](double y) { return beta_density(y, {0.3, 5.0}); }, 0.0,
            1.0);
        CHECK(std::fabs(mass - 1.0) < 1e-8);
    }

    SUBCASE("invalid parameters rejected") {
        CHECK_THROWS_AS(beta_density(0.5, {0.0, 2.0}), DomainError);
        CHECK_THROWS_AS(beta_density(0.5, {1.0, 2.0}), DomainError);
        CHECK_THROWS_AS(beta_density(0.5, {0.5, 0.0}), DomainError);
        CHECK_THROWS_AS(beta_density(0.5, {0.5, -1.0}), DomainError);
        CHECK_THROWS_AS(beta_density(0.5, {std::nan(""), 2.0}),
                        DomainError);
    }
}

TEST_CASE("beta moments") {
    const auto half = beta_mean_variance({0.5, 1.0});
    CHECK(half.mean == 0.5);
    CHECK(half.variance == doctest::Approx(0.125).epsilon(1e-15));

    const auto skewed = beta_mean_variance({0.2, 3.0});
    CHECK(skewed.mean == 0.2);
    CHECK(skewed.variance == doctest::Approx(0.04).epsilon(1e-15));

    CHECK(beta_mean_variance({0.5, 1e9}).variance < 1e-9);

    SUBCASE("quadrature moments agree across random parameters") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> mus(0.1, 0.9);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int i = 0; i < 10; ++i) {
            const double mu = mus(rng);
            // keep both shape parameters above one so the integrands stay
            // bounded at the endpoints; the singular shapes are covered by
            // the density tests
            const double phi_floor = 1.1 / std::min(mu, 1.0 - mu);
            const double phi = phi_floor + unit(rng) * (20.0 - phi_floor);
            const BetaParams params{mu, phi};
            const auto mv = beta_mean_variance(params);
            const double mean = testsupport::integrate(
                [&params](double y) {
                    return y * beta_density(y, params);
                },
                0.0, 1.0);
            const double second = testsupport::integrate(
                [&params](double y) {
                    return y * y * beta_density(y, params);
                },
                0.0, 1.0);
            CHECK(std::fabs(mean - mv.mean) < 1e-7);
            CHECK(std::fabs(second - mean * mean - mv.variance) < 1e-7);
        }
    }
}

TEST_CASE("shape-parameter conversion") {
    const auto params = beta_params_from_shapes(2.0, 3.0);
    CHECK(params.mu == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(params.phi == doctest::Approx(5.0).epsilon(1e-15));

    SUBCASE("alpha = beta = 1 round trips to the uniform") {
        const auto uniform = beta_params_from_shapes(1.0, 1.0);
        for (double y = 0.0; y <= 1.0; y += 0.25) {
            CHECK(beta_density(y, uniform) ==
                  doctest::Approx(1.0).epsilon(1e-14));
        }
    }

    SUBCASE("density written in shapes matches the direct formula") {
        const double alpha = 2.5;
        const double beta = 4.5;
        const auto converted = beta_params_from_shapes(alpha, beta);
        for (double y = 0.1; y < 1.0; y += 0.2) {
            const double direct =
                std::exp(std::lgamma(alpha + beta) - std::lgamma(alpha) -
                         std::lgamma(beta) +
                         (alpha - 1.0) * std::log(y) +
                         (beta - 1.0) * std::log1p(-y));
            CHECK(beta_density(y, converted) ==
                  doctest::Approx(direct).epsilon(1e-12));
        }
    }

    SUBCASE("invalid shapes rejected") {
        CHECK_THROWS_AS(beta_params_from_shapes(0.0, 1.0), DomainError);
        CHECK_THROWS_AS(beta_params_from_shapes(1.0, -2.0), DomainError);
        CHECK_THROWS_AS(beta_params_from_shapes(std::nan(""), 1.0),
                        DomainError);
    }
}
