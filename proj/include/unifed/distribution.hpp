#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "unifed/numerics.hpp"

namespace unifed {

// Family member with canonical parameter theta and index n; the dispersion
// is 1/n, so n = 1 is the base distribution on (0, 1).
struct UnifedParams {
    double theta = 0.0;
    int n = 1;
};

struct MeanVariance {
    double mean;
    double variance;
};

// Density of the base (n = 1) member: exp(x * theta - kappa(theta)) on
// [0, 1], zero outside.  theta = 0 recovers the standard uniform.
double density(double x, double theta);

// Density of the general member at a rational point, routed through the
// exact Irwin-Hall evaluator; cap bounds the admissible n.
double density_general(const Rational& x, const UnifedParams& params,
                       int cap = kIrwinHallExactCapDefault);

double cdf(double x, double theta);
double quantile(double p, double theta);

// Inverse-transform sampler for the base member; identical seeds give
// identical draws, and every draw lies strictly inside (0, 1).
std::vector<double> sample(std::size_t count, double theta,
                           std::uint64_t seed);

MeanVariance mean_variance(const UnifedParams& params);

// Variance function V(mu) = kappa''(kappa'^{-1}(mu)).
double variance_function(double mu);

// Unit deviance d(y, mu); zero iff y == mu, strictly positive otherwise.
double unit_deviance(double y, double mu);

// Maximum-likelihood estimate of theta for the base member: the value
// whose mean matches the sample mean.
double mle_theta(std::span<const double> observations);

double log_likelihood(std::span<const double> observations, double theta);

}  // namespace unifed
