#include "unifed/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "unifed/errors.hpp"

namespace unifed {

namespace {

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(name) + " must be finite");
    }
}

void require_interior(double x, const char* name) {
    if (!std::isfinite(x) || x <= 0.0 || x >= 1.0) {
        throw DomainError(std::string(name) +
                          " must lie strictly inside (0, 1)");
    }
}

void validate(const UnifedParams& params) {
    require_finite(params.theta, "theta");
    if (params.n < 1) throw DomainError("n must be a positive integer");
}

// Below this the linearized cdf/quantile is exact to double precision.
constexpr double kSmallTheta = 1e-5;
// Above this e^theta overflows intermediate expressions.
constexpr double kLargeTheta = 500.0;

}  // namespace

double density(double x, double theta) {
    require_finite(theta, "theta");
    if (x < 0.0 || x > 1.0) return 0.0;
    return std::exp(x * theta - kappa(theta));
}

double density_general(const Rational& x, const UnifedParams& params,
                       int cap) {
    validate(params);
    const Rational h = irwin_hall_exact(x * params.n, params.n, cap);
    if (h == 0) return 0.0;
    const double xd = x.get_d();
    return params.n * h.get_d() *
           std::exp(params.n * (xd * params.theta - kappa(params.theta)));
}

double cdf(double x, double theta) {
    require_finite(theta, "theta");
    require_finite(x, "x");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double p;
    if (std::fabs(theta) < kSmallTheta) {
        p = x + theta * x * (x - 1.0) / 2.0;
    } else if (theta > kLargeTheta) {
        // (e^(theta x) - 1) / (e^theta - 1) with both sides scaled by e^-theta
        p = std::exp(theta * (x - 1.0)) * std::expm1(-theta * x) /
            std::expm1(-theta);
    } else {
        p = std::expm1(theta * x) / std::expm1(theta);
    }
    return std::clamp(p, 0.0, 1.0);
}

double quantile(double p, double theta) {
    require_finite(theta, "theta");
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("p must lie in [0, 1]");
    }
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    if (std::fabs(theta) < kSmallTheta) {
        return p + theta * p * (1.0 - p) / 2.0;
    }
    if (theta > kLargeTheta) {
        const double log_pe = theta + std::log(p);  // log(p e^theta)
        if (log_pe > 40.0) {
            return (log_pe + std::log1p((1.0 - p) * std::exp(-log_pe))) /
                   theta;
        }
        return std::log1p(std::exp(log_pe) - p) / theta;
    }
    return std::log1p(p * std::expm1(theta)) / theta;
}

std::vector<double> sample(std::size_t count, double theta,
                           std::uint64_t seed) {
    require_finite(theta, "theta");
    std::mt19937_64 rng(seed);
    std::vector<double> draws;
    draws.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        // uniform strictly inside (0, 1): 53 random bits centered in the cell
        const double u =
            (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        draws.push_back(quantile(u, theta));
    }
    return draws;
}

MeanVariance mean_variance(const UnifedParams& params) {
    validate(params);
    return {kappa_prime(params.theta),
            kappa_double_prime(params.theta) / params.n};
}

double variance_function(double mu) {
    return kappa_double_prime(kappa_prime_inverse(mu));
}

double unit_deviance(double y, double mu) {
    require_interior(y, "y");
    require_interior(mu, "mu");
    const double theta_y = kappa_prime_inverse(y);
    const double theta_mu = kappa_prime_inverse(mu);
    const double d =
        2.0 * (y * (theta_y - theta_mu) - kappa(theta_y) + kappa(theta_mu));
    return std::max(d, 0.0);
}

double mle_theta(std::span<const double> observations) {
    if (observations.empty()) {
        throw DomainError("observations must be nonempty");
    }
    long double total = 0.0L;
    for (double x : observations) {
        require_interior(x, "observation");
        total += x;
    }
    const double mean = (double)(total / observations.size());
    if (mean <= 0.0 || mean >= 1.0) {
        throw DomainError("sample mean must lie strictly inside (0, 1)");
    }
    return kappa_prime_inverse(mean);
}

double log_likelihood(std::span<const double> observations, double theta) {
    require_finite(theta, "theta");
    long double total = 0.0L;
    for (double x : observations) {
        require_interior(x, "observation");
        total += x;
    }
    return (double)(theta * total -
                    (long double)observations.size() * kappa(theta));
}

}  // namespace unifed
