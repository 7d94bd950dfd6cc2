#include "unifed/beta.hpp"

#include <cmath>
#include <string>

#include "unifed/errors.hpp"

namespace unifed {

namespace {

void validate(const BetaParams& params) {
    if (!std::isfinite(params.mu) || params.mu <= 0.0 || params.mu >= 1.0) {
        throw DomainError("mu must lie strictly inside (0, 1)");
    }
    if (!std::isfinite(params.phi) || params.phi <= 0.0) {
        throw DomainError("phi must be a finite positive real");
    }
}

}  // namespace

BetaParams beta_params_from_shapes(double alpha, double beta) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || !std::isfinite(beta) ||
        beta <= 0.0) {
        throw DomainError("shape parameters must be finite positive reals");
    }
    return {alpha / (alpha + beta), alpha + beta};
}

double beta_density(double y, const BetaParams& params) {
    validate(params);
    if (y < 0.0 || y > 1.0) return 0.0;
    const double a = params.mu * params.phi;
    const double b = (1.0 - params.mu) * params.phi;
    double log_density =
        std::lgamma(params.phi) - std::lgamma(a) - std::lgamma(b);
    // skip zero exponents so the endpoints take their continuous limits
    if (a != 1.0) log_density += (a - 1.0) * std::log(y);
    if (b != 1.0) log_density += (b - 1.0) * std::log1p(-y);
    return std::exp(log_density);
}

MeanVariance beta_mean_variance(const BetaParams& params) {
    validate(params);
    return {params.mu,
            params.mu * (1.0 - params.mu) / (1.0 + params.phi)};
}

}  // namespace unifed
