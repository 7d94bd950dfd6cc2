#pragma once

#include "unifed/distribution.hpp"

namespace unifed {

// Beta distribution in its mean/precision parametrization: mu in (0, 1),
// phi > 0, with shapes alpha = mu * phi and beta = (1 - mu) * phi.  Kept as
// a reference family for comparisons on the unit interval.
struct BetaParams {
    double mu;
    double phi;
};

BetaParams beta_params_from_shapes(double alpha, double beta);

double beta_density(double y, const BetaParams& params);

MeanVariance beta_mean_variance(const BetaParams& params);

}  // namespace unifed
