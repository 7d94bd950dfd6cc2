#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "unifed/data.hpp"

namespace unifed::glm {

using data::DesignMatrix;
using data::WeightedResponse;

enum class LinkKind { canonical, logit, identity };

LinkKind link_from_name(const std::string& name);
std::string link_name(LinkKind kind);

// Link function g mapping the mean domain (0, 1) onto the linear-predictor
// scale; canonical is the inverse mean mapping, so eta coincides with the
// canonical parameter.
class Link {
public:
    explicit Link(LinkKind kind) : kind_(kind) {}

    LinkKind kind() const { return kind_; }
    double g(double mu) const;
    double g_inverse(double eta) const;
    double g_prime(double mu) const;

private:
    LinkKind kind_;
};

struct FitResult {
    std::vector<std::string> coefficient_names;
    Eigen::VectorXd coefficients;
    Eigen::VectorXd standard_errors;
    Eigen::VectorXd z_values;
    Eigen::VectorXd p_values;
    double null_deviance = 0.0;
    long null_df = 0;
    double residual_deviance = 0.0;
    long residual_df = 0;
    int iterations = 0;
    bool converged = false;
    Eigen::VectorXd fitted_means;
    Eigen::VectorXd linear_predictors;
    double min_weight = 0.0;
    LinkKind link = LinkKind::canonical;
};

struct GofResult {
    double statistic;
    long df;
    double p_value;
    double min_weight;
};

// Weighted IWLS fit with dispersion fixed at one.  Throws DesignError on a
// rank-deficient design; a fit that exhausts its iteration budget comes
// back with converged = false rather than throwing.
FitResult fit(const DesignMatrix& design, const WeightedResponse& resp,
              const Link& link);

// D(y, mu) = sum_i w_i d(y_i, mu_i).
double total_deviance(const WeightedResponse& resp,
                      const Eigen::VectorXd& mu);

// Deviance of the intercept-only model on the same data (the optimum sits
// at the weighted mean under every link) and its degrees of freedom m - 1.
std::pair<double, long> null_deviance(const WeightedResponse& resp);

// r_i = sign(y_i - mu_i) * sqrt(w_i d(y_i, mu_i)); squares sum to the
// model deviance.
Eigen::VectorXd deviance_residuals(const WeightedResponse& resp,
                                   const Eigen::VectorXd& mu);

// Residual deviance against chi-squared with residual df.  The smallest
// class weight rides along because the asymptotics lean on it.
GofResult goodness_of_fit(const FitResult& fit);

// theta for one covariate row: the linear predictor pushed through the
// link inverse and the canonical-parameter mapping.
double theta_from_coefficients(const Eigen::VectorXd& design_row,
                               const Eigen::VectorXd& beta,
                               const Link& link);

}  // namespace unifed::glm
