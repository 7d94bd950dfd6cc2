#include "unifed/glm.hpp"

#include <cmath>
#include <limits>

#include "unifed/distribution.hpp"
#include "unifed/errors.hpp"
#include "unifed/numerics.hpp"

namespace unifed::glm {

namespace {

constexpr int kMaxIterations = 25;
constexpr int kMaxHalvings = 30;
constexpr double kTolerance = 1e-8;
constexpr double kBoundaryMargin = 1e-12;

void validate_response(const WeightedResponse& resp) {
    if (resp.y.size() == 0 || resp.y.size() != resp.w.size()) {
        throw DomainError("response and weight vectors must match and be "
                          "nonempty");
    }
    for (Eigen::Index i = 0; i < resp.y.size(); ++i) {
        if (!(resp.y(i) > 0.0 && resp.y(i) < 1.0)) {
            throw DomainError("response entries must lie strictly inside "
                              "(0, 1)");
        }
        if (!(resp.w(i) > 0.0) || !std::isfinite(resp.w(i))) {
            throw DomainError("weights must be finite and positive");
        }
    }
}

bool interior(const Eigen::VectorXd& mu) {
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        if (!(mu(i) > kBoundaryMargin && mu(i) < 1.0 - kBoundaryMargin)) {
            return false;
        }
    }
    return true;
}

double weighted_mean(const WeightedResponse& resp) {
    return resp.w.dot(resp.y) / resp.w.sum();
}

}  // namespace

LinkKind link_from_name(const std::string& name) {
    if (name == "canonical") return LinkKind::canonical;
    if (name == "logit") return LinkKind::logit;
    if (name == "identity") return LinkKind::identity;
    throw DomainError("unknown link '" + name + "'");
}

std::string link_name(LinkKind kind) {
    switch (kind) {
        case LinkKind::canonical: return "canonical";
        case LinkKind::logit: return "logit";
        case LinkKind::identity: return "identity";
    }
    throw DomainError("unknown link kind");
}

double Link::g(double mu) const {
    switch (kind_) {
        case LinkKind::canonical: return kappa_prime_inverse(mu);
        case LinkKind::logit:
            if (!(mu > 0.0 && mu < 1.0)) {
                throw DomainError("mu must lie strictly inside (0, 1)");
            }
            return std::log(mu / (1.0 - mu));
        case LinkKind::identity: return mu;
    }
    throw DomainError("unknown link kind");
}

double Link::g_inverse(double eta) const {
    switch (kind_) {
        case LinkKind::canonical: return kappa_prime(eta);
        case LinkKind::logit: return 1.0 / (1.0 + std::exp(-eta));
        case LinkKind::identity: return eta;
    }
    throw DomainError("unknown link kind");
}

double Link::g_prime(double mu) const {
    switch (kind_) {
        case LinkKind::canonical: return 1.0 / variance_function(mu);
        case LinkKind::logit:
            if (!(mu > 0.0 && mu < 1.0)) {
                throw DomainError("mu must lie strictly inside (0, 1)");
            }
            return 1.0 / (mu * (1.0 - mu));
        case LinkKind::identity: return 1.0;
    }
    throw DomainError("unknown link kind");
}

double total_deviance(const WeightedResponse& resp,
                      const Eigen::VectorXd& mu) {
    if (mu.size() != resp.y.size()) {
        throw DomainError("mean vector length must match the response");
    }
    long double total = 0.0L;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        total += (long double)resp.w(i) * unit_deviance(resp.y(i), mu(i));
    }
    return (double)total;
}

std::pair<double, long> null_deviance(const WeightedResponse& resp) {
    validate_response(resp);
    const Eigen::VectorXd mu =
        Eigen::VectorXd::Constant(resp.y.size(), weighted_mean(resp));
    return {total_deviance(resp, mu), resp.y.size() - 1};
}

Eigen::VectorXd deviance_residuals(const WeightedResponse& resp,
                                   const Eigen::VectorXd& mu) {
    if (mu.size() != resp.y.size()) {
        throw DomainError("mean vector length must match the response");
    }
    Eigen::VectorXd r(mu.size());
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const double d = unit_deviance(resp.y(i), mu(i));
        const double magnitude = std::sqrt(resp.w(i) * d);
        r(i) = resp.y(i) >= mu(i) ? magnitude : -magnitude;
    }
    return r;
}

FitResult fit(const DesignMatrix& design, const WeightedResponse& resp,
              const Link& link) {
    validate_response(resp);
    const Eigen::Index m = design.X.rows();
    const Eigen::Index q = design.X.cols();
    if (m != resp.y.size()) {
        throw DomainError("design rows must match the response length");
    }
    if (q > m) {
        throw DesignError("more coefficients than classes (" +
                          std::to_string(q) + " > " + std::to_string(m) +
                          ")");
    }

    Eigen::VectorXd mu = resp.y;
    Eigen::VectorXd eta(m);
    for (Eigen::Index i = 0; i < m; ++i) eta(i) = link.g(mu(i));

    // fallback anchor for first-iteration step-halving: the intercept-only
    // state, always strictly interior
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(q);
    beta(0) = link.g(weighted_mean(resp));
    double deviance = std::numeric_limits<double>::infinity();

    FitResult result;
    result.link = link.kind();
    result.coefficient_names = design.column_names;
    result.min_weight = resp.w.minCoeff();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
    bool boundary_failure = false;

    for (int iteration = 1; iteration <= kMaxIterations; ++iteration) {
        Eigen::VectorXd z(m);
        Eigen::VectorXd sqrt_omega(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const double gp = link.g_prime(mu(i));
            z(i) = eta(i) + (resp.y(i) - mu(i)) * gp;
            sqrt_omega(i) = std::sqrt(
                resp.w(i) / (variance_function(mu(i)) * gp * gp));
        }

        qr.compute(sqrt_omega.asDiagonal() * design.X);
        if (qr.rank() < q) {
            throw DesignError("design matrix is rank deficient (rank " +
                              std::to_string(qr.rank()) + " of " +
                              std::to_string(q) + " columns)");
        }
        Eigen::VectorXd proposal = qr.solve(sqrt_omega.cwiseProduct(z));

        // step-halve back toward the previous coefficients whenever the
        // proposal leaves the mean domain or increases the deviance
        Eigen::VectorXd eta_new;
        Eigen::VectorXd mu_new;
        double deviance_new = 0.0;
        bool accepted = false;
        for (int halving = 0; halving <= kMaxHalvings; ++halving) {
            eta_new = design.X * proposal;
            mu_new.resize(m);
            for (Eigen::Index i = 0; i < m; ++i) {
                mu_new(i) = link.g_inverse(eta_new(i));
            }
            if (interior(mu_new)) {
                deviance_new = total_deviance(resp, mu_new);
                if (deviance_new <= deviance * (1.0 + 1e-12) ||
                    !std::isfinite(deviance)) {
                    accepted = true;
                    break;
                }
            }
            proposal = 0.5 * (proposal + beta);
        }
        if (!accepted) {
            boundary_failure = true;
            break;
        }

        const double deviance_change =
            std::isfinite(deviance)
                ? std::fabs(deviance - deviance_new) /
                      std::max(1.0, std::fabs(deviance_new))
                : std::numeric_limits<double>::infinity();
        double coefficient_change = 0.0;
        for (Eigen::Index j = 0; j < q; ++j) {
            coefficient_change = std::max(
                coefficient_change, std::fabs(proposal(j) - beta(j)) /
                                        std::max(1.0, std::fabs(proposal(j))));
        }

        beta = proposal;
        eta = eta_new;
        mu = mu_new;
        deviance = deviance_new;
        result.iterations = iteration;
        if (deviance_change < kTolerance &&
            coefficient_change < kTolerance) {
            result.converged = true;
            break;
        }
    }

    if (boundary_failure) {
        throw ConvergenceError(
            "IWLS found no acceptable step (fitted means pinned to the "
            "boundary or deviance not decreasing) after " +
            std::to_string(kMaxHalvings) + " halvings");
    }

    result.coefficients = beta;
    result.fitted_means = mu;
    result.linear_predictors = eta;
    result.residual_deviance = deviance;
    result.residual_df = m - q;
    const auto [null_dev, null_df_] = null_deviance(resp);
    result.null_deviance = null_dev;
    result.null_df = null_df_;

    // covariance of beta-hat: with A = sqrt(Omega) X and A P = Q R,
    // (A'A)^{-1} = P R^{-1} R^{-T} P'
    const Eigen::MatrixXd r_upper =
        qr.matrixR().topLeftCorner(q, q).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inverse =
        r_upper.triangularView<Eigen::Upper>().solve(
            Eigen::MatrixXd::Identity(q, q));
    const Eigen::MatrixXd covariance =
        qr.colsPermutation() * (r_inverse * r_inverse.transpose()) *
        qr.colsPermutation().transpose();

    result.standard_errors.resize(q);
    result.z_values.resize(q);
    result.p_values.resize(q);
    for (Eigen::Index j = 0; j < q; ++j) {
        result.standard_errors(j) = std::sqrt(covariance(j, j));
        result.z_values(j) = result.coefficients(j) /
                             result.standard_errors(j);
        result.p_values(j) = normal_two_sided_p(result.z_values(j));
    }
    return result;
}

GofResult goodness_of_fit(const FitResult& fit) {
    double p;
    if (fit.residual_df == 0) {
        // saturated model: the reference distribution is a point mass at 0
        p = fit.residual_deviance < 1e-8 ? 1.0 : 0.0;
    } else {
        p = chi_square_survival(fit.residual_deviance,
                                (double)fit.residual_df);
    }
    return {fit.residual_deviance, fit.residual_df, p, fit.min_weight};
}

double theta_from_coefficients(const Eigen::VectorXd& design_row,
                               const Eigen::VectorXd& beta,
                               const Link& link) {
    if (design_row.size() != beta.size()) {
        throw DomainError("design row and coefficient lengths differ");
    }
    const double eta = design_row.dot(beta);
    if (link.kind() == LinkKind::canonical) return eta;
    return kappa_prime_inverse(link.g_inverse(eta));
}

}  // namespace unifed::glm
