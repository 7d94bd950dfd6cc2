#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <vector>

#include "unifed/app.hpp"
#include "unifed/beta.hpp"
#include "unifed/data.hpp"
#include "unifed/distribution.hpp"
#include "unifed/errors.hpp"
#include "unifed/glm.hpp"
#include "unifed/numerics.hpp"

namespace py = pybind11;

namespace {

py::dict fit_result_to_dict(const unifed::glm::FitResult& fit,
                            const std::vector<std::string>& dropped) {
    py::list names;
    py::list estimates;
    py::list standard_errors;
    py::list z_values;
    py::list p_values;
    for (std::size_t j = 0; j < fit.coefficient_names.size(); ++j) {
        const auto i = (Eigen::Index)j;
        names.append(fit.coefficient_names[j]);
        estimates.append(fit.coefficients(i));
        standard_errors.append(fit.standard_errors(i));
        z_values.append(fit.z_values(i));
        p_values.append(fit.p_values(i));
    }
    py::list fitted;
    for (Eigen::Index i = 0; i < fit.fitted_means.size(); ++i) {
        fitted.append(fit.fitted_means(i));
    }
    py::dict result;
    result["link"] = unifed::glm::link_name(fit.link);
    result["converged"] = fit.converged;
    result["iterations"] = fit.iterations;
    result["names"] = names;
    result["estimates"] = estimates;
    result["std_errors"] = standard_errors;
    result["z_values"] = z_values;
    result["p_values"] = p_values;
    result["null_deviance"] = fit.null_deviance;
    result["null_df"] = fit.null_df;
    result["residual_deviance"] = fit.residual_deviance;
    result["residual_df"] = fit.residual_df;
    result["min_class_weight"] = fit.min_weight;
    result["fitted_means"] = fitted;
    result["dropped_covariates"] = dropped;
    return result;
}

py::dict fit_csv(const std::string& path, const std::string& response,
                 const std::vector<std::string>& covariates,
                 const std::string& weight,
                 const std::map<std::string, std::string>& reference_levels,
                 const std::string& link, bool aggregate) {
    unifed::data::DesignSpec spec;
    spec.response = response;
    spec.weight = weight;
    spec.covariates = covariates;
    spec.reference_levels = reference_levels;
    const unifed::data::Dataset dataset =
        unifed::data::ingest_csv_file(path, spec);
    const unifed::data::AggregatedData classes =
        aggregate ? unifed::data::aggregate(dataset)
                  : unifed::data::as_classes(dataset);
    auto [design, resp] = unifed::data::build_design(classes, spec);
    const unifed::glm::Link link_fn(unifed::glm::link_from_name(link));
    const unifed::glm::FitResult fit =
        unifed::glm::fit(design, resp, link_fn);
    return fit_result_to_dict(fit, design.dropped_covariates);
}

py::tuple run_cli(const std::vector<std::string>& args,
                  const std::string& stdin_text) {
    std::istringstream in(stdin_text);
    std::ostringstream out;
    std::ostringstream err;
    const int code = unifed::app::run(args, in, out, err);
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "unifed distribution, GLM fitting, and data aggregation";

    py::register_exception<unifed::DomainError>(m, "DomainError",
                                                PyExc_ValueError);
    py::register_exception<unifed::CapacityError>(m, "CapacityError",
                                                  PyExc_RuntimeError);
    py::register_exception<unifed::DataError>(m, "DataError",
                                              PyExc_ValueError);
    py::register_exception<unifed::DesignError>(m, "DesignError",
                                                PyExc_RuntimeError);
    py::register_exception<unifed::ConvergenceError>(m, "ConvergenceError",
                                                     PyExc_RuntimeError);

    m.def("kappa", &unifed::kappa, py::arg("theta"));
    m.def("kappa_prime", &unifed::kappa_prime, py::arg("theta"));
    m.def("kappa_double_prime", &unifed::kappa_double_prime,
          py::arg("theta"));
    m.def("kappa_prime_inverse", &unifed::kappa_prime_inverse,
          py::arg("mu"));

    m.def("density", &unifed::density, py::arg("x"), py::arg("theta"));
    m.def(
        "density_general",
        [](double x, double theta, int n) {
            return unifed::density_general(unifed::Rational(x),
                                           {theta, n});
        },
        py::arg("x"), py::arg("theta"), py::arg("n"),
        "Density of the member with dispersion 1/n; x is taken at its "
        "exact binary value");
    m.def("cdf", &unifed::cdf, py::arg("x"), py::arg("theta"));
    m.def("quantile", &unifed::quantile, py::arg("p"), py::arg("theta"));
    m.def(
        "sample",
        [](std::size_t count, double theta, std::uint64_t seed) {
            return unifed::sample(count, theta, seed);
        },
        py::arg("count"), py::arg("theta"), py::arg("seed") = 0);
    m.def(
        "mean_variance",
        [](double theta, int n) {
            const auto mv = unifed::mean_variance({theta, n});
            return py::make_tuple(mv.mean, mv.variance);
        },
        py::arg("theta"), py::arg("n") = 1);
    m.def("variance_function", &unifed::variance_function, py::arg("mu"));
    m.def("unit_deviance", &unifed::unit_deviance, py::arg("y"),
          py::arg("mu"));
    m.def(
        "mle_theta",
        [](const std::vector<double>& observations) {
            return unifed::mle_theta(observations);
        },
        py::arg("observations"));
    m.def(
        "log_likelihood",
        [](const std::vector<double>& observations, double theta) {
            return unifed::log_likelihood(observations, theta);
        },
        py::arg("observations"), py::arg("theta"));

    m.def("irwin_hall_naive", &unifed::irwin_hall_naive, py::arg("y"),
          py::arg("n"));
    m.def(
        "irwin_hall_exact",
        [](double y, int n, int cap) {
            return unifed::irwin_hall_exact(unifed::Rational(y), n, cap)
                .get_d();
        },
        py::arg("y"), py::arg("n"),
        py::arg("cap") = unifed::kIrwinHallExactCapDefault,
        "Exact-rational evaluation rounded to float at the end");
    m.def(
        "irwin_hall_exact_str",
        [](const std::string& numerator, const std::string& denominator,
           int n, int cap) {
            const unifed::Rational y(numerator + "/" + denominator);
            return unifed::irwin_hall_exact(y, n, cap).get_str();
        },
        py::arg("numerator"), py::arg("denominator"), py::arg("n"),
        py::arg("cap") = unifed::kIrwinHallExactCapDefault,
        "Exact-rational evaluation of y = numerator/denominator, returned "
        "as a 'p/q' string");

    m.def("chi_square_survival", &unifed::chi_square_survival,
          py::arg("x"), py::arg("df"));
    m.def("normal_two_sided_p", &unifed::normal_two_sided_p, py::arg("z"));

    m.def(
        "beta_density",
        [](double y, double mu, double phi) {
            return unifed::beta_density(y, {mu, phi});
        },
        py::arg("y"), py::arg("mu"), py::arg("phi"));
    m.def(
        "beta_params_from_shapes",
        [](double alpha, double beta) {
            const auto params = unifed::beta_params_from_shapes(alpha, beta);
            return py::make_tuple(params.mu, params.phi);
        },
        py::arg("alpha"), py::arg("beta"));
    m.def(
        "beta_mean_variance",
        [](double mu, double phi) {
            const auto mv = unifed::beta_mean_variance({mu, phi});
            return py::make_tuple(mv.mean, mv.variance);
        },
        py::arg("mu"), py::arg("phi"));

    m.def("fit_csv", &fit_csv, py::arg("path"), py::arg("response"),
          py::arg("covariates"), py::arg("weight") = std::string(),
          py::arg("reference_levels") =
              std::map<std::string, std::string>(),
          py::arg("link") = std::string("canonical"),
          py::arg("aggregate") = true,
          "Ingest a CSV, optionally aggregate, and fit the GLM; returns a "
          "dict of results");
    m.def("run_cli", &run_cli, py::arg("args"),
          py::arg("stdin_text") = std::string(),
          "Run a CLI invocation in process; returns (exit_code, stdout, "
          "stderr)");

    m.attr("__version__") = "0.1.0";
}
