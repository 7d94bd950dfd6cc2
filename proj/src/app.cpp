#include "unifed/app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "unifed/beta.hpp"
#include "unifed/data.hpp"
#include "unifed/distribution.hpp"
#include "unifed/errors.hpp"
#include "unifed/numerics.hpp"

namespace unifed::app {

namespace {

using nlohmann::json;

struct DataOptions {
    std::string path;  // empty = stdin
    std::string response;
    std::string weight;
    std::vector<std::string> covariates;
    std::vector<std::string> reference_pairs;  // covariate=level
};

void add_data_options(CLI::App* cmd, DataOptions& options,
                      bool model_columns) {
    cmd->add_option("--data", options.path,
                    "Input CSV path (stdin when omitted)");
    if (model_columns) {
        cmd->add_option("--response", options.response,
                        "Response column name")
            ->required();
        cmd->add_option("--weight", options.weight,
                        "Weight column name (unit weights when omitted)");
        cmd->add_option("--covariates", options.covariates,
                        "Categorical covariate column names")
            ->required()
            ->delimiter(',');
        cmd->add_option(
            "--ref", options.reference_pairs,
            "Reference level as covariate=level (repeatable; default "
            "is the lexicographically first category)");
    }
}

data::DesignSpec make_spec(const DataOptions& options) {
    data::DesignSpec spec;
    spec.response = options.response;
    spec.weight = options.weight;
    spec.covariates = options.covariates;
    for (const auto& pair : options.reference_pairs) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw CLI::ValidationError(
                "--ref", "expected covariate=level, got '" + pair + "'");
        }
        spec.reference_levels[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
    return spec;
}

data::Dataset load_dataset(const DataOptions& options,
                           const data::DesignSpec& spec,
                           std::istream& in) {
    if (options.path.empty()) return data::ingest_csv(in, spec);
    return data::ingest_csv_file(options.path, spec);
}

data::CsvTable load_table(const std::string& path, std::istream& in) {
    if (path.empty()) return data::read_csv(in);
    return data::read_csv_file(path);
}

struct FitComputation {
    glm::FitResult fit;
    std::vector<std::string> dropped_covariates;
};

FitComputation compute_fit(const DataOptions& options, bool no_aggregate,
                           const std::string& link_name, std::istream& in) {
    const data::DesignSpec spec = make_spec(options);
    const data::Dataset dataset = load_dataset(options, spec, in);
    const data::AggregatedData classes =
        no_aggregate ? data::as_classes(dataset) : data::aggregate(dataset);
    auto [design, resp] = data::build_design(classes, spec);
    const glm::Link link(glm::link_from_name(link_name));
    FitComputation result{glm::fit(design, resp, link),
                          std::move(design.dropped_covariates)};
    return result;
}

json fit_to_json(const FitComputation& computation) {
    const auto& fit = computation.fit;
    json coefficients = json::array();
    for (std::size_t j = 0; j < fit.coefficient_names.size(); ++j) {
        coefficients.push_back(
            {{"name", fit.coefficient_names[j]},
             {"estimate", fit.coefficients((Eigen::Index)j)},
             {"std_error", fit.standard_errors((Eigen::Index)j)},
             {"z_value", fit.z_values((Eigen::Index)j)},
             {"p_value", fit.p_values((Eigen::Index)j)}});
    }
    return {{"link", glm::link_name(fit.link)},
            {"converged", fit.converged},
            {"iterations", fit.iterations},
            {"coefficients", coefficients},
            {"null_deviance", fit.null_deviance},
            {"null_df", fit.null_df},
            {"residual_deviance", fit.residual_deviance},
            {"residual_df", fit.residual_df},
            {"min_class_weight", fit.min_weight},
            {"dropped_covariates", computation.dropped_covariates}};
}

int run_fit(const DataOptions& options, bool no_aggregate,
            const std::string& link_name, const std::string& format,
            std::istream& in, std::ostream& out, std::ostream& err) {
    const FitComputation computation =
        compute_fit(options, no_aggregate, link_name, in);
    for (const auto& name : computation.dropped_covariates) {
        err << "note: covariate '" << name
            << "' has a single category and was dropped\n";
    }
    if (format == "json") {
        out << fit_to_json(computation).dump(2) << "\n";
    } else {
        out << render_summary(computation.fit);
    }
    if (!computation.fit.converged) {
        err << "warning: IWLS did not converge within "
            << computation.fit.iterations << " iterations\n";
        return kExitNumeric;
    }
    return kExitOk;
}

int run_aggregate(const DataOptions& options, const std::string& out_path,
                  std::istream& in, std::ostream& out, std::ostream& err) {
    const data::DesignSpec spec = make_spec(options);
    const data::Dataset dataset = load_dataset(options, spec, in);
    const data::AggregatedData aggregated = data::aggregate(dataset);

    double min_weight = aggregated.classes.front().w_plus;
    double max_weight = min_weight;
    for (const auto& cls : aggregated.classes) {
        min_weight = std::min(min_weight, cls.w_plus);
        max_weight = std::max(max_weight, cls.w_plus);
    }

    std::ostringstream rendered;
    data::write_aggregated_csv(aggregated, rendered);
    if (out_path.empty()) {
        out << rendered.str();
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) {
            throw DataError("cannot open '" + out_path + "' for writing");
        }
        file << rendered.str();
    }
    err << "classes: " << aggregated.classes.size()
        << "  min_weight: " << data::format_double(min_weight)
        << "  max_weight: " << data::format_double(max_weight) << "\n";
    return kExitOk;
}

struct PdfOptions {
    std::vector<double> thetas;
    std::vector<double> mus;
    std::vector<double> beta_mus;
    std::vector<double> beta_phis;
    std::vector<double> alphas;
    std::vector<double> betas;
    double from = 0.0;
    double to = 1.0;
    double step = 0.01;
};

int run_pdf(const PdfOptions& options, std::ostream& out) {
    struct Column {
        std::string label;
        bool is_beta;
        double theta;
        BetaParams params;
    };
    std::vector<Column> columns;
    for (double theta : options.thetas) {
        columns.push_back({"theta=" + data::format_double(theta), false,
                           theta, {0.5, 1.0}});
    }
    for (double mu : options.mus) {
        columns.push_back({"mu=" + data::format_double(mu), false,
                           kappa_prime_inverse(mu), {0.5, 1.0}});
    }
    if (options.beta_mus.size() != options.beta_phis.size()) {
        throw CLI::ValidationError(
            "--beta-mu/--beta-phi must be given in equal numbers");
    }
    for (std::size_t i = 0; i < options.beta_mus.size(); ++i) {
        columns.push_back(
            {"beta(mu=" + data::format_double(options.beta_mus[i]) +
                 ",phi=" + data::format_double(options.beta_phis[i]) + ")",
             true, 0.0, {options.beta_mus[i], options.beta_phis[i]}});
    }
    if (options.alphas.size() != options.betas.size()) {
        throw CLI::ValidationError(
            "--alpha/--beta must be given in equal numbers");
    }
    for (std::size_t i = 0; i < options.alphas.size(); ++i) {
        columns.push_back(
            {"beta(alpha=" + data::format_double(options.alphas[i]) +
                 ",beta=" + data::format_double(options.betas[i]) + ")",
             true, 0.0,
             beta_params_from_shapes(options.alphas[i], options.betas[i])});
    }
    if (columns.empty()) {
        throw CLI::ValidationError(
            "at least one of --theta/--mu/--beta-mu/--alpha is required");
    }
    if (!(options.step > 0.0) || options.to < options.from) {
        throw CLI::ValidationError("grid requires step > 0 and to >= from");
    }

    out << "x";
    for (const auto& column : columns) out << "," << column.label;
    out << "\n";
    const long count =
        std::lround((options.to - options.from) / options.step);
    for (long i = 0; i <= count; ++i) {
        const double x = options.from + (double)i * options.step;
        out << data::format_double(x);
        for (const auto& column : columns) {
            const double f = column.is_beta
                                 ? beta_density(x, column.params)
                                 : density(x, column.theta);
            out << "," << data::format_double(f);
        }
        out << "\n";
    }
    return kExitOk;
}

int run_mle(const std::string& path, const std::string& column,
            std::istream& in, std::ostream& out) {
    const data::CsvTable table = load_table(path, in);
    std::size_t col = 0;
    if (!column.empty()) {
        const auto it =
            std::find(table.header.begin(), table.header.end(), column);
        if (it == table.header.end()) {
            throw DataError("column '" + column + "' not found");
        }
        col = (std::size_t)std::distance(table.header.begin(), it);
    } else if (table.header.size() != 1) {
        throw DataError(
            "input has " + std::to_string(table.header.size()) +
            " columns; pick one with --column");
    }

    std::vector<double> values;
    values.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        double value = 0.0;
        const std::string& field = table.rows[r][col];
        const auto result = std::from_chars(
            field.data(), field.data() + field.size(), value);
        if (result.ec != std::errc() ||
            result.ptr != field.data() + field.size()) {
            throw DataError("row " + std::to_string(r + 1) + ": value '" +
                            field + "' is not a number");
        }
        values.push_back(value);
    }

    long double total = 0.0L;
    for (double v : values) total += v;
    const double mean = values.empty()
                            ? std::numeric_limits<double>::quiet_NaN()
                            : (double)(total / values.size());
    const double theta_hat = mle_theta(values);
    out << "n: " << values.size() << "\n";
    out << "mean: " << format_full(mean) << "\n";
    out << "theta_hat: " << format_full(theta_hat) << "\n";
    return kExitOk;
}

int run_gof(const DataOptions& options, bool no_aggregate,
            const std::string& link_name, double weight_threshold,
            std::istream& in, std::ostream& out, std::ostream& err) {
    const FitComputation computation =
        compute_fit(options, no_aggregate, link_name, in);
    if (!computation.fit.converged) {
        err << "warning: IWLS did not converge within "
            << computation.fit.iterations << " iterations\n";
    }
    const glm::GofResult gof = glm::goodness_of_fit(computation.fit);
    out << "statistic: " << format_full(gof.statistic) << "\n";
    out << "df: " << gof.df << "\n";
    out << "p_value: " << format_full(gof.p_value) << "\n";
    out << "min_class_weight: " << data::format_double(gof.min_weight)
        << "\n";
    if (gof.min_weight < weight_threshold) {
        out << "note: the chi-squared approximation leans on large class "
               "weights; the smallest here is "
            << data::format_double(gof.min_weight) << " (threshold "
            << data::format_double(weight_threshold) << ")\n";
    }
    return computation.fit.converged ? kExitOk : kExitNumeric;
}

}  // namespace

std::string format_fixed(double value, int decimals) {
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value,
                      std::chars_format::fixed, decimals);
    return std::string(buffer, result.ptr);
}

std::string format_full(double value) { return data::format_double(value); }

std::string format_deviance(double value) {
    int integer_digits = 1;
    if (std::fabs(value) >= 1.0) {
        integer_digits =
            (int)std::floor(std::log10(std::fabs(value))) + 1;
    }
    return format_fixed(value, std::max(0, 5 - integer_digits));
}

std::string significance_stars(double p) {
    if (p <= 0.001) return "***";
    if (p <= 0.01) return "**";
    if (p <= 0.05) return "*";
    if (p <= 0.1) return ".";
    return "";
}

std::string render_summary(const glm::FitResult& fit) {
    const std::size_t q = fit.coefficient_names.size();
    const std::array<std::string, 5> headers = {
        "", "Estimate", "Std. Error", "z value", "Pr(>|z|)"};
    std::vector<std::array<std::string, 5>> cells(q);
    std::vector<std::string> stars(q);
    for (std::size_t j = 0; j < q; ++j) {
        const auto i = (Eigen::Index)j;
        cells[j] = {fit.coefficient_names[j],
                    format_fixed(fit.coefficients(i), 4),
                    format_fixed(fit.standard_errors(i), 4),
                    format_fixed(fit.z_values(i), 2),
                    format_fixed(fit.p_values(i), 4)};
        stars[j] = significance_stars(fit.p_values(i));
    }
    std::array<std::size_t, 5> widths;
    for (std::size_t c = 0; c < 5; ++c) {
        widths[c] = headers[c].size();
        for (const auto& row : cells) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }

    std::ostringstream out;
    out << "Coefficients:\n";
    const auto pad = [](const std::string& s, std::size_t width) {
        return std::string(width - s.size(), ' ') + s;
    };
    for (std::size_t c = 0; c < 5; ++c) {
        if (c > 0) out << " ";
        // name column is left aligned, numbers right aligned
        if (c == 0) {
            out << headers[c] << std::string(widths[c] - headers[c].size(),
                                             ' ');
        } else {
            out << pad(headers[c], widths[c]);
        }
    }
    out << "\n";
    for (std::size_t j = 0; j < q; ++j) {
        out << cells[j][0]
            << std::string(widths[0] - cells[j][0].size(), ' ');
        for (std::size_t c = 1; c < 5; ++c) {
            out << " " << pad(cells[j][c], widths[c]);
        }
        if (!stars[j].empty()) out << " " << stars[j];
        out << "\n";
    }
    out << "---\n";
    out << "Signif. codes:  0 '***' 0.001 '**' 0.01 '*' 0.05 '.' 0.1 ' ' "
           "1\n\n";
    out << "(Dispersion parameter taken to be 1)\n\n";
    out << "    Null deviance: " << format_deviance(fit.null_deviance)
        << "  on " << fit.null_df << "  degrees of freedom\n";
    out << "Residual deviance: " << format_deviance(fit.residual_deviance)
        << "  on " << fit.residual_df << "  degrees of freedom\n\n";
    out << "Number of IWLS iterations: " << fit.iterations << "\n";
    return out.str();
}

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
    CLI::App app{"unifed distribution toolkit: density evaluation, "
                 "sampling, estimation, aggregation, and GLM fitting for "
                 "responses on the unit interval"};
    app.require_subcommand(1);

    DataOptions fit_data;
    bool fit_no_aggregate = false;
    std::string fit_link = "canonical";
    std::string fit_format = "text";
    auto* fit_cmd = app.add_subcommand(
        "fit", "Fit a weighted GLM with unifed response");
    add_data_options(fit_cmd, fit_data, true);
    fit_cmd->add_flag("--no-aggregate", fit_no_aggregate,
                      "Fit on raw rows instead of aggregated classes");
    fit_cmd->add_option("--link", fit_link, "Link function")
        ->check(CLI::IsMember({"canonical", "logit", "identity"}));
    fit_cmd->add_option("--format", fit_format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));

    DataOptions agg_data;
    std::string agg_output;
    auto* agg_cmd = app.add_subcommand(
        "aggregate", "Collapse rows into per-class weighted means");
    add_data_options(agg_cmd, agg_data, true);
    agg_cmd->add_option("--output", agg_output,
                        "Write the aggregated CSV here instead of stdout");

    PdfOptions pdf_options;
    auto* pdf_cmd = app.add_subcommand(
        "pdf", "Tabulate unifed and beta densities over a grid");
    pdf_cmd->add_option("--theta", pdf_options.thetas,
                        "Unifed canonical parameter (repeatable)");
    pdf_cmd->add_option("--mu", pdf_options.mus,
                        "Unifed mean in (0,1) (repeatable)");
    pdf_cmd->add_option("--beta-mu", pdf_options.beta_mus,
                        "Beta mean (paired with --beta-phi)");
    pdf_cmd->add_option("--beta-phi", pdf_options.beta_phis,
                        "Beta precision (paired with --beta-mu)");
    pdf_cmd->add_option("--alpha", pdf_options.alphas,
                        "Beta first shape (paired with --beta)");
    pdf_cmd->add_option("--beta", pdf_options.betas,
                        "Beta second shape (paired with --alpha)");
    pdf_cmd->add_option("--from", pdf_options.from, "Grid start");
    pdf_cmd->add_option("--to", pdf_options.to, "Grid end");
    pdf_cmd->add_option("--step", pdf_options.step, "Grid step");

    double cdf_theta = 0.0;
    std::vector<double> cdf_xs;
    auto* cdf_cmd =
        app.add_subcommand("cdf", "Evaluate the unifed cdf");
    cdf_cmd->add_option("--theta", cdf_theta, "Canonical parameter")
        ->required();
    cdf_cmd->add_option("--x", cdf_xs, "Evaluation points (repeatable)")
        ->required();

    double quantile_theta = 0.0;
    std::vector<double> quantile_ps;
    auto* quantile_cmd =
        app.add_subcommand("quantile", "Evaluate the unifed quantile");
    quantile_cmd
        ->add_option("--theta", quantile_theta, "Canonical parameter")
        ->required();
    quantile_cmd
        ->add_option("--p", quantile_ps, "Probabilities (repeatable)")
        ->required();

    double sample_theta = 0.0;
    std::size_t sample_count = 10;
    std::uint64_t sample_seed = 0;
    auto* sample_cmd = app.add_subcommand(
        "sample", "Draw from the unifed by inverse transform");
    sample_cmd->add_option("--theta", sample_theta, "Canonical parameter")
        ->required();
    sample_cmd->add_option("--count", sample_count, "Number of draws");
    sample_cmd->add_option("--seed", sample_seed, "Generator seed");

    std::string mle_path;
    std::string mle_column;
    auto* mle_cmd = app.add_subcommand(
        "mle", "Estimate theta from a column of observations");
    mle_cmd->add_option("--data", mle_path,
                        "Input CSV path (stdin when omitted)");
    mle_cmd->add_option("--column", mle_column,
                        "Column to read (required unless single-column)");

    DataOptions gof_data;
    bool gof_no_aggregate = false;
    std::string gof_link = "canonical";
    double gof_threshold = 30.0;
    auto* gof_cmd = app.add_subcommand(
        "gof", "Chi-squared goodness of fit for a fitted model");
    add_data_options(gof_cmd, gof_data, true);
    gof_cmd->add_flag("--no-aggregate", gof_no_aggregate,
                      "Fit on raw rows instead of aggregated classes");
    gof_cmd->add_option("--link", gof_link, "Link function")
        ->check(CLI::IsMember({"canonical", "logit", "identity"}));
    gof_cmd->add_option(
        "--weight-threshold", gof_threshold,
        "Smallest class weight below which the asymptotic caveat prints");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (fit_cmd->parsed()) {
            return run_fit(fit_data, fit_no_aggregate, fit_link, fit_format,
                           in, out, err);
        }
        if (agg_cmd->parsed()) {
            return run_aggregate(agg_data, agg_output, in, out, err);
        }
        if (pdf_cmd->parsed()) return run_pdf(pdf_options, out);
        if (cdf_cmd->parsed()) {
            out << "x,cdf\n";
            for (double x : cdf_xs) {
                out << format_full(x) << ","
                    << format_full(cdf(x, cdf_theta)) << "\n";
            }
            return kExitOk;
        }
        if (quantile_cmd->parsed()) {
            out << "p,quantile\n";
            for (double p : quantile_ps) {
                out << format_full(p) << ","
                    << format_full(quantile(p, quantile_theta)) << "\n";
            }
            return kExitOk;
        }
        if (sample_cmd->parsed()) {
            for (double draw :
                 sample(sample_count, sample_theta, sample_seed)) {
                out << format_full(draw) << "\n";
            }
            return kExitOk;
        }
        if (mle_cmd->parsed()) {
            return run_mle(mle_path, mle_column, in, out);
        }
        if (gof_cmd->parsed()) {
            return run_gof(gof_data, gof_no_aggregate, gof_link,
                           gof_threshold, in, out, err);
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DesignError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    err << "error: no subcommand selected\n";
    return kExitUsage;
}

}  // namespace unifed::app
