#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace unifed::data {

// Verbatim CSV contents: comma separated, double-quote quoting, first row
// is the header, no type inference.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);
void write_csv(const CsvTable& table, std::ostream& out);

// Column selection for a model: which column is the response, which (if
// any) carries weights, which are categorical covariates, and optional
// per-covariate reference levels (default: lexicographically smallest
// observed category).
struct DesignSpec {
    std::string response;
    std::string weight;  // empty means unit weights
    std::vector<std::string> covariates;
    std::map<std::string, std::string> reference_levels;
};

struct RawObservation {
    double response = 0.0;
    double weight = 1.0;
    std::vector<std::string> covariates;  // aligned with Dataset names
};

struct Dataset {
    std::vector<std::string> covariate_names;
    std::vector<RawObservation> rows;
};

struct AggregatedClass {
    std::vector<std::string> covariates;
    double y_bar = 0.0;
    double w_plus = 0.0;
};

struct AggregatedData {
    std::vector<std::string> covariate_names;
    std::vector<AggregatedClass> classes;
};

struct WeightedResponse {
    Eigen::VectorXd y;  // class means, strictly inside (0, 1)
    Eigen::VectorXd w;  // positive weights
};

struct DesignMatrix {
    Eigen::MatrixXd X;  // leading intercept column of ones
    std::vector<std::string> column_names;
    std::vector<std::string> dropped_covariates;  // single-category inputs
};

// Parse rows against the spec.  Row-level responses may touch 0 or 1; the
// open-interval requirement applies to class means, not raw rows.
Dataset ingest_csv(std::istream& in, const DesignSpec& spec);
Dataset ingest_csv_file(const std::string& path, const DesignSpec& spec);

// Group rows sharing a covariate tuple and reduce each group to its
// weighted mean and total weight.  Output is sorted by covariate tuple and
// independent of input row order; a class whose mean lands on 0 or 1 is a
// hard error naming the class.
AggregatedData aggregate(const Dataset& dataset);

// One class per row, no grouping (the unaggregated fitting path).  Every
// row response must then be strictly inside (0, 1).
AggregatedData as_classes(const Dataset& dataset);

// Dummy-coded design: intercept plus one indicator per non-reference
// category, covariate by covariate, categories in ascending order;
// column names are <covariate><category>.
std::pair<DesignMatrix, WeightedResponse> build_design(
    const AggregatedData& aggregated, const DesignSpec& spec);

// Serialization with columns <covariates...>, y_bar, w_plus; numeric
// fields use shortest round-trip formatting so ingest(write(x)) == x.
void write_aggregated_csv(const AggregatedData& aggregated,
                          std::ostream& out);

// Shortest decimal string that parses back to exactly this double.
std::string format_double(double value);

}  // namespace unifed::data
