#include "unifed/data.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <system_error>

#include "unifed/errors.hpp"

namespace unifed::data {

namespace {

std::string join(const std::vector<std::string>& parts,
                 const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

bool needs_quoting(const std::string& field) {
    return field.find_first_of(",\"\r\n") != std::string::npos;
}

void write_field(const std::string& field, std::ostream& out) {
    if (!needs_quoting(field)) {
        out << field;
        return;
    }
    out << '"';
    for (char c : field) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

void write_row(const std::vector<std::string>& row, std::ostream& out) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) out << ',';
        write_field(row[i], out);
    }
    out << '\n';
}

double parse_double(const std::string& field, const char* column,
                    std::size_t row) {
    std::string trimmed = field;
    const auto first = trimmed.find_first_not_of(" \t");
    const auto last = trimmed.find_last_not_of(" \t");
    trimmed = first == std::string::npos
                  ? std::string()
                  : trimmed.substr(first, last - first + 1);
    double value = 0.0;
    const char* begin = trimmed.data();
    const char* end = begin + trimmed.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc() || result.ptr != end ||
        !std::isfinite(value)) {
        throw DataError("row " + std::to_string(row) + ": column '" +
                        column + "' value '" + field +
                        "' is not a finite number");
    }
    return value;
}

std::size_t find_column(const CsvTable& table, const std::string& name) {
    const auto it =
        std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) {
        throw DataError("column '" + name + "' not found in header [" +
                        join(table.header, ", ") + "]");
    }
    return (std::size_t)std::distance(table.header.begin(), it);
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    std::string content(std::istreambuf_iterator<char>(in), {});
    if (content.empty()) {
        throw DataError("empty input: a header row is required");
    }

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;

    const auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    const auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        const char c = content[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            if (record.empty() && field.empty() && !field_started) {
                continue;  // blank line
            }
            end_record();
        } else {
            field += c;
            if (c != '\r') field_started = true;  // CR only counts via CRLF
        }
    }
    if (quoted) throw DataError("unterminated quoted field at end of input");
    if (field_started || !record.empty()) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        end_record();
    }

    CsvTable table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            throw DataError("row " + std::to_string(r) + ": expected " +
                            std::to_string(table.header.size()) +
                            " fields, found " +
                            std::to_string(records[r].size()));
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    return read_csv(in);
}

void write_csv(const CsvTable& table, std::ostream& out) {
    write_row(table.header, out);
    for (const auto& row : table.rows) write_row(row, out);
}

Dataset ingest_csv(std::istream& in, const DesignSpec& spec) {
    const CsvTable table = read_csv(in);

    const std::size_t response_col = find_column(table, spec.response);
    std::size_t weight_col = 0;
    const bool has_weight = !spec.weight.empty();
    if (has_weight) weight_col = find_column(table, spec.weight);
    std::vector<std::size_t> covariate_cols;
    covariate_cols.reserve(spec.covariates.size());
    for (const auto& name : spec.covariates) {
        covariate_cols.push_back(find_column(table, name));
    }

    Dataset dataset;
    dataset.covariate_names = spec.covariates;
    dataset.rows.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        RawObservation obs;
        obs.response =
            parse_double(row[response_col], spec.response.c_str(), r + 1);
        if (obs.response < 0.0 || obs.response > 1.0) {
            throw DataError("row " + std::to_string(r + 1) + ": response " +
                            format_double(obs.response) +
                            " lies outside [0, 1]");
        }
        if (has_weight) {
            obs.weight =
                parse_double(row[weight_col], spec.weight.c_str(), r + 1);
            if (obs.weight <= 0.0) {
                throw DataError("row " + std::to_string(r + 1) +
                                ": weight must be positive");
            }
        }
        obs.covariates.reserve(covariate_cols.size());
        for (std::size_t c : covariate_cols) obs.covariates.push_back(row[c]);
        dataset.rows.push_back(std::move(obs));
    }
    return dataset;
}

Dataset ingest_csv_file(const std::string& path, const DesignSpec& spec) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    return ingest_csv(in, spec);
}

AggregatedData aggregate(const Dataset& dataset) {
    if (dataset.rows.empty()) {
        throw DataError("cannot aggregate an empty dataset");
    }
    // sorted keys and sorted (y, w) pairs inside each group make the
    // result independent of input row order, bit for bit
    std::map<std::vector<std::string>, std::vector<std::pair<double, double>>>
        groups;
    for (const auto& obs : dataset.rows) {
        groups[obs.covariates].emplace_back(obs.response, obs.weight);
    }

    AggregatedData aggregated;
    aggregated.covariate_names = dataset.covariate_names;
    aggregated.classes.reserve(groups.size());
    for (auto& [key, members] : groups) {
        std::sort(members.begin(), members.end());
        long double weighted_sum = 0.0L;
        long double total_weight = 0.0L;
        for (const auto& [y, w] : members) {
            weighted_sum += (long double)w * y;
            total_weight += w;
        }
        AggregatedClass cls;
        cls.covariates = key;
        cls.w_plus = (double)total_weight;
        cls.y_bar = (double)(weighted_sum / total_weight);
        if (cls.y_bar <= 0.0 || cls.y_bar >= 1.0) {
            throw DataError("aggregated class (" + join(key, ", ") +
                            ") has mean " + format_double(cls.y_bar) +
                            ", which is not strictly inside (0, 1)");
        }
        aggregated.classes.push_back(std::move(cls));
    }
    return aggregated;
}

AggregatedData as_classes(const Dataset& dataset) {
    if (dataset.rows.empty()) {
        throw DataError("cannot build classes from an empty dataset");
    }
    AggregatedData aggregated;
    aggregated.covariate_names = dataset.covariate_names;
    aggregated.classes.reserve(dataset.rows.size());
    for (std::size_t r = 0; r < dataset.rows.size(); ++r) {
        const auto& obs = dataset.rows[r];
        if (obs.response <= 0.0 || obs.response >= 1.0) {
            throw DataError(
                "row " + std::to_string(r + 1) + ": response " +
                format_double(obs.response) +
                " must lie strictly inside (0, 1) when fitting without "
                "aggregation");
        }
        aggregated.classes.push_back(
            {obs.covariates, obs.response, obs.weight});
    }
    return aggregated;
}

std::pair<DesignMatrix, WeightedResponse> build_design(
    const AggregatedData& aggregated, const DesignSpec& spec) {
    if (aggregated.classes.empty()) {
        throw DataError("cannot build a design matrix from zero classes");
    }
    if (aggregated.covariate_names != spec.covariates) {
        throw DataError("design spec covariates do not match the data");
    }

    const std::size_t m = aggregated.classes.size();
    const std::size_t n_cov = spec.covariates.size();

    // observed categories, ascending, per covariate
    std::vector<std::vector<std::string>> levels(n_cov);
    for (std::size_t j = 0; j < n_cov; ++j) {
        std::vector<std::string> seen;
        for (const auto& cls : aggregated.classes) {
            seen.push_back(cls.covariates[j]);
        }
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        levels[j] = std::move(seen);
    }

    DesignMatrix design;
    std::vector<std::string> references(n_cov);
    std::vector<std::vector<std::string>> coded(n_cov);
    std::size_t n_cols = 1;
    for (std::size_t j = 0; j < n_cov; ++j) {
        const auto& name = spec.covariates[j];
        const auto ref_it = spec.reference_levels.find(name);
        if (ref_it != spec.reference_levels.end()) {
            if (std::find(levels[j].begin(), levels[j].end(),
                          ref_it->second) == levels[j].end()) {
                throw DataError("reference level '" + ref_it->second +
                                "' for covariate '" + name +
                                "' does not occur in the data");
            }
            references[j] = ref_it->second;
        } else {
            references[j] = levels[j].front();
        }
        if (levels[j].size() == 1) {
            design.dropped_covariates.push_back(name);
            continue;
        }
        for (const auto& level : levels[j]) {
            if (level != references[j]) coded[j].push_back(level);
        }
        n_cols += coded[j].size();
    }

    design.X = Eigen::MatrixXd::Zero((Eigen::Index)m, (Eigen::Index)n_cols);
    design.column_names.reserve(n_cols);
    design.column_names.push_back("(Intercept)");
    for (std::size_t j = 0; j < n_cov; ++j) {
        for (const auto& level : coded[j]) {
            design.column_names.push_back(spec.covariates[j] + level);
        }
    }

    WeightedResponse resp;
    resp.y.resize((Eigen::Index)m);
    resp.w.resize((Eigen::Index)m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& cls = aggregated.classes[i];
        design.X((Eigen::Index)i, 0) = 1.0;
        Eigen::Index col = 1;
        for (std::size_t j = 0; j < n_cov; ++j) {
            for (const auto& level : coded[j]) {
                if (cls.covariates[j] == level) {
                    design.X((Eigen::Index)i, col) = 1.0;
                }
                ++col;
            }
        }
        resp.y((Eigen::Index)i) = cls.y_bar;
        resp.w((Eigen::Index)i) = cls.w_plus;
    }
    return {std::move(design), std::move(resp)};
}

void write_aggregated_csv(const AggregatedData& aggregated,
                          std::ostream& out) {
    std::vector<std::string> header = aggregated.covariate_names;
    header.push_back("y_bar");
    header.push_back("w_plus");
    write_row(header, out);
    for (const auto& cls : aggregated.classes) {
        std::vector<std::string> row = cls.covariates;
        row.push_back(format_double(cls.y_bar));
        row.push_back(format_double(cls.w_plus));
        write_row(row, out);
    }
}

std::string format_double(double value) {
    char buffer[32];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

}  // namespace unifed::data
