#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "frechet/errors.hpp"
#include "frechet/graded_core.hpp"

namespace frechet::cli {

using Json = nlohmann::ordered_json;

struct ConfigError : Error {
    using Error::Error;
};

struct ExperimentConfig {
    std::string experiment;
    std::size_t depth = 16;
    std::size_t bandwidth = 16;
    std::string weights = "geometric:0.5";
    std::uint64_t seed = 20240611;
    double tol = 1e-10;
    std::string out_dir = ".";
    std::string format = "json";  // json | csv | both
    std::string curve = "line:e1";
    std::string map = "tau-sine";
    std::string target = "0.1e1";
};

struct CsvTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct ExperimentReport {
    Json report;
    std::vector<CsvTable> tables;
    bool certificate_violation = false;
};

const std::vector<std::string>& experiment_names();

/// `geometric:<r>` or a comma list of weights.
/// @throws ConfigError on malformed input
WeightSequence parse_weights(const std::string& spec, std::size_t depth);

Json config_to_json(const ExperimentConfig& cfg);

/// Runs one experiment. The report header carries version, timestamp and the
/// resolved config; everything else depends only on the config.
/// @throws ConfigError for unknown experiments or invalid parameters
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// RFC 4180 rendering with CRLF line ends.
std::string to_csv(const CsvTable& table);

/// Report with the timestamp removed, for determinism comparisons.
Json strip_timestamp(Json report);

}  // namespace frechet::cli
