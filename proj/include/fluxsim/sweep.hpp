#pragma once
// Config ingestion, parallel sweep execution, CSV + manifest output.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fluxsim/types.hpp"

namespace fluxsim {

struct ConfigError : FluxsimError {
    std::vector<std::string> errors;
    explicit ConfigError(std::vector<std::string> errs);
};

struct SweepAxis {
    std::string parameter;
    std::vector<double> values;
};

struct SweepConfig {
    std::string experiment;
    std::map<std::string, double> fixed;
    SweepAxis sweep;
    std::optional<SweepAxis> sweep2;  // phase_diagram / overlap grids
    std::map<std::string, double> numerics;
    std::string output;  // CSV path; empty = stdout
    int jobs = 0;        // 0 = FLUXSIM_JOBS env var or 1
    bool verify_convergence = false;
};

struct SweepRecord {
    int index = 0;
    std::vector<double> inputs;   // swept value(s)
    std::vector<double> outputs;  // per-experiment columns
    std::string error;            // empty = success
};

struct SweepResult {
    std::vector<std::string> input_columns;
    std::vector<std::string> output_columns;
    std::vector<SweepRecord> records;  // canonical (index) order
    double wall_time_s = 0.0;
    bool ok = true;
};

// parse + semantic validation; throws ConfigError listing every problem at once
SweepConfig validate_config(const std::string& json_text);

SweepResult run_sweep(const SweepConfig& config);

std::string to_csv(const SweepResult& result);
std::string manifest_json(const SweepConfig& config, const SweepResult& result,
                          const std::string& raw_config);

// experiments and the sweep parameters each accepts
const std::map<std::string, std::vector<std::string>>& experiment_parameters();

}  // namespace fluxsim
