#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavefit/distributions.hpp"
#include "wavefit/estimation.hpp"
#include "wavefit/report.hpp"

namespace wavefit {

/// Shared options for the fit / eval / plotdata commands. Datasets come from
/// a spec file, bare canonical-CSV inputs, or both; at least one dataset and
/// one runnable (family, method) pair is required.
struct RunConfig {
    std::string dataset_spec_path;         // empty = none
    std::vector<std::string> datasets;     // spec-name filter, empty = all
    std::vector<std::string> input_files;  // canonical CSV, named by file stem
    std::vector<Family> families;
    std::vector<Method> methods;
    int weight_exponent = 2;
    int bootstrap_B = 0;  // 0 disables bootstrap standard errors
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    OutputFormat format = OutputFormat::csv;
    double tail_threshold = 0.99;  // tail-density series only
    int bins = 15;
    bool timestamp_header = true;
    // Evaluate these parameters directly instead of fitting (eval/plotdata).
    std::optional<std::pair<Family, std::vector<double>>> inline_params;
};

/// Each returns a process exit code: 0 when every job succeeded, 1 when any
/// job failed (per-job status is recorded in the output rows). Configuration
/// and input-file problems throw instead.
int cmd_fit(const RunConfig& config);
int cmd_eval(const RunConfig& config);
int cmd_plotdata(const RunConfig& config);

/// Parameter-recovery simulation: draw `repeats` samples of size n from an
/// exponentiated Weibull, refit each, and summarize the estimates.
struct SimulateConfig {
    double alpha = 1.0;
    double beta = 1.0;
    double delta = 2.0;
    std::size_t n = 100000;
    int repeats = 100;
    Method method = Method::wls;
    int weight_exponent = 2;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    OutputFormat format = OutputFormat::csv;
    bool timestamp_header = true;
};

int cmd_simulate_recovery(const SimulateConfig& config);

}  // namespace wavefit
