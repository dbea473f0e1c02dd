#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wavefit/estimation.hpp"
#include "wavefit/sample.hpp"

namespace wavefit {

/// Resampling setup. B is the number of bootstrap resamples.
struct BootstrapConfig {
    int B = 100;
    std::uint64_t seed = 0;
};

/// Standard errors plus the resample fit outcome counts.
struct BootstrapResult {
    std::vector<double> std_errors;  // one per fitted parameter
    int successes = 0;
    int failures = 0;
};

/// Any fit procedure: sample in, FitReport out. Must be deterministic.
using Estimator = std::function<FitReport(const HsSample&)>;

/// Standard deviation of each fitted parameter across B resamples drawn with
/// replacement. Resample b uses the sub-seed derived from (seed, b), so the
/// result does not depend on evaluation order. Failed refits are skipped and
/// counted; more than 10% failures raise a bootstrap-unstable error.
BootstrapResult bootstrap_se(const HsSample& sample, const Estimator& estimator,
                             BootstrapConfig config);

}  // namespace wavefit
