#pragma once

#include <stdexcept>

namespace wavefit {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A parameter or argument lies outside its mathematical domain.
struct DomainError : Error { using Error::Error; };

/// Operation requires a nonempty input.
struct EmptyInputError : Error { using Error::Error; };

/// Input is formally valid but makes the computation singular.
struct DegenerateInputError : Error { using Error::Error; };

/// Numerical estimation failed to converge or produced invalid parameters.
struct EstimationError : Error { using Error::Error; };

/// No observation lies above the requested tail threshold.
struct InsufficientTailError : Error { using Error::Error; };

/// Sample is too short for the requested statistic.
struct InsufficientDataError : Error { using Error::Error; };

/// More than the tolerated fraction of bootstrap refits failed.
struct BootstrapUnstableError : Error { using Error::Error; };

/// Unreadable or structurally invalid input file.
struct FileFormatError : Error { using Error::Error; };

/// Invalid run or dataset configuration.
struct ConfigError : Error { using Error::Error; };

}  // namespace wavefit
