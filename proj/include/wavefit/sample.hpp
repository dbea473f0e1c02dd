#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wavefit {

/// A collection of significant wave height observations in meters.
/// Timestamps, when present, are UTC unix seconds parallel to values.
struct HsSample {
    std::vector<double> values;
    std::vector<std::int64_t> timestamps;  // empty, or one per value
    std::string source_label;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

/// Copy of the values sorted ascending.
std::vector<double> sorted_values(const HsSample& sample);

/// Throws DomainError unless every value is finite and > 0 and timestamps,
/// if present, match the value count and strictly increase.
void validate(const HsSample& sample);

}  // namespace wavefit
