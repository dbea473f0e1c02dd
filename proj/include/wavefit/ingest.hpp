#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavefit/sample.hpp"

namespace wavefit {

/// One observation: UTC instant (seconds since the epoch, may be negative)
/// and significant wave height in meters.
struct TimedRecord {
    std::int64_t t = 0;
    double hs = 0;
};

/// Per-parse bookkeeping. Diagnostics are capped at 20 entries; skipped rows
/// beyond that are still counted.
struct ParseStats {
    std::size_t rows_read = 0;     // data rows seen (headers excluded)
    std::size_t rows_skipped = 0;  // malformed rows dropped
    std::size_t missing = 0;       // sentinel / missing-value rows
    std::vector<std::string> diagnostics;
};

/// Days between 1970-01-01 and the given proleptic Gregorian date.
std::int64_t days_from_civil(int year, unsigned month, unsigned day);

/// Accepts YYYY-MM-DD, optionally followed by "THH:MM", "THH:MM:SS" (a space
/// may replace the 'T') and a trailing 'Z'. Date-only means midnight UTC.
std::int64_t parse_iso8601(const std::string& text);
std::string format_iso8601(std::int64_t t);

/// NDBC standard meteorological text: header row naming columns (YY/YYYY, MM,
/// DD, hh, optional mm, WVHT among others), optional units row, whitespace-
/// delimited data. WVHT sentinels 99.00/999.0 count as missing. Two-digit
/// years below 70 mean 20xx, otherwise 19xx.
std::vector<TimedRecord> parse_ndbc_met(std::istream& in, ParseStats& stats);

/// NDBC spectral density text: header row with time columns then frequencies
/// in Hz, data rows with S(f) in m^2/Hz. Hs = 4 sqrt(m0) with m0 integrated
/// by the trapezoid rule over the frequency grid.
std::vector<TimedRecord> parse_ndbc_spectral(std::istream& in, ParseStats& stats);

/// Aggregation counts from to_hourly.
struct HourlyStats {
    std::size_t combined = 0;       // hours merging two or more records
    std::size_t dropped = 0;        // non-positive or non-finite inputs removed
    std::size_t missing_hours = 0;  // empty hours inside the observed span
};

/// One value per clock hour: k records in an hour combine by the energy mean
/// sqrt(sum h_i^2 / k). Hours without records stay absent. Output timestamps
/// are the hour starts, strictly increasing.
HsSample to_hourly(const std::vector<TimedRecord>& records, HourlyStats* stats = nullptr);

/// Comma-separated hindcast export with an ISO-8601 time column and an Hs
/// column, both located by name.
std::vector<TimedRecord> parse_hindcast_csv(std::istream& in, const std::string& time_column,
                                            const std::string& hs_column, ParseStats& stats);

/// Declarative description of one dataset: where the files are, how to parse
/// them, and how to split time into the fit and retained periods.
struct DatasetSpec {
    std::string name;
    std::string kind;  // ndbc-met | ndbc-spectral | hindcast-csv | canonical-csv
    std::vector<std::string> files;
    std::optional<std::int64_t> fit_start, fit_end;            // half-open [start, end)
    std::optional<std::int64_t> retained_start, retained_end;  // half-open [start, end)
    std::string time_column = "timestamp";
    std::string hs_column = "hs_m";
};

/// INI-style spec file: one [name] section per dataset, key = value lines,
/// `file` repeatable, dates in ISO-8601. Relative paths resolve against the
/// spec file's directory. Overlapping fit/retained periods are rejected.
std::vector<DatasetSpec> load_dataset_specs(const std::string& path);

/// Partition by the spec's half-open periods; a record exactly on a boundary
/// belongs to the later interval. Without a fit period, everything outside
/// the retained period is fit data. Non-positive values are dropped (counted
/// through `dropped` when given).
std::pair<HsSample, HsSample> split_records(const std::vector<TimedRecord>& records,
                                            const DatasetSpec& spec,
                                            std::size_t* dropped = nullptr);

/// Everything prepare_dataset learned while loading one dataset.
struct PreparedDataset {
    HsSample fit;
    HsSample retained;
    HourlyStats hourly;
    ParseStats parse;
};

/// Parse the spec's files, aggregate NDBC records to hourly values, and split
/// into fit/retained samples.
PreparedDataset prepare_dataset(const DatasetSpec& spec);

/// Canonical CSV: header `timestamp,hs_m` (or just `hs_m` when no timestamps),
/// ISO-8601 UTC timestamps, %.17g values so doubles round-trip bit-exactly.
void write_canonical_csv(std::ostream& out, const HsSample& sample);
HsSample read_canonical_csv(std::istream& in, ParseStats* stats = nullptr);

}  // namespace wavefit
