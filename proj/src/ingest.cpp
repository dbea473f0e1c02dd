#include "wavefit/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>

#include "wavefit/errors.hpp"

namespace wavefit {

namespace {

constexpr std::size_t kMaxDiagnostics = 20;

void diagnose(ParseStats& stats, const std::string& message) {
    ++stats.rows_skipped;
    if (stats.diagnostics.size() < kMaxDiagnostics) stats.diagnostics.push_back(message);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

bool parse_double_tok(const std::string& tok, double& out) {
    if (tok.empty()) return false;
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size();
}

bool parse_int_tok(const std::string& tok, long& out) {
    if (tok.empty()) return false;
    char* end = nullptr;
    out = std::strtol(tok.c_str(), &end, 10);
    return end == tok.c_str() + tok.size();
}

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

std::int64_t floor_div_3600(std::int64_t t) {
    return t >= 0 ? t / 3600 : (t - 3599) / 3600;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = static_cast<int>(yoe) + static_cast<int>(era) * 400 + (m <= 2 ? 1 : 0);
}

int expand_two_digit_year(long y) {
    if (y < 70) return static_cast<int>(y) + 2000;
    if (y < 100) return static_cast<int>(y) + 1900;
    return static_cast<int>(y);
}

struct NdbcHeader {
    int col_year = -1, col_month = -1, col_day = -1, col_hour = -1, col_minute = -1;
    std::vector<std::string> names;
};

NdbcHeader read_ndbc_header(std::istream& in, std::string& first_data_line) {
    std::string line;
    if (!std::getline(in, line))
        throw FileFormatError("ndbc: empty file, no header row");
    NdbcHeader h;
    h.names = split_ws(line);
    if (!h.names.empty() && !h.names[0].empty() && h.names[0][0] == '#')
        h.names[0].erase(0, 1);
    if (h.names.empty() || (h.names[0] != "YY" && h.names[0] != "YYYY"))
        throw FileFormatError("ndbc: header must start with YY or YYYY, got '" + line + "'");
    for (std::size_t i = 0; i < h.names.size(); ++i) {
        if (h.names[i] == "YY" || h.names[i] == "YYYY") h.col_year = static_cast<int>(i);
        if (h.names[i] == "MM") h.col_month = static_cast<int>(i);
        if (h.names[i] == "DD") h.col_day = static_cast<int>(i);
        if (h.names[i] == "hh") h.col_hour = static_cast<int>(i);
        if (h.names[i] == "mm") h.col_minute = static_cast<int>(i);
    }
    if (h.col_month < 0 || h.col_day < 0 || h.col_hour < 0)
        throw FileFormatError("ndbc: header missing MM/DD/hh columns");
    // optional units row is prefixed with '#'
    first_data_line.clear();
    if (std::getline(in, line) && !(trim(line).size() > 0 && trim(line)[0] == '#'))
        first_data_line = line;
    return h;
}

// Shared time-field parse for both NDBC layouts; returns false on bad fields.
bool ndbc_timestamp(const NdbcHeader& h, const std::vector<std::string>& toks,
                    std::int64_t& t) {
    long y, mo, d, hh, mi = 0;
    if (!parse_int_tok(toks[h.col_year], y) || !parse_int_tok(toks[h.col_month], mo) ||
        !parse_int_tok(toks[h.col_day], d) || !parse_int_tok(toks[h.col_hour], hh))
        return false;
    if (h.col_minute >= 0 && !parse_int_tok(toks[h.col_minute], mi)) return false;
    const int year = expand_two_digit_year(y);
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || hh < 0 || hh > 23 || mi < 0 || mi > 59)
        return false;
    t = days_from_civil(year, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 86400 +
        hh * 3600 + mi * 60;
    return true;
}

std::string dirname_of(const std::string& path) {
    const std::size_t slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

std::optional<std::int64_t> parse_spec_date(const std::string& value, const std::string& key,
                                            const std::string& section) {
    try {
        return parse_iso8601(value);
    } catch (const Error&) {
        throw ConfigError("dataset [" + section + "]: " + key + " has invalid date '" +
                          value + "'");
    }
}

void append_records(std::vector<TimedRecord>& into, std::vector<TimedRecord>&& from) {
    into.insert(into.end(), from.begin(), from.end());
}

std::vector<TimedRecord> sample_to_records(const HsSample& s) {
    std::vector<TimedRecord> out;
    out.reserve(s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i)
        out.push_back(TimedRecord{s.timestamps[i], s.values[i]});
    return out;
}

void sort_and_check_unique(std::vector<TimedRecord>& records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const TimedRecord& a, const TimedRecord& b) { return a.t < b.t; });
    for (std::size_t i = 1; i < records.size(); ++i)
        if (records[i].t == records[i - 1].t)
            throw FileFormatError("duplicate timestamp " + format_iso8601(records[i].t));
}

}  // namespace

std::int64_t days_from_civil(int year, unsigned month, unsigned day) {
    year -= month <= 2;
    const std::int64_t era = (year >= 0 ? year : year - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(year - era * 400);
    const unsigned doy = (153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::int64_t parse_iso8601(const std::string& text) {
    std::string s = text;
    if (!s.empty() && s.back() == 'Z') s.pop_back();
    const auto fail = [&]() {
        throw FileFormatError("invalid ISO-8601 timestamp '" + text + "'");
    };
    if (s.size() != 10 && s.size() != 16 && s.size() != 19) fail();
    if (!all_digits(s, 0, 4) || s[4] != '-' || !all_digits(s, 5, 7) || s[7] != '-' ||
        !all_digits(s, 8, 10))
        fail();
    const int y = std::stoi(s.substr(0, 4));
    const int mo = std::stoi(s.substr(5, 2));
    const int d = std::stoi(s.substr(8, 2));
    int hh = 0, mi = 0, ss = 0;
    if (s.size() > 10) {
        if ((s[10] != 'T' && s[10] != ' ') || !all_digits(s, 11, 13) || s[13] != ':' ||
            !all_digits(s, 14, 16))
            fail();
        hh = std::stoi(s.substr(11, 2));
        mi = std::stoi(s.substr(14, 2));
        if (s.size() == 19) {
            if (s[16] != ':' || !all_digits(s, 17, 19)) fail();
            ss = std::stoi(s.substr(17, 2));
        }
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || hh > 23 || mi > 59 || ss > 59) fail();
    return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 86400 +
           hh * 3600 + mi * 60 + ss;
}

std::string format_iso8601(std::int64_t t) {
    std::int64_t days = t / 86400;
    std::int64_t rem = t % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    int y;
    unsigned mo, d;
    civil_from_days(days, y, mo, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, mo, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

std::vector<TimedRecord> parse_ndbc_met(std::istream& in, ParseStats& stats) {
    std::string pending;
    const NdbcHeader h = read_ndbc_header(in, pending);
    int col_wvht = -1;
    for (std::size_t i = 0; i < h.names.size(); ++i)
        if (h.names[i] == "WVHT") col_wvht = static_cast<int>(i);
    if (col_wvht < 0) throw FileFormatError("ndbc-met: header has no WVHT column");

    std::vector<TimedRecord> out;
    std::string line = pending;
    bool have = !pending.empty();
    while (have || std::getline(in, line)) {
        have = false;
        if (trim(line).empty()) continue;
        ++stats.rows_read;
        const auto toks = split_ws(line);
        const std::size_t needed = static_cast<std::size_t>(
            std::max({h.col_year, h.col_month, h.col_day, h.col_hour, h.col_minute,
                      col_wvht}) +
            1);
        if (toks.size() < needed) {
            diagnose(stats, "ndbc-met: short row '" + line + "'");
            continue;
        }
        std::int64_t t;
        double hs;
        if (!ndbc_timestamp(h, toks, t)) {
            diagnose(stats, "ndbc-met: bad time fields in '" + line + "'");
            continue;
        }
        if (!parse_double_tok(toks[col_wvht], hs)) {
            diagnose(stats, "ndbc-met: bad WVHT in '" + line + "'");
            continue;
        }
        if (hs == 99.0 || hs == 999.0) {  // documented missing-value sentinels
            ++stats.missing;
            continue;
        }
        out.push_back(TimedRecord{t, hs});
    }
    return out;
}

std::vector<TimedRecord> parse_ndbc_spectral(std::istream& in, ParseStats& stats) {
    std::string pending;
    const NdbcHeader h = read_ndbc_header(in, pending);
    // time columns come first; every later token is a frequency in Hz
    std::size_t first_freq = 0;
    std::vector<double> freqs;
    for (std::size_t i = 0; i < h.names.size(); ++i) {
        double f;
        if (parse_double_tok(h.names[i], f)) {
            if (freqs.empty()) first_freq = i;
            freqs.push_back(f);
        } else if (!freqs.empty()) {
            throw FileFormatError("ndbc-spectral: non-numeric column '" + h.names[i] +
                                  "' after frequencies");
        }
    }
    if (freqs.size() < 2)
        throw FileFormatError("ndbc-spectral: need at least two frequency columns");
    for (std::size_t k = 1; k < freqs.size(); ++k)
        if (!(freqs[k] > freqs[k - 1]))
            throw FileFormatError("ndbc-spectral: frequency grid not strictly increasing");

    std::vector<TimedRecord> out;
    std::string line = pending;
    bool have = !pending.empty();
    while (have || std::getline(in, line)) {
        have = false;
        if (trim(line).empty()) continue;
        ++stats.rows_read;
        const auto toks = split_ws(line);
        if (toks.size() != first_freq + freqs.size()) {
            diagnose(stats, "ndbc-spectral: wrong column count in '" + line + "'");
            continue;
        }
        std::int64_t t;
        if (!ndbc_timestamp(h, toks, t)) {
            diagnose(stats, "ndbc-spectral: bad time fields in '" + line + "'");
            continue;
        }
        std::vector<double> S(freqs.size());
        bool ok = true, sentinel = false;
        for (std::size_t k = 0; k < freqs.size(); ++k) {
            if (!parse_double_tok(toks[first_freq + k], S[k]) || S[k] < 0) ok = false;
            if (S[k] == 999.0) sentinel = true;
        }
        if (!ok) {
            diagnose(stats, "ndbc-spectral: bad density value in '" + line + "'");
            continue;
        }
        if (sentinel) {
            ++stats.missing;
            continue;
        }
        double m0 = 0;  // trapezoid over the frequency grid
        for (std::size_t k = 1; k < freqs.size(); ++k)
            m0 += 0.5 * (S[k] + S[k - 1]) * (freqs[k] - freqs[k - 1]);
        out.push_back(TimedRecord{t, 4.0 * std::sqrt(m0)});
    }
    return out;
}

HsSample to_hourly(const std::vector<TimedRecord>& records, HourlyStats* stats) {
    HourlyStats local;
    std::map<std::int64_t, std::pair<double, int>> hours;  // hour -> (sum h^2, count)
    std::map<std::int64_t, double> singles;                // hour -> value when count == 1
    for (const auto& r : records) {
        if (!(std::isfinite(r.hs) && r.hs > 0)) {
            ++local.dropped;
            continue;
        }
        const std::int64_t hour = floor_div_3600(r.t);
        auto& slot = hours[hour];
        slot.first += r.hs * r.hs;
        slot.second += 1;
        singles[hour] = r.hs;
    }
    HsSample out;
    out.values.reserve(hours.size());
    out.timestamps.reserve(hours.size());
    for (const auto& [hour, slot] : hours) {
        // a lone record passes through untouched; k >= 2 use the energy mean
        const double hs =
            slot.second == 1 ? singles[hour] : std::sqrt(slot.first / slot.second);
        if (slot.second >= 2) ++local.combined;
        out.values.push_back(hs);
        out.timestamps.push_back(hour * 3600);
    }
    if (!hours.empty()) {
        const std::int64_t span = hours.rbegin()->first - hours.begin()->first + 1;
        local.missing_hours = static_cast<std::size_t>(span) - hours.size();
    }
    if (stats) *stats = local;
    return out;
}

std::vector<TimedRecord> parse_hindcast_csv(std::istream& in, const std::string& time_column,
                                            const std::string& hs_column, ParseStats& stats) {
    std::string line;
    if (!std::getline(in, line)) throw FileFormatError("hindcast-csv: empty file");
    const auto header = split_csv(line);
    int col_t = -1, col_hs = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == time_column) col_t = static_cast<int>(i);
        if (header[i] == hs_column) col_hs = static_cast<int>(i);
    }
    if (col_t < 0)
        throw FileFormatError("hindcast-csv: no column named '" + time_column + "'");
    if (col_hs < 0)
        throw FileFormatError("hindcast-csv: no column named '" + hs_column + "'");

    std::vector<TimedRecord> out;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++stats.rows_read;
        const auto fields = split_csv(line);
        if (fields.size() <= static_cast<std::size_t>(std::max(col_t, col_hs))) {
            diagnose(stats, "hindcast-csv: short row '" + line + "'");
            continue;
        }
        if (fields[col_hs].empty()) {
            ++stats.missing;
            continue;
        }
        std::int64_t t;
        try {
            t = parse_iso8601(fields[col_t]);
        } catch (const Error&) {
            diagnose(stats, "hindcast-csv: bad timestamp '" + fields[col_t] + "'");
            continue;
        }
        double hs;
        if (!parse_double_tok(fields[col_hs], hs)) {
            diagnose(stats, "hindcast-csv: bad value '" + fields[col_hs] + "'");
            continue;
        }
        out.push_back(TimedRecord{t, hs});
    }
    return out;
}

std::vector<DatasetSpec> load_dataset_specs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open dataset spec file '" + path + "'");
    const std::string dir = dirname_of(path);

    std::vector<DatasetSpec> specs;
    DatasetSpec current;
    bool open = false;
    const auto finalize = [&]() {
        if (!open) return;
        if (current.kind.empty())
            throw ConfigError("dataset [" + current.name + "]: missing 'kind'");
        if (current.kind != "ndbc-met" && current.kind != "ndbc-spectral" &&
            current.kind != "hindcast-csv" && current.kind != "canonical-csv")
            throw ConfigError("dataset [" + current.name + "]: unknown kind '" +
                              current.kind + "'");
        if (current.files.empty())
            throw ConfigError("dataset [" + current.name + "]: no files listed");
        if (current.fit_start.has_value() != current.fit_end.has_value())
            throw ConfigError("dataset [" + current.name +
                              "]: fit-start and fit-end must appear together");
        if (current.retained_start.has_value() != current.retained_end.has_value())
            throw ConfigError("dataset [" + current.name +
                              "]: retained-start and retained-end must appear together");
        if (current.fit_start && !(*current.fit_start < *current.fit_end))
            throw ConfigError("dataset [" + current.name + "]: empty fit period");
        if (current.retained_start && !(*current.retained_start < *current.retained_end))
            throw ConfigError("dataset [" + current.name + "]: empty retained period");
        if (current.fit_start && current.retained_start &&
            std::max(*current.fit_start, *current.retained_start) <
                std::min(*current.fit_end, *current.retained_end))
            throw ConfigError("dataset [" + current.name +
                              "]: fit and retained periods overlap");
        for (const auto& other : specs)
            if (other.name == current.name)
                throw ConfigError("duplicate dataset name [" + current.name + "]");
        specs.push_back(current);
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3)
                throw ConfigError(path + ":" + std::to_string(lineno) +
                                  ": malformed section header '" + t + "'");
            finalize();
            current = DatasetSpec{};
            current.name = trim(t.substr(1, t.size() - 2));
            open = true;
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos || !open)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 'key = value' inside a [section], got '" + t + "'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key == "kind") {
            current.kind = value;
        } else if (key == "file") {
            current.files.push_back(
                value.size() && value[0] == '/' ? value : dir + "/" + value);
        } else if (key == "fit-start") {
            current.fit_start = parse_spec_date(value, key, current.name);
        } else if (key == "fit-end") {
            current.fit_end = parse_spec_date(value, key, current.name);
        } else if (key == "retained-start") {
            current.retained_start = parse_spec_date(value, key, current.name);
        } else if (key == "retained-end") {
            current.retained_end = parse_spec_date(value, key, current.name);
        } else if (key == "time-column") {
            current.time_column = value;
        } else if (key == "hs-column") {
            current.hs_column = value;
        } else {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key +
                              "'");
        }
    }
    finalize();
    if (specs.empty()) throw ConfigError("dataset spec file '" + path + "' defines no datasets");
    return specs;
}

std::pair<HsSample, HsSample> split_records(const std::vector<TimedRecord>& records,
                                            const DatasetSpec& spec, std::size_t* dropped) {
    if (spec.fit_start && spec.retained_start &&
        std::max(*spec.fit_start, *spec.retained_start) <
            std::min(*spec.fit_end, *spec.retained_end))
        throw ConfigError("dataset [" + spec.name + "]: fit and retained periods overlap");

    std::vector<TimedRecord> sorted = records;
    sort_and_check_unique(sorted);

    HsSample fit, retained;
    fit.source_label = spec.name;
    retained.source_label = spec.name.empty() ? "retained" : spec.name + " (retained)";
    std::size_t drop_count = 0;
    for (const auto& r : sorted) {
        if (!(std::isfinite(r.hs) && r.hs > 0)) {
            ++drop_count;
            continue;
        }
        const bool in_retained = spec.retained_start && r.t >= *spec.retained_start &&
                                 r.t < *spec.retained_end;
        const bool in_fit = spec.fit_start
                                ? (r.t >= *spec.fit_start && r.t < *spec.fit_end)
                                : !in_retained;
        if (in_retained) {
            retained.values.push_back(r.hs);
            retained.timestamps.push_back(r.t);
        } else if (in_fit) {
            fit.values.push_back(r.hs);
            fit.timestamps.push_back(r.t);
        }
    }
    if (dropped) *dropped += drop_count;
    return {std::move(fit), std::move(retained)};
}

PreparedDataset prepare_dataset(const DatasetSpec& spec) {
    PreparedDataset out;
    std::vector<TimedRecord> records;
    std::vector<double> untimed;
    for (const auto& file : spec.files) {
        std::ifstream in(file);
        if (!in) throw FileFormatError("cannot open input file '" + file + "'");
        try {
            if (spec.kind == "ndbc-met") {
                append_records(records, parse_ndbc_met(in, out.parse));
            } else if (spec.kind == "ndbc-spectral") {
                append_records(records, parse_ndbc_spectral(in, out.parse));
            } else if (spec.kind == "hindcast-csv") {
                append_records(records, parse_hindcast_csv(in, spec.time_column,
                                                           spec.hs_column, out.parse));
            } else if (spec.kind == "canonical-csv") {
                const HsSample s = read_canonical_csv(in, &out.parse);
                if (s.timestamps.empty())
                    untimed.insert(untimed.end(), s.values.begin(), s.values.end());
                else
                    append_records(records, sample_to_records(s));
            } else {
                throw ConfigError("dataset [" + spec.name + "]: unknown kind '" +
                                  spec.kind + "'");
            }
        } catch (const FileFormatError& e) {
            throw FileFormatError(file + ": " + e.what());
        }
    }

    if (!untimed.empty()) {
        if (!records.empty())
            throw ConfigError("dataset [" + spec.name +
                              "]: mixes timestamped and untimed files");
        if (spec.fit_start || spec.retained_start)
            throw ConfigError("dataset [" + spec.name +
                              "]: date periods need timestamped input");
        out.fit.source_label = spec.name;
        for (double v : untimed) {
            if (std::isfinite(v) && v > 0)
                out.fit.values.push_back(v);
            else
                ++out.hourly.dropped;
        }
        return out;
    }

    if (spec.kind == "ndbc-met" || spec.kind == "ndbc-spectral") {
        const HsSample hourly = to_hourly(records, &out.hourly);
        records = sample_to_records(hourly);
    }
    std::size_t dropped = 0;
    auto [fit, retained] = split_records(records, spec, &dropped);
    out.hourly.dropped += dropped;
    out.fit = std::move(fit);
    out.retained = std::move(retained);
    return out;
}

void write_canonical_csv(std::ostream& out, const HsSample& sample) {
    const bool timed = !sample.timestamps.empty();
    if (timed && sample.timestamps.size() != sample.values.size())
        throw DomainError("canonical-csv: timestamp/value length mismatch");
    out << (timed ? "timestamp,hs_m\n" : "hs_m\n");
    char buf[40];
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", sample.values[i]);
        if (timed)
            out << format_iso8601(sample.timestamps[i]) << ',' << buf << '\n';
        else
            out << buf << '\n';
    }
}

HsSample read_canonical_csv(std::istream& in, ParseStats* stats) {
    ParseStats local;
    std::string line;
    if (!std::getline(in, line)) throw FileFormatError("canonical-csv: empty file");
    const std::string header = trim(line);
    bool timed;
    if (header == "timestamp,hs_m")
        timed = true;
    else if (header == "hs_m")
        timed = false;
    else
        throw FileFormatError("canonical-csv: unexpected header '" + header + "'");

    HsSample out;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++local.rows_read;
        const auto fields = split_csv(line);
        const std::size_t expected = timed ? 2 : 1;
        if (fields.size() != expected) {
            diagnose(local, "canonical-csv: wrong field count in '" + line + "'");
            continue;
        }
        double hs;
        if (!parse_double_tok(fields[expected - 1], hs)) {
            diagnose(local, "canonical-csv: bad value '" + fields[expected - 1] + "'");
            continue;
        }
        if (timed) {
            std::int64_t t;
            try {
                t = parse_iso8601(fields[0]);
            } catch (const Error&) {
                diagnose(local, "canonical-csv: bad timestamp '" + fields[0] + "'");
                continue;
            }
            out.timestamps.push_back(t);
        }
        out.values.push_back(hs);
    }
    if (stats) {
        stats->rows_read += local.rows_read;
        stats->rows_skipped += local.rows_skipped;
        stats->missing += local.missing;
        for (auto& d : local.diagnostics)
            if (stats->diagnostics.size() < kMaxDiagnostics)
                stats->diagnostics.push_back(std::move(d));
    }
    return out;
}

}  // namespace wavefit
