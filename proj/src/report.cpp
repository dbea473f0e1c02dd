#include "wavefit/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wavefit/errors.hpp"
#include "wavefit/ingest.hpp"

namespace wavefit {
namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest decimal representation that round-trips to the same double.
std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return nlohmann::json(v).dump();
}

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string csv_escape(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out;
    out.reserve(s.size() + 2);
    out.push_back('"');
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string csv_cell(const Cell& cell) {
    if (std::holds_alternative<std::monostate>(cell)) return "";
    if (const auto* s = std::get_if<std::string>(&cell)) return csv_escape(*s);
    if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
    return std::to_string(std::get<std::int64_t>(cell));
}

ordered_json json_cell(const Cell& cell) {
    if (std::holds_alternative<std::monostate>(cell)) return nullptr;
    if (const auto* s = std::get_if<std::string>(&cell)) return *s;
    if (const auto* d = std::get_if<double>(&cell)) {
        // JSON has no non-finite literals; null marks them explicitly.
        if (!std::isfinite(*d)) return nullptr;
        return *d;
    }
    return std::get<std::int64_t>(cell);
}

std::string generated_stamp() { return format_iso8601(std::time(nullptr)); }

}  // namespace

OutputFormat format_from_name(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "jsonl") return OutputFormat::jsonl;
    throw ConfigError("unknown output format: '" + name + "' (expected csv or jsonl)");
}

const char* format_name(OutputFormat format) {
    return format == OutputFormat::csv ? "csv" : "jsonl";
}

const char* format_extension(OutputFormat format) { return format_name(format); }

std::string render_table(const Table& table, OutputFormat format,
                         bool timestamp_header) {
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw DomainError("table row width does not match column count");
    }
    std::ostringstream out;
    if (format == OutputFormat::csv) {
        if (timestamp_header) out << "# generated " << generated_stamp() << "\n";
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out << ',';
            out << csv_escape(table.columns[c]);
        }
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out << ',';
                out << csv_cell(row[c]);
            }
            out << '\n';
        }
    } else {
        if (timestamp_header) {
            ordered_json stamp;
            stamp["generated"] = generated_stamp();
            out << stamp.dump() << '\n';
        }
        for (const auto& row : table.rows) {
            ordered_json obj;
            for (std::size_t c = 0; c < row.size(); ++c)
                obj[table.columns[c]] = json_cell(row[c]);
            out << obj.dump() << '\n';
        }
    }
    return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    std::error_code ec;
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path(), ec);
        if (ec)
            throw FileFormatError("cannot create output directory: " +
                                  target.parent_path().string());
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FileFormatError("cannot write file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw FileFormatError("cannot write file: " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec) throw FileFormatError("cannot replace file: " + path);
}

void write_table(const std::string& path, const Table& table,
                 OutputFormat format, bool timestamp_header) {
    write_file_atomic(path, render_table(table, format, timestamp_header));
}

}  // namespace wavefit
