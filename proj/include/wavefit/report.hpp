#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace wavefit {

enum class OutputFormat { csv, jsonl };

OutputFormat format_from_name(const std::string& name);
const char* format_name(OutputFormat format);
const char* format_extension(OutputFormat format);

// One output cell. monostate renders as an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, std::string, double, std::int64_t>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;  // every row has columns.size() cells
};

// Serializes the table. CSV quotes per RFC 4180; numbers use the shortest
// representation that round-trips. With timestamp_header the first line
// carries the generation instant: `# generated <ISO>` for CSV, a
// {"generated": "<ISO>"} object line for JSONL.
std::string render_table(const Table& table, OutputFormat format,
                         bool timestamp_header);

// Writes to a temp file beside the target then renames, so readers never see
// a partial table. Creates missing parent directories.
void write_file_atomic(const std::string& path, const std::string& content);

void write_table(const std::string& path, const Table& table,
                 OutputFormat format, bool timestamp_header);

}  // namespace wavefit
