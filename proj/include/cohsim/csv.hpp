#pragma once

#include <string>
#include <vector>

namespace cohsim::io {

// Locale-independent number -> text with 9 significant digits ('.' decimal,
// shortest general form). All emitted files go through this, so identical
// data yields identical bytes.
std::string format_number(double v);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // each row has columns.size() cells
};

// Header plus rows, '\n' line endings. Throws std::invalid_argument naming
// the offending row/column for non-finite cells.
std::string emit_csv(const Table& table);

// Same table as a JSON document {"columns": [...], "rows": [[...]]}.
std::string emit_json(const Table& table);

std::uint64_t fnv1a64(const std::string& bytes);

void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

}  // namespace cohsim::io
