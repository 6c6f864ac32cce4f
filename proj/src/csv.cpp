#include "cohsim/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include "cohsim/errors.hpp"

namespace cohsim::io {

std::string format_number(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    if (ec != std::errc{}) throw std::invalid_argument("format_number: conversion failed");
    return std::string(buf, end);
}

std::string emit_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.columns.size()) {
            throw std::invalid_argument("emit_csv: row " + std::to_string(r) + " has wrong cell count");
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!std::isfinite(row[c])) {
                throw std::invalid_argument("emit_csv: non-finite value at row " + std::to_string(r) +
                                            ", column " + std::to_string(c));
            }
            if (c) out += ',';
            out += format_number(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string emit_json(const Table& table) {
    std::string out = "{\n  \"columns\": [";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ", ";
        out += '"';
        out += table.columns[c];
        out += '"';
    }
    out += "],\n  \"rows\": [\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.columns.size()) {
            throw std::invalid_argument("emit_json: row " + std::to_string(r) + " has wrong cell count");
        }
        out += "    [";
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!std::isfinite(row[c])) {
                throw std::invalid_argument("emit_json: non-finite value at row " + std::to_string(r) +
                                            ", column " + std::to_string(c));
            }
            if (c) out += ", ";
            out += format_number(row[c]);
        }
        out += (r + 1 < table.rows.size()) ? "],\n" : "]\n";
    }
    out += "  ]\n}\n";
    return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return bytes;
}

}  // namespace cohsim::io
