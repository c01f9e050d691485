// record.hpp — Flat tabular records and the deterministic CSV/JSON writers
// used by the batch CLI.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "weakdwell/errors.hpp"

namespace weakdwell {

using FieldValue = std::variant<double, std::string>;
using Row = std::vector<FieldValue>;

struct Table {
    std::vector<std::string> columns;
    std::vector<Row> rows;
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

// 17 significant digits: round-trip exact for IEEE doubles.
inline std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_value(const FieldValue& v) {
    if (std::holds_alternative<double>(v)) return format_double(std::get<double>(v));
    return std::get<std::string>(v);
}

inline void check_homogeneous(const Table& table) {
    for (const Row& row : table.rows)
        if (row.size() != table.columns.size())
            throw DomainError("table rows must match the column count");
}

inline std::string render_csv(const Table& table, const Metadata& metadata = {}) {
    check_homogeneous(table);
    std::ostringstream out;
    for (const auto& [key, value] : metadata) out << "# " << key << ": " << value << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << "\n";
    for (const Row& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_value(row[c]);
        out << "\n";
    }
    return out.str();
}

// Single-row tables serialize as one flat object, multi-row ones as an array
// of flat objects. Metadata, when present, wraps the data in
// {"metadata": ..., "data": ...}.
inline std::string render_json(const Table& table, const Metadata& metadata = {}) {
    check_homogeneous(table);
    auto row_to_json = [&](const Row& row) {
        nlohmann::ordered_json obj;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (std::holds_alternative<double>(row[c]))
                obj[table.columns[c]] = std::get<double>(row[c]);
            else
                obj[table.columns[c]] = std::get<std::string>(row[c]);
        }
        return obj;
    };
    nlohmann::ordered_json data;
    if (table.rows.size() == 1) {
        data = row_to_json(table.rows.front());
    } else {
        data = nlohmann::ordered_json::array();
        for (const Row& row : table.rows) data.push_back(row_to_json(row));
    }
    if (metadata.empty()) return data.dump(2) + "\n";
    nlohmann::ordered_json wrapped;
    auto& meta = wrapped["metadata"];
    for (const auto& [key, value] : metadata) meta[key] = value;
    wrapped["data"] = std::move(data);
    return wrapped.dump(2) + "\n";
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file: " + path);
    out << contents;
    if (!out) throw IoError("failed writing output file: " + path);
}

inline void emit_csv(const Table& table, const std::string& path, const Metadata& metadata = {}) {
    write_file(path, render_csv(table, metadata));
}

inline void emit_json(const Table& table, const std::string& path, const Metadata& metadata = {}) {
    write_file(path, render_json(table, metadata));
}

}  // namespace weakdwell
