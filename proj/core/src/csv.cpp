#include "pluripot/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "pluripot/errors.hpp"

namespace pluripot {

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) throw Error("format_double: conversion failed");
    return {buf, ptr};
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw ConfigError("CsvTable: header must be nonempty");
}

void CsvTable::add_row(std::vector<std::string> fields) {
    if (fields.size() != header_.size())
        throw ConfigError("CsvTable: row arity does not match the header");
    rows_.push_back(std::move(fields));
}

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos;
}

void append_field(std::string& out, const std::string& s) {
    if (!needs_quoting(s)) {
        out += s;
        return;
    }
    out += '"';
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

void append_record(std::string& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        append_field(out, fields[i]);
    }
    out += "\r\n";
}

} // namespace

std::string CsvTable::to_string() const {
    std::string out;
    append_record(out, header_);
    for (const auto& r : rows_) append_record(out, r);
    return out;
}

void CsvTable::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("CsvTable: cannot open " + path);
    const std::string bytes = to_string();
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("CsvTable: write failed for " + path);
}

} // namespace pluripot
