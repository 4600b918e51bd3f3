#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pluripot {

// Shortest decimal form that round-trips the double exactly (to_chars).
std::string format_double(double x);

// RFC-4180-style table: mandatory header row, CRLF line endings, fields
// quoted only when they contain a comma, quote or line break.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> fields); // arity must match the header

    std::string to_string() const;
    void write(const std::string& path) const;

    std::size_t rows() const { return rows_.size(); }
    std::size_t columns() const { return header_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace pluripot
