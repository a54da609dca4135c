// csv.hpp
//
// Small CSV writer/reader used for every artifact the toolkit emits.
// Output is deterministic: fixed header rows, '\n' line endings,
// doubles printed with %.10g, NaN printed as an empty field.

#ifndef SPAMDRIFT_CSV_HPP
#define SPAMDRIFT_CSV_HPP

#include <cstdint>
#include <iosfwd>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace spamdrift {

/// formats a double as the CSV artifacts do (%.10g, NaN -> "")
std::string csv_double(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    CsvWriter& field(std::string_view s);
    CsvWriter& field(double v);
    CsvWriter& field(std::uint64_t v);
    CsvWriter& field(std::int64_t v);
    CsvWriter& field(int v) { return field(static_cast<std::int64_t>(v)); }
    CsvWriter& field(bool v) { return field(std::string_view(v ? "true" : "false")); }
    void end_row();

    /// writes one full row of string fields
    void row(std::initializer_list<std::string_view> fields);

private:
    std::ostream& out_;
    bool at_row_start_ = true;
};

/// parses CSV content into rows of fields (RFC 4180 quoting)
std::vector<std::vector<std::string>> read_csv(std::istream& in);

/// read_csv + header validation; returns data rows only.
/// Throws std::runtime_error when the header does not match.
std::vector<std::vector<std::string>> read_csv_expect(
    std::istream& in, std::initializer_list<std::string_view> header,
    const std::string& what);

}  // namespace spamdrift

#endif  // SPAMDRIFT_CSV_HPP
