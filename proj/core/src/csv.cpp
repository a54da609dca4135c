#include "spamdrift/csv.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace spamdrift {

std::string csv_double(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

namespace {

bool needs_quoting(std::string_view s) {
    return s.find_first_of(",\"\n\r") != std::string_view::npos;
}

}  // namespace

CsvWriter& CsvWriter::field(std::string_view s) {
    if (!at_row_start_) out_ << ',';
    at_row_start_ = false;
    if (needs_quoting(s)) {
        out_ << '"';
        for (char c : s) {
            if (c == '"') out_ << '"';
            out_ << c;
        }
        out_ << '"';
    } else {
        out_ << s;
    }
    return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(csv_double(v)); }

CsvWriter& CsvWriter::field(std::uint64_t v) { return field(std::to_string(v)); }

CsvWriter& CsvWriter::field(std::int64_t v) { return field(std::to_string(v)); }

void CsvWriter::end_row() {
    out_ << '\n';
    at_row_start_ = true;
}

void CsvWriter::row(std::initializer_list<std::string_view> fields) {
    for (std::string_view f : fields) field(f);
    end_row();
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    bool cell_started = false;
    char c;
    auto end_cell = [&] {
        row.push_back(std::move(cell));
        cell.clear();
        cell_started = false;
    };
    auto end_line = [&] {
        if (cell_started || !cell.empty() || !row.empty()) {
            end_cell();
            rows.push_back(std::move(row));
            row.clear();
        }
    };
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    cell += '"';
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                cell_started = true;
                break;
            case ',':
                end_cell();
                cell_started = true;  // a field follows the comma
                break;
            case '\r':
                break;
            case '\n':
                end_line();
                break;
            default:
                cell += c;
                cell_started = true;
        }
    }
    end_line();
    return rows;
}

std::vector<std::vector<std::string>> read_csv_expect(
    std::istream& in, std::initializer_list<std::string_view> header,
    const std::string& what) {
    std::vector<std::vector<std::string>> rows = read_csv(in);
    if (rows.empty()) throw std::runtime_error(what + ": empty CSV");
    const std::vector<std::string>& h = rows.front();
    bool ok = h.size() == header.size();
    if (ok) {
        std::size_t i = 0;
        for (std::string_view want : header)
            if (h[i++] != want) {
                ok = false;
                break;
            }
    }
    if (!ok) throw std::runtime_error(what + ": unexpected CSV header");
    rows.erase(rows.begin());
    return rows;
}

}  // namespace spamdrift
