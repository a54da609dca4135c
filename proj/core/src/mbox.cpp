#include "spamdrift/mbox.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ingest_common.hpp"
#include "spamdrift/csv.hpp"

namespace spamdrift {

const char* to_string(Label l) {
    switch (l) {
        case Label::Spam: return "spam";
        case Label::Legit: return "legit";
        default: return "unlabeled";
    }
}

std::optional<std::string> Message::header(std::string_view name) const {
    for (const auto& [n, v] : headers) {
        if (n.size() != name.size()) continue;
        bool eq = true;
        for (std::size_t i = 0; i < n.size(); ++i) {
            if (std::tolower(static_cast<unsigned char>(n[i])) !=
                std::tolower(static_cast<unsigned char>(name[i]))) {
                eq = false;
                break;
            }
        }
        if (eq) return v;
    }
    return std::nullopt;
}

std::string message_text(const Message& m) {
    std::string text;
    if (std::optional<std::string> subject = m.header("Subject")) {
        text = *subject;
        text.push_back('\n');
    }
    text += m.body;
    return text;
}

SourceReport make_source_report(const std::string& source,
                                const IngestResult& r) {
    SourceReport rep;
    rep.source = source;
    rep.parsed = r.messages.size();
    rep.quarantined = r.quarantined.size();
    for (const Message& m : r.messages) {
        WeekKey w = iso_week_from_timestamp(m.timestamp);
        if (!rep.first_week || w < *rep.first_week) rep.first_week = w;
        if (!rep.last_week || *rep.last_week < w) rep.last_week = w;
    }
    return rep;
}

void write_report_csv(const std::vector<SourceReport>& rows,
                      std::ostream& out) {
    CsvWriter csv(out);
    csv.row({"source", "parsed", "quarantined", "first_week", "last_week"});
    for (const SourceReport& r : rows) {
        csv.field(r.source);
        csv.field(r.parsed);
        csv.field(r.quarantined);
        csv.field(r.first_week ? r.first_week->label() : "");
        csv.field(r.last_week ? r.last_week->label() : "");
        csv.end_row();
    }
}

namespace internal {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<std::pair<std::string, std::string>> parse_headers(
    const std::vector<std::string>& lines) {
    std::vector<std::pair<std::string, std::string>> headers;
    for (const std::string& line : lines) {
        if (!line.empty() && (line[0] == ' ' || line[0] == '\t')) {
            if (!headers.empty()) headers.back().second += " " + trim(line);
            continue;
        }
        std::size_t colon = line.find(':');
        if (colon == std::string::npos) continue;  // junk line, skip
        std::string name = line.substr(0, colon);
        std::string value = trim(line.substr(colon + 1));
        headers.emplace_back(std::move(name), std::move(value));
    }
    return headers;
}

bool finish_message(Message& m, const std::string* envelope_date,
                    std::int64_t now, std::string& reason) {
    std::optional<std::int64_t> ts;
    if (std::optional<std::string> date = m.header("Date"))
        ts = parse_rfc2822_date(*date);
    if (!ts && envelope_date) ts = parse_asctime_date(*envelope_date);
    if (!ts) {
        reason = "no parseable date";
        return false;
    }
    if (*ts < kMinTimestamp || *ts > now) {
        reason = "timestamp out of range";
        return false;
    }
    m.timestamp = *ts;
    return true;
}

void sort_messages(std::vector<Message>& messages) {
    std::sort(messages.begin(), messages.end(),
              [](const Message& a, const Message& b) {
                  if (a.timestamp != b.timestamp)
                      return a.timestamp < b.timestamp;
                  return a.id < b.id;
              });
}

std::string after_envelope_sender(const std::string& from_line) {
    std::size_t i = 5;  // past "From "
    while (i < from_line.size() && from_line[i] == ' ') ++i;
    while (i < from_line.size() && from_line[i] != ' ') ++i;  // sender token
    while (i < from_line.size() && from_line[i] == ' ') ++i;
    return from_line.substr(i);
}

}  // namespace internal

namespace {

bool starts_with_from(const std::string& line) {
    return line.rfind("From ", 0) == 0;
}

std::string make_id(const std::string& source, std::size_t ordinal) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%05zu", ordinal);
    return source + buf;
}

}  // namespace

IngestResult parse_mbox(std::istream& in, Label default_label,
                        const std::string& source, std::int64_t now) {
    if (now == 0) now = static_cast<std::int64_t>(std::time(nullptr));

    IngestResult result;
    std::string line;
    std::int64_t offset = 0;        // byte offset of the next line
    std::int64_t entry_offset = 0;  // offset of the current entry's From line
    std::size_t ordinal = 0;

    enum class State { Prologue, Headers, Body };
    State state = State::Prologue;

    Message current;
    std::string envelope;
    std::vector<std::string> header_lines;
    std::string body;

    auto flush_entry = [&] {
        current.id = make_id(source, ordinal++);
        current.label = default_label;
        current.headers = internal::parse_headers(header_lines);
        // drop the trailing blank separator line, if present
        if (!body.empty() && body.back() == '\n') body.pop_back();
        current.body = std::move(body);
        std::string reason;
        ++result.entries;
        if (internal::finish_message(current, &envelope, now, reason)) {
            result.messages.push_back(std::move(current));
        } else {
            result.quarantined.push_back(QuarantineRecord{current.id, reason});
        }
        current = Message{};
        header_lines.clear();
        body.clear();
    };

    while (std::getline(in, line)) {
        std::int64_t line_offset = offset;
        offset += static_cast<std::int64_t>(line.size()) + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        switch (state) {
            case State::Prologue:
                if (line.empty()) continue;
                if (!starts_with_from(line))
                    throw std::runtime_error(
                        source + ": not an mbox stream (first line is not a "
                                 "\"From \" delimiter)");
                entry_offset = line_offset;
                envelope = internal::after_envelope_sender(line);
                state = State::Headers;
                break;
            case State::Headers:
                if (line.empty()) {
                    state = State::Body;
                } else {
                    header_lines.push_back(line);
                }
                break;
            case State::Body:
                if (starts_with_from(line)) {
                    flush_entry();
                    entry_offset = line_offset;
                    envelope = internal::after_envelope_sender(line);
                    state = State::Headers;
                } else {
                    // undo From-stuffing
                    std::size_t q = line.find_first_not_of('>');
                    if (q != std::string::npos && q > 0 &&
                        line.compare(q, 5, "From ") == 0)
                        line.erase(0, 1);
                    body += line;
                    body += '\n';
                }
                break;
        }
    }

    if (state == State::Headers)
        throw std::runtime_error(source +
                                 ": truncated mbox entry at byte offset " +
                                 std::to_string(entry_offset));
    if (state == State::Body) flush_entry();

    internal::sort_messages(result.messages);
    return result;
}

IngestResult parse_mbox_file(const std::string& path, Label default_label,
                             std::int64_t now) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open mbox file: " + path);
    return parse_mbox(in, default_label, path, now);
}

void write_mbox(const std::vector<Message>& messages, std::ostream& out) {
    for (const Message& m : messages) {
        std::string sender = "nobody@example.invalid";
        if (std::optional<std::string> f = m.header("From")) {
            std::istringstream ss(*f);
            std::string tok;
            while (ss >> tok)
                if (tok.find('@') != std::string::npos) sender = tok;
        }
        out << "From " << sender << ' ' << format_asctime(m.timestamp) << '\n';
        for (const auto& [n, v] : m.headers) out << n << ": " << v << '\n';
        out << '\n';
        std::istringstream body(m.body);
        std::string line;
        while (std::getline(body, line)) {
            std::size_t q = line.find_first_not_of('>');
            if (q != std::string::npos && line.compare(q, 5, "From ") == 0)
                out << '>';
            out << line << '\n';
        }
        out << '\n';
    }
}

}  // namespace spamdrift
