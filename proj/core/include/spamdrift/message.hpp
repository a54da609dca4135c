// message.hpp
//
// Domain types shared by ingestion and analysis: one labeled,
// timestamped mail message, weekly volume buckets and the per-source
// ingestion report.

#ifndef SPAMDRIFT_MESSAGE_HPP
#define SPAMDRIFT_MESSAGE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spamdrift/datetime.hpp"

namespace spamdrift {

enum class Label { Spam, Legit, Unlabeled };

const char* to_string(Label l);

/// one email message as stored in an archive
struct Message {
    std::string id;          // stable, derived from source name and position
    std::int64_t timestamp;  // UTC unix seconds
    std::vector<std::pair<std::string, std::string>> headers;  // order and duplicates kept
    std::string body;        // raw text, may contain HTML
    Label label = Label::Unlabeled;

    /// first header with the given name (case-insensitive), if any
    std::optional<std::string> header(std::string_view name) const;
};

/// the text a content analysis sees: Subject header (when present),
/// a newline, then the body
std::string message_text(const Message& m);

/// an entry that could not be turned into a valid Message
struct QuarantineRecord {
    std::string id;
    std::string reason;
};

/// result of parsing one source; messages are sorted by
/// (timestamp, id) and entries == messages.size() + quarantined.size()
struct IngestResult {
    std::vector<Message> messages;
    std::vector<QuarantineRecord> quarantined;
    std::size_t entries = 0;
};

/// weekly spam/legit volume counts
struct WeekBucket {
    WeekKey week;
    std::size_t spam_count = 0;
    std::size_t legit_count = 0;
    std::vector<std::string> message_ids;
};

/// per-source row of the ingestion report CSV
struct SourceReport {
    std::string source;
    std::size_t parsed = 0;
    std::size_t quarantined = 0;
    std::optional<WeekKey> first_week;
    std::optional<WeekKey> last_week;
};

SourceReport make_source_report(const std::string& source, const IngestResult& r);

void write_report_csv(const std::vector<SourceReport>& rows, std::ostream& out);

}  // namespace spamdrift

#endif  // SPAMDRIFT_MESSAGE_HPP
