// mbox.hpp
//
// RFC 4155 mbox ingestion.  Entries are delimited by "From " lines at
// column 0; the timestamp comes from the Date header, falling back to
// the envelope date.  Entries with no parseable date, or with a date
// outside [1990-01-01, now], are quarantined rather than dropped.

#ifndef SPAMDRIFT_MBOX_HPP
#define SPAMDRIFT_MBOX_HPP

#include <iosfwd>
#include <string>

#include "spamdrift/message.hpp"

namespace spamdrift {

/// parses an mbox byte stream.  `source` names the archive and seeds
/// message ids ("<source>#<ordinal>").  `now` bounds acceptable
/// timestamps; 0 means the current wall clock.
/// Throws std::runtime_error on a stream that is not mbox at all or
/// whose final entry is truncated mid-headers (the message names the
/// byte offset).
IngestResult parse_mbox(std::istream& in, Label default_label,
                        const std::string& source = "mbox",
                        std::int64_t now = 0);

IngestResult parse_mbox_file(const std::string& path, Label default_label,
                             std::int64_t now = 0);

/// serializes messages as a standard mbox (envelope line, headers,
/// blank line, From-stuffed body)
void write_mbox(const std::vector<Message>& messages, std::ostream& out);

}  // namespace spamdrift

#endif  // SPAMDRIFT_MBOX_HPP
