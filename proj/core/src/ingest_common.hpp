// ingest_common.hpp
//
// internals shared by the mbox and maildir parsers

#ifndef SPAMDRIFT_INGEST_COMMON_HPP
#define SPAMDRIFT_INGEST_COMMON_HPP

#include <string>
#include <utility>
#include <vector>

#include "spamdrift/message.hpp"

namespace spamdrift::internal {

std::string trim(const std::string& s);

/// header lines (raw, in order) -> unfolded (name, value) pairs
std::vector<std::pair<std::string, std::string>> parse_headers(
    const std::vector<std::string>& lines);

/// resolves the timestamp (Date header, then envelope date) and
/// validates the range; on failure fills `reason` and returns false
bool finish_message(Message& m, const std::string* envelope_date,
                    std::int64_t now, std::string& reason);

void sort_messages(std::vector<Message>& messages);

/// "From sender@host Tue Jan  8 11:22:33 2002" -> the date part
std::string after_envelope_sender(const std::string& from_line);

}  // namespace spamdrift::internal

#endif  // SPAMDRIFT_INGEST_COMMON_HPP
