// maildir.hpp

#ifndef SPAMDRIFT_MAILDIR_HPP
#define SPAMDRIFT_MAILDIR_HPP

#include <string>

#include "spamdrift/message.hpp"

namespace spamdrift {

/// parses a maildir rooted at `root` (files under cur/ and new/).
/// Throws std::runtime_error when neither subdirectory exists.
/// Unreadable or undatable files become quarantine records.
IngestResult parse_maildir(const std::string& root, Label default_label,
                           std::int64_t now = 0);

}  // namespace spamdrift

#endif  // SPAMDRIFT_MAILDIR_HPP
