#include "spamdrift/maildir.hpp"

#include <algorithm>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "ingest_common.hpp"

namespace spamdrift {

namespace fs = std::filesystem;

namespace {

// one RFC 2822 message file: headers, blank line, body
bool read_message_file(const fs::path& path, Message& m) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::vector<std::string> header_lines;
    std::string body;
    std::string line;
    bool in_body = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!in_body) {
            if (line.empty()) {
                in_body = true;
            } else {
                header_lines.push_back(line);
            }
        } else {
            body += line;
            body += '\n';
        }
    }
    if (in.bad()) return false;
    m.headers = internal::parse_headers(header_lines);
    if (!body.empty() && body.back() == '\n') body.pop_back();
    m.body = std::move(body);
    return true;
}

}  // namespace

IngestResult parse_maildir(const std::string& root, Label default_label,
                           std::int64_t now) {
    if (now == 0) now = static_cast<std::int64_t>(std::time(nullptr));

    fs::path rootp(root);
    fs::path cur = rootp / "cur";
    fs::path newd = rootp / "new";
    if (!fs::is_directory(cur) && !fs::is_directory(newd))
        throw std::runtime_error(root +
                                 ": not a maildir (no cur/ or new/ subdirectory)");

    std::vector<fs::path> files;
    for (const fs::path& sub : {cur, newd}) {
        if (!fs::is_directory(sub)) continue;
        for (const auto& entry : fs::directory_iterator(sub))
            if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    IngestResult result;
    for (const fs::path& f : files) {
        ++result.entries;
        std::string id =
            (fs::path(rootp.filename()) / f.parent_path().filename() / f.filename())
                .string();
        Message m;
        if (!read_message_file(f, m)) {
            result.quarantined.push_back(QuarantineRecord{id, "unreadable file"});
            continue;
        }
        m.id = id;
        m.label = default_label;
        std::string reason;
        if (!internal::finish_message(m, nullptr, now, reason)) {
            result.quarantined.push_back(QuarantineRecord{id, reason});
            continue;
        }
        result.messages.push_back(std::move(m));
    }

    internal::sort_messages(result.messages);
    return result;
}

}  // namespace spamdrift
