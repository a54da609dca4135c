#include "spamdrift/bucket.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace spamdrift {

std::vector<WeekBucket> bucket_by_week(const std::vector<Message>& messages) {
    std::string unlabeled;
    int unlabeled_count = 0;
    for (const Message& m : messages) {
        if (m.label == Label::Unlabeled) {
            if (++unlabeled_count <= 8) {
                if (!unlabeled.empty()) unlabeled += ", ";
                unlabeled += m.id;
            }
        }
    }
    if (unlabeled_count > 0)
        throw std::invalid_argument("bucket_by_week: " +
                                    std::to_string(unlabeled_count) +
                                    " unlabeled message(s): " + unlabeled);

    if (messages.empty()) return {};

    struct Slot {
        std::size_t spam = 0;
        std::size_t legit = 0;
        std::vector<std::pair<std::int64_t, std::string>> ids;  // (ts, id)
    };
    std::map<WeekKey, Slot> slots;
    for (const Message& m : messages) {
        Slot& s = slots[iso_week_from_timestamp(m.timestamp)];
        if (m.label == Label::Spam)
            ++s.spam;
        else
            ++s.legit;
        s.ids.emplace_back(m.timestamp, m.id);
    }

    std::vector<WeekBucket> buckets;
    WeekKey w = slots.begin()->first;
    WeekKey last = slots.rbegin()->first;
    for (;; w = next_week(w)) {
        WeekBucket b;
        b.week = w;
        auto it = slots.find(w);
        if (it != slots.end()) {
            b.spam_count = it->second.spam;
            b.legit_count = it->second.legit;
            std::sort(it->second.ids.begin(), it->second.ids.end());
            for (auto& [ts, id] : it->second.ids)
                b.message_ids.push_back(std::move(id));
        }
        buckets.push_back(std::move(b));
        if (w == last) break;
    }
    return buckets;
}

}  // namespace spamdrift
