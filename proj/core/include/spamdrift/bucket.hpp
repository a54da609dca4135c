// bucket.hpp

#ifndef SPAMDRIFT_BUCKET_HPP
#define SPAMDRIFT_BUCKET_HPP

#include <vector>

#include "spamdrift/message.hpp"

namespace spamdrift {

/// groups labeled messages into ISO-week buckets, sorted ascending by
/// (year, week).  Weeks with no messages inside the covered span are
/// emitted with zero counts, so the result is gap-free.  The result
/// does not depend on the input order.
/// Throws std::invalid_argument if any message is Unlabeled (the error
/// lists the offending ids).
std::vector<WeekBucket> bucket_by_week(const std::vector<Message>& messages);

}  // namespace spamdrift

#endif  // SPAMDRIFT_BUCKET_HPP
