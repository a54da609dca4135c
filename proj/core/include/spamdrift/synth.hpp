// synth.hpp
//
// Deterministic synthetic mail-stream generator: weekly spam/legit
// volumes with trend and noise, constant/periodic/episodic topics
// superimposed on a neutral vocabulary, and an obfuscating transform
// that the normalize stage provably undoes.  Everything is a pure
// function of the spec (seed included), so analyses downstream have
// exact expected answers.

#ifndef SPAMDRIFT_SYNTH_HPP
#define SPAMDRIFT_SYNTH_HPP

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "spamdrift/message.hpp"

namespace spamdrift {

enum class NoiseModel {
    Uniform,   // integer offset uniform in [-amplitude, +amplitude]
    Gaussian,  // rounded normal with sd = amplitude
};

struct VolumeSpec {
    double base = 0.0;   // messages per week at week 1
    double trend = 0.0;  // added per elapsed week
    double noise = 0.0;  // amplitude; 0 makes counts exact
};

enum class TopicKind { Constant, Periodic, Episodic };

struct TopicSpec {
    TopicKind kind = TopicKind::Constant;
    std::vector<std::string> terms;
    /// term-bearing spam messages per active week
    double intensity = 0.0;
    /// Episodic only: 1-based stream week indices
    std::set<int> active_weeks;
    /// Periodic only: active every period-th week starting at week 1
    int period = 0;
};

struct StreamSpec {
    std::uint64_t seed = 1;
    int weeks = 52;
    /// calendar week of stream week 1
    WeekKey start{2002, 1};
    VolumeSpec spam_volume;
    VolumeSpec legit_volume;
    NoiseModel noise_model = NoiseModel::Uniform;
    std::vector<TopicSpec> topics;
    /// fraction of spam messages passed through obfuscate()
    double obfuscation_rate = 0.0;

    /// throws std::invalid_argument on violated invariants
    void validate() const;
};

/// whether a topic fires in the given 1-based stream week
bool topic_active(const TopicSpec& t, int week_index);

/// builds the stream: labeled, timestamped messages sorted by
/// (timestamp, id).  Deterministic given the spec; weeks draw from
/// independently derived sub-seeds, so any per-week evaluation order
/// yields the same stream.  Within a week, active topics claim
/// disjoint blocks of the spam volume in declaration order — each
/// spam message carries at most one topic — and a block that would
/// overflow the week is truncated.
std::vector<Message> generate(const StreamSpec& spec);

/// seeded application of the three content-obscuring tricks — mid-word
/// HTML comments, bogus tags, spurious punctuation — such that
/// tokenize(obfuscated) == tokenize(original) after normalization
std::string obfuscate(std::string_view text, std::uint64_t seed);

/// plain-text spec grammar (key = value per line, '#' comments):
///   seed = 42
///   weeks = 52
///   start = 2002-W01
///   spam_volume = 146 0 0        # base trend noise
///   legit_volume = 12 0 0
///   noise_model = uniform        # or gaussian
///   obfuscation_rate = 0.25
///   topic = episodic weeks=18,19 intensity=10 terms=nigeria,lagos
///   topic = periodic period=52 intensity=20 terms=christmas
///   topic = constant intensity=30 terms=mortgage
StreamSpec load_stream_spec(std::istream& in);

}  // namespace spamdrift

#endif  // SPAMDRIFT_SYNTH_HPP
