#include "spamdrift/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace spamdrift {

namespace {

// neutral filler vocabulary; every word survives normalization
// unchanged so generated token lists are the exact expected answers
constexpr const char* kNeutralWords[] = {
    "offer",  "account", "update",  "service", "online",  "click",
    "price",  "order",   "product", "market",  "money",   "credit",
    "report", "meeting", "project", "weekly",  "status",  "review",
    "please", "thanks",  "regards", "address", "number",  "detail",
    "today",  "letter",  "friend",  "family",  "travel",  "system",
};
constexpr std::size_t kNeutralCount =
    sizeof(kNeutralWords) / sizeof(kNeutralWords[0]);

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// unbiased integer in [0, n) drawn from the engine; hand-rolled so
/// the stream is identical across standard libraries
std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t n) {
    if (n == 0) throw std::logic_error("uniform_below(0)");
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
        v = eng();
    } while (v >= limit);
    return v % n;
}

/// uniform double in [0, 1) with 53 random bits
double uniform_unit(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1p-53;
}

/// Box-Muller standard normal; avoids std::normal_distribution, whose
/// draw sequence differs between standard libraries
double standard_normal(std::mt19937_64& eng) {
    double u1 = (static_cast<double>(eng() >> 11) + 1.0) * 0x1p-53;  // (0, 1]
    double u2 = uniform_unit(eng);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

std::size_t volume_count(const VolumeSpec& v, int week_index,
                         NoiseModel noise_model, std::mt19937_64& eng) {
    double level = v.base + v.trend * static_cast<double>(week_index - 1);
    if (v.noise > 0.0) {
        if (noise_model == NoiseModel::Uniform) {
            auto amp = static_cast<std::int64_t>(std::llround(v.noise));
            if (amp > 0) {
                auto span = static_cast<std::uint64_t>(2 * amp + 1);
                level += static_cast<double>(
                    static_cast<std::int64_t>(uniform_below(eng, span)) - amp);
            }
        } else {
            level += v.noise * standard_normal(eng);
        }
    }
    auto n = std::llround(level);
    return n > 0 ? static_cast<std::size_t>(n) : 0;
}

std::string pick_words(std::mt19937_64& eng, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out.push_back(' ');
        out += kNeutralWords[uniform_below(eng, kNeutralCount)];
    }
    return out;
}

}  // namespace

void StreamSpec::validate() const {
    if (weeks < 1) throw std::invalid_argument("weeks must be at least 1");
    if (!(obfuscation_rate >= 0.0 && obfuscation_rate <= 1.0)) {
        throw std::invalid_argument("obfuscation_rate must lie in [0, 1]");
    }
    for (const VolumeSpec* v : {&spam_volume, &legit_volume}) {
        if (!(v->base >= 0.0) || !(v->noise >= 0.0) || !std::isfinite(v->base) ||
            !std::isfinite(v->trend) || !std::isfinite(v->noise)) {
            throw std::invalid_argument("volume parameters out of range");
        }
    }
    for (const TopicSpec& t : topics) {
        if (t.terms.empty()) {
            throw std::invalid_argument("topic without terms");
        }
        if (t.kind == TopicKind::Episodic && t.active_weeks.empty()) {
            throw std::invalid_argument("episodic topic needs active weeks");
        }
        if (t.kind == TopicKind::Periodic && t.period < 2) {
            throw std::invalid_argument("periodic topic needs period >= 2");
        }
        if (!(t.intensity >= 0.0) || !std::isfinite(t.intensity)) {
            throw std::invalid_argument("topic intensity out of range");
        }
    }
}

bool topic_active(const TopicSpec& t, int week_index) {
    switch (t.kind) {
        case TopicKind::Constant: return true;
        case TopicKind::Periodic: return (week_index - 1) % t.period == 0;
        case TopicKind::Episodic: return t.active_weeks.count(week_index) > 0;
    }
    return false;
}

std::string obfuscate(std::string_view text, std::uint64_t seed) {
    std::mt19937_64 eng(splitmix64(seed));
    std::string out;
    out.reserve(text.size() + text.size() / 2);

    auto is_alpha = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    };
    constexpr char kPunct[] = {'.', '|', '-', '_', '*', '\'', '`'};

    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_alpha(text[i])) {
            out.push_back(text[i]);
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_alpha(text[j])) ++j;
        std::size_t len = j - i;
        // only purely alphabetic words are touched (mixed runs like
        // "mp3" would collide with the digit-substitution fold), one
        // transform per word so punctuation runs stay single
        if (len < 2 || uniform_below(eng, 2) == 0) {
            out.append(text, i, len);
            i = j;
            continue;
        }
        std::size_t cut = 1 + uniform_below(eng, len - 1);  // interior boundary
        out.append(text, i, cut);
        switch (uniform_below(eng, 3)) {
            case 0: {  // HTML comment mid-word
                out += "<!--";
                out += pick_words(eng, 1);
                out += "-->";
                break;
            }
            case 1: {  // bogus tag; 4+ letters, never a whitespace tag
                out.push_back('<');
                for (int k = 0; k < 4; ++k) {
                    out.push_back(
                        static_cast<char>('a' + uniform_below(eng, 26)));
                }
                out.push_back('>');
                break;
            }
            default: {  // one spurious punctuation mark between letters
                out.push_back(kPunct[uniform_below(
                    eng, sizeof(kPunct) / sizeof(kPunct[0]))]);
                break;
            }
        }
        out.append(text, i + cut, len - cut);
        i = j;
    }
    return out;
}

std::vector<Message> generate(const StreamSpec& spec) {
    spec.validate();
    std::vector<Message> all;

    WeekKey week = spec.start;
    for (int w = 1; w <= spec.weeks; ++w, week = next_week(week)) {
        std::mt19937_64 eng(
            splitmix64(spec.seed ^ (static_cast<std::uint64_t>(w) *
                                    0xA24BAED4963EE407ull)));
        std::size_t spam_n =
            volume_count(spec.spam_volume, w, spec.noise_model, eng);
        std::size_t legit_n =
            volume_count(spec.legit_volume, w, spec.noise_model, eng);
        std::int64_t week_start = week_start_timestamp(week);

        // active topics claim disjoint blocks of the week's spam in
        // declaration order (one topic per message, like real
        // campaigns), so expected per-term document counts are exact;
        // a block overflowing the week's volume is truncated
        std::vector<std::pair<std::size_t, std::size_t>> blocks(
            spec.topics.size(), {0, 0});
        std::size_t next_free = 0;
        for (std::size_t t = 0; t < spec.topics.size(); ++t) {
            if (!topic_active(spec.topics[t], w)) continue;
            auto k = static_cast<std::size_t>(
                std::llround(spec.topics[t].intensity));
            std::size_t lo = std::min(next_free, spam_n);
            std::size_t hi = std::min(lo + k, spam_n);
            blocks[t] = {lo, hi};
            next_free = hi;
        }

        char id[48];
        for (std::size_t i = 0; i < spam_n + legit_n; ++i) {
            bool spam = i < spam_n;
            std::size_t ordinal = spam ? i : i - spam_n;
            Message m;
            m.label = spam ? Label::Spam : Label::Legit;
            m.timestamp =
                week_start + static_cast<std::int64_t>(uniform_below(
                                 eng, 7 * 24 * 3600));
            std::snprintf(id, sizeof(id), "synth-%s#w%03d-%05zu",
                          spam ? "spam" : "legit", w, ordinal);
            m.id = id;

            // the subject is drawn before the body so the obfuscation
            // draws at the end leave every other draw unchanged
            std::string subject = pick_words(eng, 2);
            std::string body = pick_words(eng, 8 + uniform_below(eng, 13));
            if (spam) {
                for (std::size_t t = 0; t < spec.topics.size(); ++t) {
                    if (ordinal < blocks[t].first || ordinal >= blocks[t].second) {
                        continue;
                    }
                    for (const std::string& term : spec.topics[t].terms) {
                        body.push_back(' ');
                        body += term;
                    }
                }
                // both draws happen unconditionally so changing the
                // rate never shifts any other draw in the week
                double toss = uniform_unit(eng);
                std::uint64_t obf_seed = eng();
                if (toss < spec.obfuscation_rate) {
                    body = obfuscate(body, obf_seed);
                }
            }
            m.body = body;
            m.headers = {
                {"From", std::string(spam ? "sender" : "colleague") +
                             "@example.invalid"},
                {"To", "user@example.invalid"},
                {"Subject", subject},
                {"Date", format_rfc2822(m.timestamp)},
            };
            all.push_back(std::move(m));
        }
    }

    std::sort(all.begin(), all.end(), [](const Message& a, const Message& b) {
        if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
        return a.id < b.id;
    });
    return all;
}

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

VolumeSpec parse_volume(const std::string& value, std::size_t lineno) {
    std::istringstream vs(value);
    VolumeSpec v;
    if (!(vs >> v.base)) {
        throw std::runtime_error("bad volume at line " + std::to_string(lineno));
    }
    vs >> v.trend >> v.noise;  // trend and noise are optional
    return v;
}

TopicSpec parse_topic(const std::string& value, std::size_t lineno) {
    std::istringstream ts(value);
    std::string kind;
    ts >> kind;
    TopicSpec t;
    if (kind == "constant") {
        t.kind = TopicKind::Constant;
    } else if (kind == "periodic") {
        t.kind = TopicKind::Periodic;
    } else if (kind == "episodic") {
        t.kind = TopicKind::Episodic;
    } else {
        throw std::runtime_error("unknown topic kind '" + kind + "' at line " +
                                 std::to_string(lineno));
    }
    std::string pair;
    while (ts >> pair) {
        auto eq = pair.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("bad topic attribute '" + pair +
                                     "' at line " + std::to_string(lineno));
        }
        std::string key = pair.substr(0, eq);
        std::string val = pair.substr(eq + 1);
        try {
            if (key == "terms") {
                t.terms = split_commas(val);
            } else if (key == "intensity") {
                t.intensity = std::stod(val);
            } else if (key == "period") {
                t.period = std::stoi(val);
            } else if (key == "weeks") {
                for (const std::string& wstr : split_commas(val)) {
                    t.active_weeks.insert(std::stoi(wstr));
                }
            } else {
                throw std::runtime_error("unknown topic attribute '" + key +
                                         "' at line " + std::to_string(lineno));
            }
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception&) {
            throw std::runtime_error("bad topic value '" + pair + "' at line " +
                                     std::to_string(lineno));
        }
    }
    return t;
}

WeekKey parse_start(const std::string& value, std::size_t lineno) {
    int year = 0, wk = 0;
    char dash = 0, wch = 0;
    std::istringstream ss(value);
    if (ss >> year >> dash >> wch >> wk && dash == '-' &&
        (wch == 'W' || wch == 'w') && wk >= 1 && wk <= 53) {
        return WeekKey{year, wk};
    }
    throw std::runtime_error("bad start week (want YYYY-Www) at line " +
                             std::to_string(lineno));
}

}  // namespace

StreamSpec load_stream_spec(std::istream& in) {
    StreamSpec spec;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        std::string entry = line.substr(b, e - b + 1);
        auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("expected key = value at line " +
                                     std::to_string(lineno));
        }
        std::string key = entry.substr(0, eq);
        std::string value = entry.substr(eq + 1);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) {
            key.pop_back();
        }
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t')) {
            value.erase(value.begin());
        }
        try {
            if (key == "seed") {
                spec.seed = std::stoull(value);
            } else if (key == "weeks") {
                spec.weeks = std::stoi(value);
            } else if (key == "start") {
                spec.start = parse_start(value, lineno);
            } else if (key == "spam_volume") {
                spec.spam_volume = parse_volume(value, lineno);
            } else if (key == "legit_volume") {
                spec.legit_volume = parse_volume(value, lineno);
            } else if (key == "noise_model") {
                if (value == "uniform") {
                    spec.noise_model = NoiseModel::Uniform;
                } else if (value == "gaussian") {
                    spec.noise_model = NoiseModel::Gaussian;
                } else {
                    throw std::runtime_error("unknown noise_model '" + value +
                                             "' at line " + std::to_string(lineno));
                }
            } else if (key == "obfuscation_rate") {
                spec.obfuscation_rate = std::stod(value);
            } else if (key == "topic") {
                spec.topics.push_back(parse_topic(value, lineno));
            } else {
                throw std::runtime_error("unknown key '" + key + "' at line " +
                                         std::to_string(lineno));
            }
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception&) {
            throw std::runtime_error("bad value for '" + key + "' at line " +
                                     std::to_string(lineno));
        }
    }
    spec.validate();
    return spec;
}

}  // namespace spamdrift
