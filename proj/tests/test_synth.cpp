#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "spamdrift/normalize.hpp"
#include "spamdrift/synth.hpp"

using namespace spamdrift;

namespace {

constexpr std::int64_t kW1 = 1009756800;  // 2002-W01 opens here
constexpr std::int64_t kWeekSecs = 604800;

StreamSpec flat_spec(int weeks, double spam, double legit) {
    StreamSpec s;
    s.seed = 42;
    s.weeks = weeks;
    s.spam_volume = {spam, 0.0, 0.0};
    s.legit_volume = {legit, 0.0, 0.0};
    return s;
}

std::map<WeekKey, std::pair<std::size_t, std::size_t>> weekly_volumes(
    const std::vector<Message>& ms) {
    std::map<WeekKey, std::pair<std::size_t, std::size_t>> v;
    for (const Message& m : ms) {
        auto& [spam, legit] = v[iso_week_from_timestamp(m.timestamp)];
        (m.label == Label::Spam ? spam : legit) += 1;
    }
    return v;
}

bool body_has_token(const Message& m, const std::string& term) {
    auto toks = tokenize(message_text(m));
    return std::find(toks.begin(), toks.end(), term) != toks.end();
}

}  // namespace

TEST_CASE("generation is deterministic") {
    StreamSpec spec = flat_spec(4, 20, 5);
    spec.obfuscation_rate = 0.5;
    TopicSpec topic;
    topic.kind = TopicKind::Episodic;
    topic.terms = {"nigeria", "lagos"};
    topic.intensity = 6;
    topic.active_weeks = {2};
    spec.topics.push_back(topic);

    auto a = generate(spec);
    auto b = generate(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].timestamp == b[i].timestamp);
        CHECK(a[i].body == b[i].body);
        CHECK(a[i].label == b[i].label);
        CHECK(a[i].headers == b[i].headers);
    }

    StreamSpec other = spec;
    other.seed = 43;
    auto c = generate(other);
    bool any_diff = c.size() != a.size();
    for (std::size_t i = 0; !any_diff && i < a.size(); ++i) {
        any_diff = a[i].body != c[i].body || a[i].timestamp != c[i].timestamp;
    }
    CHECK(any_diff);
}

TEST_CASE("stream is sorted with unique ids and in-week timestamps") {
    StreamSpec spec = flat_spec(3, 15, 4);
    auto ms = generate(spec);
    REQUIRE(ms.size() == 3 * 19);
    std::set<std::string> ids;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        ids.insert(ms[i].id);
        if (i > 0) {
            bool ordered =
                ms[i - 1].timestamp < ms[i].timestamp ||
                (ms[i - 1].timestamp == ms[i].timestamp && ms[i - 1].id < ms[i].id);
            CHECK(ordered);
        }
    }
    CHECK(ids.size() == ms.size());

    CHECK(ms.front().timestamp >= kW1);
    CHECK(ms.back().timestamp < kW1 + 3 * kWeekSecs);
    for (const Message& m : ms) {
        auto date = m.header("Date");
        REQUIRE(date.has_value());
        CHECK(parse_rfc2822_date(*date) == m.timestamp);
        REQUIRE(m.header("Subject").has_value());
        CHECK(!m.header("Subject")->empty());
    }
}

TEST_CASE("weekly volumes follow base, trend and clamping") {
    SUBCASE("flat volumes are exact with zero noise") {
        auto vols = weekly_volumes(generate(flat_spec(3, 146, 12)));
        REQUIRE(vols.size() == 3);
        for (auto& [wk, counts] : vols) {
            CHECK(counts.first == 146);
            CHECK(counts.second == 12);
        }
        CHECK(vols.begin()->first == WeekKey{2002, 1});
        CHECK(vols.rbegin()->first == WeekKey{2002, 3});
    }
    SUBCASE("trend adds per week") {
        StreamSpec spec = flat_spec(4, 10, 0);
        spec.spam_volume.trend = 2.0;
        auto vols = weekly_volumes(generate(spec));
        CHECK(vols[WeekKey{2002, 1}].first == 10);
        CHECK(vols[WeekKey{2002, 2}].first == 12);
        CHECK(vols[WeekKey{2002, 3}].first == 14);
        CHECK(vols[WeekKey{2002, 4}].first == 16);
    }
    SUBCASE("negative levels clamp to zero") {
        StreamSpec spec = flat_spec(4, 5, 1);
        spec.spam_volume.trend = -3.0;
        auto ms = generate(spec);
        auto vols = weekly_volumes(ms);
        CHECK(vols[WeekKey{2002, 1}].first == 5);
        CHECK(vols[WeekKey{2002, 2}].first == 2);
        // weeks 3 and 4 hold only the legit message
        CHECK(vols[WeekKey{2002, 3}].first == 0);
        CHECK(vols[WeekKey{2002, 4}].first == 0);
        CHECK(vols[WeekKey{2002, 4}].second == 1);
    }
    SUBCASE("uniform noise stays inside its amplitude") {
        StreamSpec spec = flat_spec(20, 50, 0);
        spec.spam_volume.noise = 5.0;
        bool moved = false;
        for (auto& [wk, counts] : weekly_volumes(generate(spec))) {
            CHECK(counts.first >= 45);
            CHECK(counts.first <= 55);
            moved = moved || counts.first != 50;
        }
        CHECK(moved);  // noise actually does something
    }
    SUBCASE("gaussian noise is deterministic and clamped") {
        StreamSpec spec = flat_spec(6, 3, 0);
        spec.noise_model = NoiseModel::Gaussian;
        spec.spam_volume.noise = 4.0;
        auto v1 = weekly_volumes(generate(spec));
        auto v2 = weekly_volumes(generate(spec));
        CHECK(v1 == v2);
    }
}

TEST_CASE("start week anchors the calendar") {
    StreamSpec spec = flat_spec(1, 3, 1);
    CHECK(week_start_timestamp(spec.start) == kW1);
    auto ms = generate(spec);
    for (const Message& m : ms) {
        CHECK(iso_week_from_timestamp(m.timestamp) == WeekKey{2002, 1});
    }
    spec.start = WeekKey{2003, 7};
    for (const Message& m : generate(spec)) {
        CHECK(iso_week_from_timestamp(m.timestamp) == WeekKey{2003, 7});
    }
}

TEST_CASE("topic activation schedules") {
    TopicSpec c;
    c.kind = TopicKind::Constant;
    CHECK(topic_active(c, 1));
    CHECK(topic_active(c, 52));

    TopicSpec p;
    p.kind = TopicKind::Periodic;
    p.period = 26;
    CHECK(topic_active(p, 1));
    CHECK(!topic_active(p, 2));
    CHECK(!topic_active(p, 26));
    CHECK(topic_active(p, 27));
    CHECK(topic_active(p, 53));

    TopicSpec e;
    e.kind = TopicKind::Episodic;
    e.active_weeks = {18, 19};
    CHECK(!topic_active(e, 17));
    CHECK(topic_active(e, 18));
    CHECK(topic_active(e, 19));
    CHECK(!topic_active(e, 20));
}

TEST_CASE("topics claim disjoint blocks in declaration order") {
    StreamSpec spec = flat_spec(3, 10, 2);
    TopicSpec first;
    first.kind = TopicKind::Episodic;
    first.terms = {"nigeria", "beneficiary"};
    first.intensity = 4;
    first.active_weeks = {2};
    TopicSpec second;
    second.kind = TopicKind::Constant;
    second.terms = {"mortgage"};
    second.intensity = 3;
    spec.topics = {first, second};

    auto ms = generate(spec);
    std::map<int, std::map<std::string, int>> per_week;  // week -> term -> docs
    for (const Message& m : ms) {
        if (m.label != Label::Spam) continue;
        int w = iso_week_from_timestamp(m.timestamp).week;
        for (const char* term : {"nigeria", "beneficiary", "mortgage"}) {
            per_week[w][term] += body_has_token(m, term);
        }
        // one topic per message, never both
        CHECK(!(body_has_token(m, "nigeria") && body_has_token(m, "mortgage")));
        // paired terms always travel together
        CHECK(body_has_token(m, "nigeria") == body_has_token(m, "beneficiary"));
    }
    CHECK(per_week[1]["nigeria"] == 0);
    CHECK(per_week[2]["nigeria"] == 4);
    CHECK(per_week[3]["nigeria"] == 0);
    for (int w : {1, 2, 3}) CHECK(per_week[w]["mortgage"] == 3);
}

TEST_CASE("an overflowing topic block is truncated at the week volume") {
    StreamSpec spec = flat_spec(1, 5, 0);
    TopicSpec big;
    big.kind = TopicKind::Constant;
    big.terms = {"alpha"};
    big.intensity = 3;
    TopicSpec rest;
    rest.kind = TopicKind::Constant;
    rest.terms = {"beta"};
    rest.intensity = 99;
    spec.topics = {big, rest};

    auto ms = generate(spec);
    int alpha = 0, beta = 0;
    for (const Message& m : ms) {
        alpha += body_has_token(m, "alpha");
        beta += body_has_token(m, "beta");
    }
    CHECK(alpha == 3);
    CHECK(beta == 2);  // only 2 of the 5 messages remain for it
    CHECK(ms.size() == 5);
}

TEST_CASE("obfuscation round-trips through normalization") {
    const std::string original =
        "our product is doctor recommended and made from natural ingredients";
    auto want = tokenize(original);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        CAPTURE(seed);
        std::string obf = obfuscate(original, seed);
        CHECK(tokenize(obf) == want);
    }
    // deterministic in the seed
    CHECK(obfuscate(original, 7) == obfuscate(original, 7));
    // a sweep of seeds really does vary the surface form
    std::set<std::string> variants;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        variants.insert(obfuscate("viagra pills", seed));
    }
    CHECK(variants.size() > 5);
    bool any_changed = false;
    for (const std::string& v : variants) any_changed |= v != "viagra pills";
    CHECK(any_changed);

    CHECK(obfuscate("", 3) == "");
    CHECK(obfuscate("a", 3) == "a");  // one-letter words are never split
    CHECK(obfuscate("100 42", 3) == "100 42");  // digit runs pass through
    CHECK(tokenize(obfuscate("it's $9.99 now", 11)) == tokenize("it's $9.99 now"));
}

TEST_CASE("obfuscation rate changes bodies but nothing else") {
    StreamSpec plain = flat_spec(2, 12, 3);
    TopicSpec t;
    t.kind = TopicKind::Constant;
    t.terms = {"mortgage", "rates"};
    t.intensity = 5;
    plain.topics = {t};
    StreamSpec veiled = plain;
    veiled.obfuscation_rate = 1.0;

    auto a = generate(plain);
    auto b = generate(veiled);
    REQUIRE(a.size() == b.size());
    bool any_body_differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].timestamp == b[i].timestamp);
        CHECK(a[i].label == b[i].label);
        CHECK(a[i].header("Subject") == b[i].header("Subject"));
        // token content identical once normalized
        CHECK(tokenize(message_text(a[i])) == tokenize(message_text(b[i])));
        if (a[i].label == Label::Legit) {
            CHECK(a[i].body == b[i].body);  // only spam is ever obfuscated
        } else {
            any_body_differs = any_body_differs || a[i].body != b[i].body;
        }
    }
    CHECK(any_body_differs);
}

TEST_CASE("spec validation") {
    CHECK_NOTHROW(flat_spec(1, 1, 1).validate());

    StreamSpec bad = flat_spec(0, 1, 1);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = flat_spec(1, 1, 1);
    bad.obfuscation_rate = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = flat_spec(1, 1, 1);
    bad.spam_volume.base = -2.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = flat_spec(1, 1, 1);
    bad.topics.push_back({});  // no terms
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = flat_spec(1, 1, 1);
    TopicSpec e;
    e.kind = TopicKind::Episodic;
    e.terms = {"x"};
    bad.topics = {e};  // no active weeks
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = flat_spec(1, 1, 1);
    TopicSpec p;
    p.kind = TopicKind::Periodic;
    p.terms = {"x"};
    p.period = 1;
    bad.topics = {p};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("stream spec files") {
    SUBCASE("the full grammar parses") {
        std::istringstream in(
            "# synthetic year\n"
            "seed = 42\n"
            "weeks = 52\n"
            "start = 2002-W01\n"
            "spam_volume = 146 0 0\n"
            "legit_volume = 12\n"
            "noise_model = uniform\n"
            "obfuscation_rate = 0.25\n"
            "topic = episodic weeks=18,19 intensity=10 terms=nigeria,lagos\n"
            "topic = periodic period=52 intensity=20 terms=christmas\n"
            "topic = constant intensity=30 terms=mortgage\n");
        StreamSpec s = load_stream_spec(in);
        CHECK(s.seed == 42);
        CHECK(s.weeks == 52);
        CHECK(s.start == WeekKey{2002, 1});
        CHECK(s.spam_volume.base == 146.0);
        CHECK(s.spam_volume.trend == 0.0);
        CHECK(s.legit_volume.base == 12.0);
        CHECK(s.obfuscation_rate == 0.25);
        REQUIRE(s.topics.size() == 3);
        CHECK(s.topics[0].kind == TopicKind::Episodic);
        CHECK(s.topics[0].active_weeks == std::set<int>{18, 19});
        CHECK(s.topics[0].intensity == 10.0);
        CHECK(s.topics[0].terms == std::vector<std::string>{"nigeria", "lagos"});
        CHECK(s.topics[1].kind == TopicKind::Periodic);
        CHECK(s.topics[1].period == 52);
        CHECK(s.topics[2].kind == TopicKind::Constant);
        CHECK(s.topics[2].terms == std::vector<std::string>{"mortgage"});
    }
    SUBCASE("gaussian noise model") {
        std::istringstream in("noise_model = gaussian\nspam_volume = 10 0 2\n");
        CHECK(load_stream_spec(in).noise_model == NoiseModel::Gaussian);
    }
    SUBCASE("malformed input names the line") {
        std::istringstream a("seed 42\n");
        CHECK_THROWS_WITH_AS(load_stream_spec(a), doctest::Contains("line 1"),
                             std::runtime_error);
        std::istringstream b("seed = 1\nwibble = 2\n");
        CHECK_THROWS_WITH_AS(load_stream_spec(b), doctest::Contains("line 2"),
                             std::runtime_error);
        std::istringstream c("topic = sporadic terms=x\n");
        CHECK_THROWS_AS(load_stream_spec(c), std::runtime_error);
        std::istringstream d("topic = constant terms=x volume=2\n");
        CHECK_THROWS_AS(load_stream_spec(d), std::runtime_error);
        std::istringstream e("start = W05-2002\n");
        CHECK_THROWS_AS(load_stream_spec(e), std::runtime_error);
        std::istringstream f("weeks = soon\n");
        CHECK_THROWS_AS(load_stream_spec(f), std::runtime_error);
        std::istringstream g("topic = periodic period=1 terms=x\n");
        CHECK_THROWS_AS(load_stream_spec(g), std::invalid_argument);
    }
}
