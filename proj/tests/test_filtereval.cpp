#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "spamdrift/filtereval.hpp"

using namespace spamdrift;

namespace {

constexpr std::int64_t kW1 = 1009756800;  // 2002-W01 opens here
constexpr std::int64_t kWeekSecs = 604800;

Message msg(std::string id, std::int64_t ts, Label label, std::string body) {
    Message m;
    m.id = std::move(id);
    m.timestamp = ts;
    m.body = std::move(body);
    m.label = label;
    return m;
}

NaiveBayesModel toy_model(double weight = 1.0) {
    NaiveBayesConfig cfg;
    cfg.legit_token_weight = weight;
    NaiveBayesModel nb(cfg);
    nb.train({"free", "cash"}, Label::Spam);
    nb.train({"free", "pills"}, Label::Spam);
    nb.train({"meeting", "lunch"}, Label::Legit);
    nb.train({"report", "meeting"}, Label::Legit);
    return nb;
}

}  // namespace

TEST_CASE("naive bayes config validation") {
    CHECK_THROWS_AS(NaiveBayesModel(NaiveBayesConfig{0.0, 1.0, true}),
                    std::invalid_argument);
    CHECK_THROWS_AS(NaiveBayesModel(NaiveBayesConfig{-1.0, 1.0, true}),
                    std::invalid_argument);
    CHECK_THROWS_AS(NaiveBayesModel(NaiveBayesConfig{1.0, 0.0, true}),
                    std::invalid_argument);
    CHECK_NOTHROW(NaiveBayesModel(NaiveBayesConfig{0.5, 2.0, false}));
}

TEST_CASE("training counts and readiness") {
    NaiveBayesModel nb;
    CHECK(!nb.ready());
    nb.train({"free", "cash", "free"}, Label::Spam);
    CHECK(!nb.ready());  // still no legit example
    CHECK(nb.spam_docs() == 1);
    CHECK(nb.spam_count("free") == 2.0);
    CHECK(nb.spam_count("cash") == 1.0);
    CHECK(nb.spam_count("nope") == 0.0);
    CHECK_THROWS_AS(nb.score({"free"}), std::runtime_error);

    nb.train({"meeting"}, Label::Legit);
    CHECK(nb.ready());
    CHECK(nb.legit_docs() == 1);
    CHECK_THROWS_AS(nb.train({"x"}, Label::Unlabeled), std::invalid_argument);

    // the double-counting scheme weights legitimate tokens
    NaiveBayesModel heavy(NaiveBayesConfig{1.0, 2.0, true});
    heavy.train({"meeting", "lunch"}, Label::Legit);
    CHECK(heavy.legit_count("meeting") == 2.0);
    CHECK(heavy.legit_count("lunch") == 2.0);
    CHECK(heavy.legit_docs() == 1);
}

TEST_CASE("posterior for the toy corpus") {
    NaiveBayesModel nb = toy_model();
    // p(free|spam) = (2+1)/(4+6) = .3, p(free|legit) = (0+1)/(4+6) = .1
    // fixed even priors: p = .3/(.3+.1)
    CHECK(nb.score({"free"}) == doctest::Approx(0.75).epsilon(1e-12));
    // an empty message falls back to the class priors
    CHECK(nb.score({}) == 0.5);
    // symmetric evidence cancels
    NaiveBayesModel sym;
    sym.train({"x"}, Label::Spam);
    sym.train({"y"}, Label::Legit);
    CHECK(sym.score({"z"}) == 0.5);
    CHECK(sym.score({"x", "y"}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("document priors when not frozen") {
    NaiveBayesConfig cfg;
    cfg.fixed_priors = false;
    NaiveBayesModel nb(cfg);
    nb.train({"a"}, Label::Spam);
    nb.train({"a"}, Label::Spam);
    nb.train({"a"}, Label::Spam);
    nb.train({"b"}, Label::Legit);
    // document counts set the priors: p(spam) = 3/4
    CHECK(nb.score({}) == doctest::Approx(0.75).epsilon(1e-12));
    // V=2: p(a|spam) = (3+1)/(3+2), p(a|legit) = (0+1)/(1+2)
    CHECK(nb.score({"a"}) == doctest::Approx(
              (0.75 * (4.0 / 5.0)) / (0.75 * (4.0 / 5.0) + 0.25 * (1.0 / 3.0)))
              .epsilon(1e-12));

    NaiveBayesModel frozen = toy_model();
    frozen.train({"extra"}, Label::Spam);  // 3 spam vs 2 legit docs
    CHECK(frozen.score({}) == 0.5);        // priors stay even when fixed
}

TEST_CASE("scores are independent of training order") {
    NaiveBayesConfig cfg;
    cfg.legit_token_weight = 2.0;
    NaiveBayesModel a(cfg), b(cfg), c(cfg);
    a.train({"free", "cash"}, Label::Spam);
    a.train({"free", "pills"}, Label::Spam);
    a.train({"meeting", "lunch"}, Label::Legit);
    a.train({"report", "meeting"}, Label::Legit);

    b.train({"report", "meeting"}, Label::Legit);
    b.train({"free", "pills"}, Label::Spam);
    b.train({"meeting", "lunch"}, Label::Legit);
    b.train({"free", "cash"}, Label::Spam);

    c.train({"cash", "free"}, Label::Spam);     // token order shuffled too
    c.train({"pills", "free"}, Label::Spam);
    c.train({"lunch", "meeting"}, Label::Legit);
    c.train({"meeting", "report"}, Label::Legit);

    for (const TokenList& probe :
         {TokenList{"free"}, TokenList{"free", "meeting", "unseen"},
          TokenList{"cash", "cash", "lunch"}, TokenList{}}) {
        double ra = a.score(probe);
        CHECK(ra == b.score(probe));  // bit-identical, not just close
        CHECK(ra == c.score(probe));
    }
}

TEST_CASE("posterior matches a direct probability-space computation") {
    const char* vocab[8] = {"cash", "free", "lunch", "meeting",
                            "offer", "pills", "report", "work"};
    std::mt19937 rng(4242);
    for (int rep = 0; rep < 200; ++rep) {
        CAPTURE(rep);
        NaiveBayesConfig cfg;
        cfg.alpha = std::array<double, 3>{0.5, 1.0, 2.0}[rng() % 3];
        cfg.legit_token_weight = 1.0 + static_cast<double>(rng() % 2);
        cfg.fixed_priors = rng() % 2 == 0;
        NaiveBayesModel nb(cfg);

        std::map<std::string, double> spam_counts, legit_counts;
        std::set<std::string> seen;
        std::uint64_t nspam = 1 + rng() % 3, nlegit = 1 + rng() % 3;
        for (std::uint64_t d = 0; d < nspam + nlegit; ++d) {
            bool is_spam = d < nspam;
            TokenList doc;
            std::size_t len = 1 + rng() % 5;
            for (std::size_t k = 0; k < len; ++k) {
                doc.push_back(vocab[rng() % 8]);
                seen.insert(doc.back());
                auto& counts = is_spam ? spam_counts : legit_counts;
                counts[doc.back()] += is_spam ? 1.0 : cfg.legit_token_weight;
            }
            nb.train(doc, is_spam ? Label::Spam : Label::Legit);
        }

        TokenList probe;
        std::size_t plen = rng() % 4;
        for (std::size_t k = 0; k < plen; ++k) probe.push_back(vocab[rng() % 8]);
        if (rng() % 3 == 0) probe.push_back("neverseen");

        double v = static_cast<double>(seen.size());
        double spam_mass = 0.0, legit_mass = 0.0;
        for (auto& [t, n] : spam_counts) spam_mass += n;
        for (auto& [t, n] : legit_counts) legit_mass += n;
        double ps = cfg.fixed_priors
                        ? 0.5
                        : static_cast<double>(nspam) / static_cast<double>(nspam + nlegit);
        double pl = 1.0 - ps;
        for (const std::string& t : probe) {
            auto cnt = [&](std::map<std::string, double>& m) {
                auto it = m.find(t);
                return it == m.end() ? 0.0 : it->second;
            };
            ps *= (cnt(spam_counts) + cfg.alpha) / (spam_mass + cfg.alpha * v);
            pl *= (cnt(legit_counts) + cfg.alpha) / (legit_mass + cfg.alpha * v);
        }
        double want = ps / (ps + pl);
        CHECK(std::fabs(nb.score(probe) - want) <= 1e-12);
    }
}

TEST_CASE("classification threshold is inclusive") {
    CHECK(classify(0.9, 0.9) == Label::Spam);
    CHECK(classify(0.8999999, 0.9) == Label::Legit);
    CHECK(classify(0.0, 0.0) == Label::Spam);
    CHECK(classify(1.0, 1.0) == Label::Spam);
    CHECK(classify(0.999999, 1.0) == Label::Legit);
}

TEST_CASE("prequential run over a hand-checked stream") {
    std::vector<Message> stream;
    stream.push_back(msg("m1", kW1 + 0, Label::Spam, "buy pills"));
    stream.push_back(msg("m2", kW1 + 60, Label::Legit, "meeting agenda"));
    stream.push_back(msg("m3", kW1 + 120, Label::Spam, "buy pills"));
    stream.push_back(msg("m4", kW1 + 180, Label::Legit, "meeting agenda"));
    stream.push_back(msg("m5", kW1 + 240, Label::Spam, "meeting agenda"));
    stream.push_back(msg("m6", kW1 + kWeekSecs, Label::Legit, "buy meeting"));

    NaiveBayesModel nb;
    EvalReport r = prequential_run(stream, nb, 0.5, {10.0, 1.0});

    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].week == WeekKey{2002, 1});
    CHECK(r.rows[0].abstained == 2);  // m1 and m2 warm the model up
    CHECK(r.rows[0].tp == 1);         // m3 scores ~.8
    CHECK(r.rows[0].tn == 1);         // m4 scores ~.12
    CHECK(r.rows[0].fn == 1);         // m5 is spam that reads like a meeting
    CHECK(r.rows[0].fp == 0);
    CHECK(r.rows[1].week == WeekKey{2002, 2});
    CHECK(r.rows[1].fp == 1);  // m6 is legit that now reads spammy
    CHECK(r.rows[1].evaluated() == 1);

    CHECK(r.totals.tp == 1);
    CHECK(r.totals.fp == 1);
    CHECK(r.totals.tn == 1);
    CHECK(r.totals.fn == 1);
    CHECK(r.totals.abstained == 2);
    CHECK(r.totals.evaluated() + r.totals.abstained == stream.size());
    CHECK(r.totals.accuracy() == 0.5);
    CHECK(r.totals.precision() == 0.5);
    CHECK(r.totals.recall() == 0.5);
    CHECK(r.totals.fp_rate() == 0.5);
    CHECK(r.totals.fn_rate() == 0.5);
    CHECK(r.totals.weighted_cost({10.0, 1.0}) == 11.0);

    // test-then-train sees every true label
    CHECK(nb.spam_docs() == 3);
    CHECK(nb.legit_docs() == 3);
}

TEST_CASE("prequential input validation") {
    NaiveBayesModel nb;
    std::vector<Message> unordered{msg("a", 100, Label::Spam, "x"),
                                   msg("b", 50, Label::Legit, "y")};
    CHECK_THROWS_AS(prequential_run(unordered, nb, 0.5), std::invalid_argument);

    std::vector<Message> unlabeled{msg("a", 100, Label::Unlabeled, "x")};
    CHECK_THROWS_AS(prequential_run(unlabeled, nb, 0.5), std::invalid_argument);

    std::vector<Message> ok{msg("a", 100, Label::Spam, "x")};
    CHECK_THROWS_AS(prequential_run(ok, nb, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(prequential_run(ok, nb, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(prequential_run(ok, nb, 0.5, {0.0, 1.0}),
                    std::invalid_argument);

    EvalReport empty = prequential_run({}, nb, 0.5);
    CHECK(empty.rows.empty());
    CHECK(empty.totals.evaluated() == 0);

    // equal timestamps are fine; the stream is merely non-decreasing
    std::vector<Message> ties{msg("a", 100, Label::Spam, "x"),
                              msg("b", 100, Label::Legit, "y")};
    CHECK_NOTHROW(prequential_run(ties, nb, 0.5));
}

TEST_CASE("prequential weeks are gap-filled") {
    std::vector<Message> stream;
    stream.push_back(msg("m1", kW1, Label::Spam, "pills"));
    stream.push_back(msg("m2", kW1 + 60, Label::Legit, "agenda"));
    stream.push_back(msg("m3", kW1 + 3 * kWeekSecs, Label::Spam, "pills"));
    NaiveBayesModel nb;
    EvalReport r = prequential_run(stream, nb, 0.5);
    REQUIRE(r.rows.size() == 4);  // W01 .. W04
    CHECK(r.rows[1].week == WeekKey{2002, 2});
    CHECK(r.rows[1].evaluated() == 0);
    CHECK(r.rows[1].abstained == 0);
    CHECK(std::isnan(r.rows[1].accuracy()));
    CHECK(r.rows[3].tp == 1);
}

TEST_CASE("raising the threshold only moves errors toward false negatives") {
    // in test-then-train mode the model's state never depends on the
    // threshold, so fn counts are monotone in it and fp counts are
    // antitone, exactly
    std::mt19937 rng(77);
    const char* spam_words[4] = {"cash", "free", "offer", "pills"};
    const char* legit_words[4] = {"lunch", "meeting", "report", "work"};
    std::vector<Message> stream;
    for (int i = 0; i < 120; ++i) {
        bool is_spam = rng() % 2 == 0;
        std::string body;
        for (int k = 0; k < 4; ++k) {
            // mostly class words with some bleed-through
            bool cross = rng() % 4 == 0;
            const char** pool = (is_spam != cross) ? spam_words : legit_words;
            body += pool[rng() % 4];
            body += ' ';
        }
        stream.push_back(msg("s" + std::to_string(i), kW1 + i * 3600,
                             is_spam ? Label::Spam : Label::Legit, body));
    }

    std::uint64_t prev_fn = 0;
    std::uint64_t prev_fp = std::numeric_limits<std::uint64_t>::max();
    for (double th : {0.0, 0.25, 0.5, 0.75, 0.9, 0.999, 1.0}) {
        CAPTURE(th);
        NaiveBayesModel nb;
        EvalReport r = prequential_run(stream, nb, th);
        CHECK(r.totals.fn >= prev_fn);
        CHECK(r.totals.fp <= prev_fp);
        prev_fn = r.totals.fn;
        prev_fp = r.totals.fp;
    }
}

TEST_CASE("feedback-only training learns from warm-up and misses alone") {
    std::mt19937 rng(31);
    std::vector<Message> stream;
    for (int i = 0; i < 60; ++i) {
        bool is_spam = i % 3 != 0;
        stream.push_back(msg("f" + std::to_string(i), kW1 + i * 7200,
                             is_spam ? Label::Spam : Label::Legit,
                             is_spam ? "free offer now" : "see you at lunch"));
    }

    NaiveBayesModel nb;
    EvalReport r = prequential_run(stream, nb, 0.9, {10.0, 1.0},
                                   FeedbackMode::TrainOnlyOnFeedback);
    // every false negative went back in as training data; nothing else
    // did once warm-up ended
    std::uint64_t warm_spam = 0, warm_legit = 0;
    std::uint64_t seen_spam = 0, seen_legit = 0;
    for (const Message& m : stream) {
        bool ready = seen_spam > 0 && seen_legit > 0;
        (m.label == Label::Spam ? seen_spam : seen_legit) += 1;
        if (!ready) (m.label == Label::Spam ? warm_spam : warm_legit) += 1;
    }
    CHECK(nb.spam_docs() == warm_spam + r.totals.fn);
    CHECK(nb.legit_docs() == warm_legit);
    CHECK(r.totals.evaluated() + r.totals.abstained == stream.size());

    // with the same stream, test-then-train absorbs everything
    NaiveBayesModel ttt;
    prequential_run(stream, ttt, 0.9, {10.0, 1.0}, FeedbackMode::TestThenTrain);
    CHECK(ttt.spam_docs() == seen_spam);
    CHECK(ttt.legit_docs() == seen_legit);
}

TEST_CASE("cost ratio sweep from fixed counts") {
    auto table = cost_ratio_sweep(1, 10, {1.0, 10.0, 100.0});
    REQUIRE(table.size() == 3);
    CHECK(table[0] == std::pair{1.0, 11.0});
    CHECK(table[1] == std::pair{10.0, 20.0});
    CHECK(table[2] == std::pair{100.0, 110.0});

    auto scaled = cost_ratio_sweep(1, 10, {10.0}, 2.0);
    CHECK(scaled[0].second == 40.0);  // fp 1*20 + fn 10*2

    CHECK(cost_ratio_sweep(0, 0, {5.0})[0].second == 0.0);
    CHECK_THROWS_AS(cost_ratio_sweep(1, 1, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(cost_ratio_sweep(1, 1, {-2.0}), std::invalid_argument);
    CHECK_THROWS_AS(cost_ratio_sweep(1, 1, {1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("eval csv layout") {
    std::vector<Message> stream;
    stream.push_back(msg("m1", kW1 + 0, Label::Spam, "buy pills"));
    stream.push_back(msg("m2", kW1 + 60, Label::Legit, "meeting agenda"));
    stream.push_back(msg("m3", kW1 + 120, Label::Spam, "buy pills"));
    stream.push_back(msg("m4", kW1 + 180, Label::Legit, "meeting agenda"));
    stream.push_back(msg("m5", kW1 + 240, Label::Spam, "meeting agenda"));
    stream.push_back(msg("m6", kW1 + kWeekSecs, Label::Legit, "buy meeting"));
    NaiveBayesModel nb;
    EvalReport r = prequential_run(stream, nb, 0.5, {10.0, 1.0});

    std::ostringstream out;
    write_eval_csv(r, out);
    CHECK(out.str() ==
          "year,week,tp,fp,tn,fn,abstained,accuracy,precision,recall,fp_rate,"
          "fn_rate,weighted_cost\n"
          "2002,1,1,0,1,1,2,0.6666666667,1,0.5,0,0.5,1\n"
          "2002,2,0,1,0,0,0,0,0,,1,,10\n"
          "total,,1,1,1,1,2,0.5,0.5,0.5,0.5,0.5,11\n");
}

TEST_CASE("eval config files") {
    SUBCASE("defaults survive an empty file") {
        std::istringstream in("\n# nothing but comments\n");
        EvalConfig cfg = load_eval_config(in);
        CHECK(cfg.threshold == 0.9);
        CHECK(cfg.nb.alpha == 1.0);
        CHECK(cfg.nb.legit_token_weight == 1.0);
        CHECK(cfg.nb.fixed_priors);
        CHECK(cfg.mode == FeedbackMode::TestThenTrain);
        CHECK(cfg.costs.cost_fp == 10.0);
        CHECK(cfg.costs.cost_fn == 1.0);
    }
    SUBCASE("every key parses") {
        std::istringstream in(
            "threshold = 0.999\n"
            "alpha=0.5\n"
            "legit_token_weight = 2 # double counting\n"
            "fixed_priors = false\n"
            "mode = train_only_on_feedback\n"
            "cost_fp = 9\n"
            "cost_fn = 3\n");
        EvalConfig cfg = load_eval_config(in);
        CHECK(cfg.threshold == 0.999);
        CHECK(cfg.nb.alpha == 0.5);
        CHECK(cfg.nb.legit_token_weight == 2.0);
        CHECK(!cfg.nb.fixed_priors);
        CHECK(cfg.mode == FeedbackMode::TrainOnlyOnFeedback);
        CHECK(cfg.costs.cost_fp == 9.0);
        CHECK(cfg.costs.cost_fn == 3.0);
    }
    SUBCASE("the base config seeds unset keys") {
        EvalConfig base;
        base.threshold = 0.25;
        std::istringstream in("alpha = 2\n");
        EvalConfig cfg = load_eval_config(in, base);
        CHECK(cfg.threshold == 0.25);
        CHECK(cfg.nb.alpha == 2.0);
    }
    SUBCASE("bad input throws with a line number or key name") {
        std::istringstream a("bogus_key = 1\n");
        CHECK_THROWS_WITH_AS(load_eval_config(a),
                             doctest::Contains("bogus_key"), std::runtime_error);
        std::istringstream b("threshold\n");
        CHECK_THROWS_WITH_AS(load_eval_config(b), doctest::Contains("line 1"),
                             std::runtime_error);
        std::istringstream c("threshold = banana\n");
        CHECK_THROWS_AS(load_eval_config(c), std::runtime_error);
        std::istringstream d("threshold = 1.5\n");
        CHECK_THROWS_AS(load_eval_config(d), std::runtime_error);
        std::istringstream e("alpha = -1\n");
        CHECK_THROWS_AS(load_eval_config(e), std::invalid_argument);
        std::istringstream f("mode = sometimes\n");
        CHECK_THROWS_AS(load_eval_config(f), std::runtime_error);
        std::istringstream g("fixed_priors = maybe\n");
        CHECK_THROWS_AS(load_eval_config(g), std::runtime_error);
    }
}
