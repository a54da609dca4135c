#include "spamdrift/filtereval.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "spamdrift/csv.hpp"

namespace spamdrift {

namespace {

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

double ratio_or_nan(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return nan_value();
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void NaiveBayesConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must be finite and positive");
    }
    if (!(legit_token_weight > 0.0) || !std::isfinite(legit_token_weight)) {
        throw std::invalid_argument("legit_token_weight must be finite and positive");
    }
}

NaiveBayesModel::NaiveBayesModel(NaiveBayesConfig cfg) : cfg_(cfg) {
    cfg_.validate();
}

void NaiveBayesModel::train(const TokenList& tokens, Label label) {
    if (label == Label::Unlabeled) {
        throw std::invalid_argument("cannot train on an unlabeled message");
    }
    if (label == Label::Spam) {
        for (const std::string& t : tokens) spam_counts_[t] += 1.0;
        ++spam_docs_;
    } else {
        for (const std::string& t : tokens) {
            legit_counts_[t] += cfg_.legit_token_weight;
        }
        ++legit_docs_;
    }
}

bool NaiveBayesModel::ready() const { return spam_docs_ > 0 && legit_docs_ > 0; }

double NaiveBayesModel::spam_count(const std::string& token) const {
    auto it = spam_counts_.find(token);
    return it == spam_counts_.end() ? 0.0 : it->second;
}

double NaiveBayesModel::legit_count(const std::string& token) const {
    auto it = legit_counts_.find(token);
    return it == legit_counts_.end() ? 0.0 : it->second;
}

double NaiveBayesModel::score(const TokenList& tokens) const {
    if (!ready()) {
        throw std::runtime_error("naive Bayes model has an untrained class");
    }

    // vocabulary = union of tokens seen in training; token masses are
    // recomputed here (sorted map order) so scores are independent of
    // the order training examples arrived in
    std::size_t vocab = 0;
    {
        auto s = spam_counts_.begin();
        auto l = legit_counts_.begin();
        while (s != spam_counts_.end() || l != legit_counts_.end()) {
            if (l == legit_counts_.end()) {
                ++s;
            } else if (s == spam_counts_.end()) {
                ++l;
            } else if (s->first < l->first) {
                ++s;
            } else if (l->first < s->first) {
                ++l;
            } else {
                ++s;
                ++l;
            }
            ++vocab;
        }
    }
    double spam_mass = 0.0;
    for (const auto& [t, n] : spam_counts_) spam_mass += n;
    double legit_mass = 0.0;
    for (const auto& [t, n] : legit_counts_) legit_mass += n;

    double log_spam, log_legit;
    if (cfg_.fixed_priors) {
        log_spam = log_legit = std::log(0.5);
    } else {
        double total = static_cast<double>(spam_docs_ + legit_docs_);
        log_spam = std::log(static_cast<double>(spam_docs_) / total);
        log_legit = std::log(static_cast<double>(legit_docs_) / total);
    }

    if (vocab > 0) {
        double v = static_cast<double>(vocab);
        double spam_den = spam_mass + cfg_.alpha * v;
        double legit_den = legit_mass + cfg_.alpha * v;
        for (const std::string& t : tokens) {
            log_spam += std::log((spam_count(t) + cfg_.alpha) / spam_den);
            log_legit += std::log((legit_count(t) + cfg_.alpha) / legit_den);
        }
    }
    // p(spam | tokens) without leaving log space prematurely
    return 1.0 / (1.0 + std::exp(log_legit - log_spam));
}

Label classify(double score, double threshold) {
    return score >= threshold ? Label::Spam : Label::Legit;
}

double EvalRow::accuracy() const { return ratio_or_nan(tp + tn, evaluated()); }
double EvalRow::precision() const { return ratio_or_nan(tp, tp + fp); }
double EvalRow::recall() const { return ratio_or_nan(tp, tp + fn); }
double EvalRow::fp_rate() const { return ratio_or_nan(fp, fp + tn); }
double EvalRow::fn_rate() const { return ratio_or_nan(fn, fn + tp); }

double EvalRow::weighted_cost(const CostSpec& c) const {
    return static_cast<double>(fp) * c.cost_fp + static_cast<double>(fn) * c.cost_fn;
}

EvalReport prequential_run(const std::vector<Message>& messages,
                           ClassifierModel& model, double threshold,
                           const CostSpec& costs, FeedbackMode mode,
                           const NormalizeConfig& norm) {
    costs.validate();
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("threshold must lie in [0, 1]");
    }

    EvalReport report;
    report.costs = costs;
    if (messages.empty()) return report;

    std::map<WeekKey, EvalRow> weekly;
    std::int64_t prev_ts = std::numeric_limits<std::int64_t>::min();
    for (const Message& m : messages) {
        if (m.timestamp < prev_ts) {
            throw std::invalid_argument(
                "messages not in timestamp order at id " + m.id);
        }
        prev_ts = m.timestamp;
        if (m.label == Label::Unlabeled) {
            throw std::invalid_argument("unlabeled message in stream: " + m.id);
        }

        WeekKey wk = iso_week_from_timestamp(m.timestamp);
        EvalRow& row = weekly[wk];
        row.week = wk;
        TokenList tokens = tokenize(message_text(m), norm);

        if (!model.ready()) {
            // warm-up: no prediction to grade, so the message trains
            // the model in either feedback mode
            ++row.abstained;
            model.train(tokens, m.label);
            continue;
        }

        Label predicted = classify(model.score(tokens), threshold);
        if (m.label == Label::Spam) {
            predicted == Label::Spam ? ++row.tp : ++row.fn;
        } else {
            predicted == Label::Spam ? ++row.fp : ++row.tn;
        }

        bool false_negative = predicted == Label::Legit && m.label == Label::Spam;
        if (mode == FeedbackMode::TestThenTrain ||
            (mode == FeedbackMode::TrainOnlyOnFeedback && false_negative)) {
            model.train(tokens, m.label);
        }
    }

    // gap-free weekly rows across the stream's span
    WeekKey wk = weekly.begin()->first;
    WeekKey last = weekly.rbegin()->first;
    while (true) {
        EvalRow row;
        row.week = wk;
        if (auto it = weekly.find(wk); it != weekly.end()) row = it->second;
        report.totals.tp += row.tp;
        report.totals.fp += row.fp;
        report.totals.tn += row.tn;
        report.totals.fn += row.fn;
        report.totals.abstained += row.abstained;
        report.rows.push_back(row);
        if (wk == last) break;
        wk = next_week(wk);
    }
    return report;
}

std::vector<std::pair<double, double>> cost_ratio_sweep(
    std::uint64_t fp, std::uint64_t fn, const std::vector<double>& ratios,
    double cost_fn) {
    if (!(cost_fn > 0.0) || !std::isfinite(cost_fn)) {
        throw std::invalid_argument("cost_fn must be finite and positive");
    }
    std::vector<std::pair<double, double>> table;
    table.reserve(ratios.size());
    for (double r : ratios) {
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw std::invalid_argument("cost ratios must be finite and positive");
        }
        EvalRow counts;
        counts.fp = fp;
        counts.fn = fn;
        table.emplace_back(r, counts.weighted_cost({r * cost_fn, cost_fn}));
    }
    return table;
}

namespace {

void write_eval_row(CsvWriter& w, const EvalRow& row, const CostSpec& costs,
                    bool totals) {
    if (totals) {
        w.field(std::string_view("total")).field(std::string_view(""));
    } else {
        w.field(row.week.year).field(row.week.week);
    }
    w.field(row.tp)
        .field(row.fp)
        .field(row.tn)
        .field(row.fn)
        .field(row.abstained)
        .field(row.accuracy())
        .field(row.precision())
        .field(row.recall())
        .field(row.fp_rate())
        .field(row.fn_rate())
        .field(row.weighted_cost(costs));
    w.end_row();
}

}  // namespace

void write_eval_csv(const EvalReport& r, std::ostream& out) {
    CsvWriter w(out);
    w.row({"year", "week", "tp", "fp", "tn", "fn", "abstained", "accuracy",
           "precision", "recall", "fp_rate", "fn_rate", "weighted_cost"});
    for (const EvalRow& row : r.rows) write_eval_row(w, row, r.costs, false);
    write_eval_row(w, r.totals, r.costs, true);
}

EvalConfig load_eval_config(std::istream& in, EvalConfig base) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        // trim
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        std::string entry = line.substr(b, e - b + 1);
        auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("expected key=value at line " +
                                     std::to_string(lineno));
        }
        std::string key = entry.substr(0, eq);
        std::string value = entry.substr(eq + 1);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t')) {
            value.erase(value.begin());
        }
        try {
            if (key == "threshold") {
                base.threshold = std::stod(value);
            } else if (key == "alpha") {
                base.nb.alpha = std::stod(value);
            } else if (key == "legit_token_weight") {
                base.nb.legit_token_weight = std::stod(value);
            } else if (key == "fixed_priors") {
                if (value == "true" || value == "1") {
                    base.nb.fixed_priors = true;
                } else if (value == "false" || value == "0") {
                    base.nb.fixed_priors = false;
                } else {
                    throw std::runtime_error("expected true/false");
                }
            } else if (key == "mode") {
                if (value == "test_then_train") {
                    base.mode = FeedbackMode::TestThenTrain;
                } else if (value == "train_only_on_feedback") {
                    base.mode = FeedbackMode::TrainOnlyOnFeedback;
                } else {
                    throw std::runtime_error("unknown mode '" + value + "'");
                }
            } else if (key == "cost_fp") {
                base.costs.cost_fp = std::stod(value);
            } else if (key == "cost_fn") {
                base.costs.cost_fn = std::stod(value);
            } else {
                throw std::runtime_error("unknown key '" + key + "'");
            }
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception&) {
            throw std::runtime_error("bad value for '" + key + "' at line " +
                                     std::to_string(lineno));
        }
    }
    base.nb.validate();
    base.costs.validate();
    if (!(base.threshold >= 0.0 && base.threshold <= 1.0)) {
        throw std::runtime_error("threshold must lie in [0, 1]");
    }
    return base;
}

}  // namespace spamdrift
