// filtereval.hpp
//
// Prequential (test-then-train) evaluation of an online spam filter
// over a time-ordered message stream, plus the baseline multinomial
// naive Bayes model.  Spam is the positive class throughout: a false
// positive is legitimate mail lost to the spam folder.

#ifndef SPAMDRIFT_FILTEREVAL_HPP
#define SPAMDRIFT_FILTEREVAL_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "spamdrift/costs.hpp"
#include "spamdrift/message.hpp"
#include "spamdrift/normalize.hpp"

namespace spamdrift {

using TokenList = std::vector<std::string>;

class ClassifierModel {
public:
    virtual ~ClassifierModel() = default;

    /// incorporates one labeled message; label must be Spam or Legit
    virtual void train(const TokenList& tokens, Label label) = 0;

    /// p(spam | message) in [0,1]; deterministic for identical
    /// training histories.  Throws when a class is still untrained.
    virtual double score(const TokenList& tokens) const = 0;

    /// true once both classes have at least one training example
    virtual bool ready() const = 0;
};

struct NaiveBayesConfig {
    /// Laplace smoothing constant
    double alpha = 1.0;
    /// training weight per token of a legitimate message; 2 reproduces
    /// the double-counting scheme, 1 is plain naive Bayes
    double legit_token_weight = 1.0;
    /// freeze class priors at 0.5/0.5 so prior drift is studied by the
    /// drift analysis instead of leaking into the classifier; when
    /// false, training document counts set the priors
    bool fixed_priors = true;

    void validate() const;
};

class NaiveBayesModel : public ClassifierModel {
public:
    explicit NaiveBayesModel(NaiveBayesConfig cfg = {});

    void train(const TokenList& tokens, Label label) override;
    double score(const TokenList& tokens) const override;
    bool ready() const override;

    const NaiveBayesConfig& config() const { return cfg_; }
    std::uint64_t spam_docs() const { return spam_docs_; }
    std::uint64_t legit_docs() const { return legit_docs_; }
    double spam_count(const std::string& token) const;
    double legit_count(const std::string& token) const;

private:
    NaiveBayesConfig cfg_;
    std::map<std::string, double> spam_counts_;
    std::map<std::string, double> legit_counts_;
    std::uint64_t spam_docs_ = 0;
    std::uint64_t legit_docs_ = 0;
};

/// Spam iff score >= threshold
Label classify(double score, double threshold);

enum class FeedbackMode {
    /// every message is scored, recorded, then trained with its true
    /// label — immediate perfect feedback
    TestThenTrain,
    /// the filter only learns from warm-up messages and reported
    /// misses (spam that reached the inbox); an idealized user never
    /// corrects the spam folder
    TrainOnlyOnFeedback,
};

struct EvalRow {
    WeekKey week;
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;
    /// warm-up messages scored as abstentions, outside the confusion counts
    std::uint64_t abstained = 0;

    std::uint64_t evaluated() const { return tp + fp + tn + fn; }
    double accuracy() const;
    double precision() const;
    double recall() const;
    double fp_rate() const;
    double fn_rate() const;
    double weighted_cost(const CostSpec& c) const;
};

struct EvalReport {
    std::vector<EvalRow> rows;  // gap-free ascending weeks
    EvalRow totals;             // totals.week is meaningless
    CostSpec costs;
};

/// runs the filter over the stream in timestamp order.  Throws
/// std::invalid_argument on unordered or unlabeled input.
EvalReport prequential_run(const std::vector<Message>& messages,
                           ClassifierModel& model, double threshold,
                           const CostSpec& costs = {},
                           FeedbackMode mode = FeedbackMode::TestThenTrain,
                           const NormalizeConfig& norm = {});

/// weighted cost totals recomputed per cost ratio (cost_fp =
/// ratio · cost_fn) from fixed confusion counts
std::vector<std::pair<double, double>> cost_ratio_sweep(
    std::uint64_t fp, std::uint64_t fn, const std::vector<double>& ratios,
    double cost_fn = 1.0);

/// eval.csv: year, week, tp, fp, tn, fn, abstained, accuracy,
/// precision, recall, fp_rate, fn_rate, weighted_cost; final totals
/// row carries year="total" and an empty week field
void write_eval_csv(const EvalReport& r, std::ostream& out);

/// evaluation settings parsed from CLI flags or a key=value file
struct EvalConfig {
    double threshold = 0.9;
    NaiveBayesConfig nb;
    CostSpec costs;
    FeedbackMode mode = FeedbackMode::TestThenTrain;
};

/// key=value lines: threshold, alpha, legit_token_weight, fixed_priors,
/// mode (test_then_train | train_only_on_feedback), cost_fp, cost_fn.
/// '#' comments and blank lines are ignored; unknown keys throw.
EvalConfig load_eval_config(std::istream& in, EvalConfig base = {});

}  // namespace spamdrift

#endif  // SPAMDRIFT_FILTEREVAL_HPP
