// spamdrift
//
// Command-line front end wiring the library into a pipeline of
// independent subcommands that exchange CSV artifacts:
//
//   ingest  parse archives, report parse/quarantine counts
//   priors  weekly p(spam) series           -> priors.csv, priors.svg
//   pcf     map priors into cost space      -> pcf.csv, dominance.csv
//   bursts  chi-square term bursts          -> bursts.csv, bursts.svg
//   eval    prequential naive Bayes run     -> eval.csv
//   synth   deterministic synthetic stream  -> spam.mbox, legit.mbox
//   render  re-draw SVG charts from CSVs
//
// Exit status: 0 success, 1 data error ("error: ..." on stderr),
// 2 usage error.  SPAMDRIFT_OUT overrides every --out directory.
// Artifacts are written atomically (temp file + rename).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spamdrift/bucket.hpp"
#include "spamdrift/costs.hpp"
#include "spamdrift/csv.hpp"
#include "spamdrift/drift.hpp"
#include "spamdrift/filtereval.hpp"
#include "spamdrift/maildir.hpp"
#include "spamdrift/mbox.hpp"
#include "spamdrift/message.hpp"
#include "spamdrift/normalize.hpp"
#include "spamdrift/svg.hpp"
#include "spamdrift/synth.hpp"

namespace fs = std::filesystem;
using namespace spamdrift;

namespace {

fs::path resolve_out_dir(std::string out_flag) {
    if (const char* env = std::getenv("SPAMDRIFT_OUT"); env && *env) {
        out_flag = env;
    }
    fs::path dir = out_flag.empty() ? fs::path(".") : fs::path(out_flag);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory '" +
                                 dir.string() + "': " + ec.message());
    }
    return dir;
}

/// temp file + rename, so readers never observe a partial artifact
void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("write failed for '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path);
}

/// dispatches on path type: directory -> maildir, file -> mbox
IngestResult ingest_path(const std::string& path, Label label,
                         std::int64_t now) {
    if (fs::is_directory(path)) return parse_maildir(path, label, now);
    return parse_mbox_file(path, label, now);
}

struct Ingested {
    std::vector<Message> messages;  // merged, (timestamp, id) order
    std::vector<SourceReport> reports;
    std::vector<QuarantineRecord> quarantined;
};

Ingested ingest_all(const std::vector<std::string>& spam,
                    const std::vector<std::string>& legit, std::int64_t now) {
    Ingested all;
    auto take = [&](const std::vector<std::string>& paths, Label label) {
        for (const std::string& p : paths) {
            IngestResult r = ingest_path(p, label, now);
            all.reports.push_back(make_source_report(p, r));
            for (Message& m : r.messages) all.messages.push_back(std::move(m));
            for (QuarantineRecord& q : r.quarantined) {
                all.quarantined.push_back(std::move(q));
            }
        }
    };
    take(spam, Label::Spam);
    take(legit, Label::Legit);
    std::sort(all.messages.begin(), all.messages.end(),
              [](const Message& a, const Message& b) {
                  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                  return a.id < b.id;
              });
    return all;
}

std::vector<double> parse_ratio_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw std::runtime_error("bad ratio '" + item + "' in --ratios");
        }
    }
    if (out.empty()) throw std::runtime_error("--ratios got an empty list");
    return out;
}

ClassifierPoint parse_classifier(const std::string& s) {
    auto p1 = s.find(':');
    auto p2 = p1 == std::string::npos ? std::string::npos : s.find(':', p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos) {
        throw std::runtime_error("bad --classifier '" + s +
                                 "', expected name:fpr:fnr");
    }
    ClassifierPoint pt;
    pt.name = s.substr(0, p1);
    try {
        pt.fpr = std::stod(s.substr(p1 + 1, p2 - p1 - 1));
        pt.fnr = std::stod(s.substr(p2 + 1));
    } catch (const std::exception&) {
        throw std::runtime_error("bad --classifier '" + s +
                                 "', expected name:fpr:fnr");
    }
    if (pt.name.empty() || pt.fpr < 0 || pt.fpr > 1 || pt.fnr < 0 || pt.fnr > 1) {
        throw std::runtime_error("bad --classifier '" + s +
                                 "': rates must lie in [0,1]");
    }
    return pt;
}

NormalizeConfig load_norm_table(const std::string& path) {
    if (path.empty()) return {};
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table file: " + path);
    return load_normalize_config(in);
}

std::string quarantine_csv(const std::vector<QuarantineRecord>& records) {
    std::ostringstream os;
    CsvWriter w(os);
    w.row({"id", "reason"});
    for (const QuarantineRecord& q : records) {
        w.field(q.id).field(q.reason);
        w.end_row();
    }
    return os.str();
}

// ---- subcommand bodies ------------------------------------------------

int run_ingest(const std::vector<std::string>& spam,
               const std::vector<std::string>& legit, const std::string& out,
               std::int64_t now) {
    Ingested all = ingest_all(spam, legit, now);
    fs::path dir = resolve_out_dir(out);
    std::ostringstream report;
    write_report_csv(all.reports, report);
    write_atomic(dir / "report.csv", report.str());
    write_atomic(dir / "quarantine.csv", quarantine_csv(all.quarantined));
    return 0;
}

int run_priors(const std::vector<std::string>& spam,
               const std::vector<std::string>& legit, const std::string& out,
               std::int64_t now, double decay) {
    Ingested all = ingest_all(spam, legit, now);
    WeekSeries series =
        smooth_priors(prior_series(bucket_by_week(all.messages)), decay);
    fs::path dir = resolve_out_dir(out);
    std::ostringstream csv;
    write_priors_csv(series, csv);
    write_atomic(dir / "priors.csv", csv.str());
    write_atomic(dir / "priors.svg", render_prior_chart(series));
    return 0;
}

int run_pcf(const std::string& priors_path, const std::string& out,
            const CostSpec& costs, const std::vector<std::string>& classifiers,
            int grid) {
    std::ifstream in(priors_path);
    if (!in) throw std::runtime_error("cannot open priors csv: " + priors_path);
    WeekSeries series = read_priors_csv(in);
    fs::path dir = resolve_out_dir(out);

    std::ostringstream csv;
    write_pcf_csv(series, costs, csv);
    write_atomic(dir / "pcf.csv", csv.str());

    if (!classifiers.empty()) {
        std::vector<ClassifierPoint> points;
        points.reserve(classifiers.size());
        for (const std::string& c : classifiers) {
            points.push_back(parse_classifier(c));
        }
        PcfRange range = pcf_range(series, costs);
        auto intervals = dominant_over_range(points, range, grid);
        std::ostringstream dom;
        write_dominance_csv(intervals, dom);
        write_atomic(dir / "dominance.csv", dom.str());
        write_atomic(dir / "costcurve.svg", render_cost_curve(points, range));
    }
    return 0;
}

int run_bursts(const std::vector<std::string>& spam, const std::string& out,
               std::int64_t now, const std::string& count_mode,
               const std::string& chi2_mode, std::uint64_t min_total,
               const std::string& vocab_list, const std::string& table_path,
               bool marker_stats) {
    NormalizeConfig norm = load_norm_table(table_path);
    Ingested all = ingest_all(spam, {}, now);

    TermCountConfig tc;
    tc.mode = count_mode == "token" ? CountMode::TokenFrequency
                                    : CountMode::DocumentFrequency;
    tc.min_total = min_total;
    std::vector<std::string> vocab;
    if (!vocab_list.empty()) {
        std::stringstream ss(vocab_list);
        std::string term;
        while (std::getline(ss, term, ',')) {
            if (!term.empty()) vocab.push_back(term);
        }
    }

    TermWeekMatrix m = term_week_counts(
        group_week_docs(all.messages, Label::Spam, norm), vocab, tc);
    m = chi2_bursts(m, chi2_mode == "contingency" ? Chi2Mode::Contingency2x2
                                                  : Chi2Mode::OneCell);

    fs::path dir = resolve_out_dir(out);
    std::ostringstream csv;
    write_bursts_csv(m, csv);
    write_atomic(dir / "bursts.csv", csv.str());
    write_atomic(dir / "bursts.svg", render_burst_grid(m));

    if (!m.excluded.empty()) {
        std::ostringstream ex;
        CsvWriter w(ex);
        w.row({"term"});
        for (const std::string& t : m.excluded) {
            w.field(t);
            w.end_row();
        }
        write_atomic(dir / "excluded.csv", ex.str());
    }
    if (marker_stats) {
        std::array<std::size_t, kMarkerCount> totals{};
        for (const Message& msg : all.messages) {
            NormalizedText n = normalize(message_text(msg), norm);
            for (std::size_t i = 0; i < kMarkerCount; ++i) {
                totals[i] += n.removed[i];
            }
        }
        std::ostringstream mc;
        write_marker_csv(totals, mc);
        write_atomic(dir / "markers.csv", mc.str());
    }
    return 0;
}

int run_eval(const std::vector<std::string>& spam,
             const std::vector<std::string>& legit, const std::string& out,
             std::int64_t now, const EvalConfig& cfg,
             const std::string& ratio_list, const std::string& table_path) {
    NormalizeConfig norm = load_norm_table(table_path);
    Ingested all = ingest_all(spam, legit, now);

    NaiveBayesModel model(cfg.nb);
    EvalReport report = prequential_run(all.messages, model, cfg.threshold,
                                        cfg.costs, cfg.mode, norm);
    fs::path dir = resolve_out_dir(out);
    std::ostringstream csv;
    write_eval_csv(report, csv);
    write_atomic(dir / "eval.csv", csv.str());

    if (!ratio_list.empty()) {
        auto table = cost_ratio_sweep(report.totals.fp, report.totals.fn,
                                      parse_ratio_list(ratio_list),
                                      cfg.costs.cost_fn);
        std::ostringstream sweep;
        CsvWriter w(sweep);
        w.row({"ratio", "weighted_cost"});
        for (const auto& [ratio, cost] : table) {
            w.field(ratio).field(cost);
            w.end_row();
        }
        write_atomic(dir / "ratio_sweep.csv", sweep.str());
    }
    return 0;
}

int run_synth(const std::string& spec_path, const std::string& out,
              std::uint64_t seed_override, bool seed_given) {
    std::ifstream in(spec_path);
    if (!in) throw std::runtime_error("cannot open stream spec: " + spec_path);
    StreamSpec spec = load_stream_spec(in);
    if (seed_given) spec.seed = seed_override;

    std::vector<Message> all = generate(spec);
    std::vector<Message> spam, legit;
    for (Message& m : all) {
        (m.label == Label::Spam ? spam : legit).push_back(std::move(m));
    }
    fs::path dir = resolve_out_dir(out);
    std::ostringstream so, lo;
    write_mbox(spam, so);
    write_mbox(legit, lo);
    write_atomic(dir / "spam.mbox", so.str());
    write_atomic(dir / "legit.mbox", lo.str());
    return 0;
}

int run_render(const std::string& priors_path, const std::string& bursts_path,
               const std::vector<std::string>& classifiers,
               const std::string& range_str, const CostSpec& costs,
               const std::string& out) {
    fs::path dir = resolve_out_dir(out);
    std::optional<WeekSeries> series;
    if (!priors_path.empty()) {
        std::ifstream in(priors_path);
        if (!in) {
            throw std::runtime_error("cannot open priors csv: " + priors_path);
        }
        series = read_priors_csv(in);
        write_atomic(dir / "priors.svg", render_prior_chart(*series));
    }
    if (!bursts_path.empty()) {
        std::ifstream in(bursts_path);
        if (!in) {
            throw std::runtime_error("cannot open bursts csv: " + bursts_path);
        }
        write_atomic(dir / "bursts.svg", render_burst_grid(read_bursts_csv(in)));
    }
    if (!classifiers.empty()) {
        std::vector<ClassifierPoint> points;
        for (const std::string& c : classifiers) {
            points.push_back(parse_classifier(c));
        }
        PcfRange range{0.0, 1.0};
        if (!range_str.empty()) {
            auto colon = range_str.find(':');
            if (colon == std::string::npos) {
                throw std::runtime_error("bad --range, expected lo:hi");
            }
            try {
                range.lo = std::stod(range_str.substr(0, colon));
                range.hi = std::stod(range_str.substr(colon + 1));
            } catch (const std::exception&) {
                throw std::runtime_error("bad --range, expected lo:hi");
            }
        } else if (series) {
            range = pcf_range(*series, costs);
        }
        write_atomic(dir / "costcurve.svg", render_cost_curve(points, range));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spam-stream drift and cost analysis"};
    app.require_subcommand(1);

    // shared option storage
    std::vector<std::string> spam_paths, legit_paths, classifiers;
    std::string out_dir;
    std::int64_t now = 0;
    double decay = 0.0;
    std::string priors_path, bursts_path, spec_path, range_str;
    CostSpec costs;
    int grid = 256;
    std::string count_mode = "document", chi2_mode = "one-cell";
    std::uint64_t min_total = 5;
    std::string vocab_list, table_path, ratio_list, config_path;
    EvalConfig eval_cfg;
    std::string mode_str = "test-then-train", preset;
    bool marker_stats = false;
    std::uint64_t seed_override = 0;

    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir,
                        "output directory (SPAMDRIFT_OUT overrides)");
    };
    auto add_sources = [&](CLI::App* cmd, bool need_legit) {
        cmd->add_option("--spam", spam_paths,
                        "spam archives (mbox file or maildir)")
            ->required();
        auto* l = cmd->add_option("--legit", legit_paths,
                                  "legitimate-mail archives");
        if (need_legit) l->required();
        cmd->add_option("--now", now,
                        "unix timestamp treated as 'now' for quarantine bounds");
    };
    auto add_costs = [&](CLI::App* cmd) {
        cmd->add_option("--cost-fp", costs.cost_fp,
                        "cost of a false positive (default 10)");
        cmd->add_option("--cost-fn", costs.cost_fn,
                        "cost of a false negative (default 1)");
    };

    CLI::App* ingest = app.add_subcommand(
        "ingest", "parse archives and write parse/quarantine reports");
    add_sources(ingest, false);
    add_out(ingest);

    CLI::App* priors = app.add_subcommand(
        "priors", "weekly p(spam) series from labeled archives");
    add_sources(priors, true);
    add_out(priors);
    priors->add_option("--decay", decay,
                       "exponential smoothing factor in [0,1); 0 = off");

    CLI::App* pcf_cmd = app.add_subcommand(
        "pcf", "probability-cost mapping of a prior series");
    pcf_cmd->add_option("--priors", priors_path, "priors.csv input")->required();
    add_costs(pcf_cmd);
    pcf_cmd->add_option("--classifier", classifiers,
                        "classifier point name:fpr:fnr (repeatable)");
    pcf_cmd->add_option("--grid", grid, "rendering resolution (>= 2)");
    add_out(pcf_cmd);

    CLI::App* bursts = app.add_subcommand(
        "bursts", "chi-square term-burst matrix over weekly spam");
    bursts->add_option("--spam", spam_paths, "spam archives")->required();
    bursts->add_option("--now", now, "unix timestamp treated as 'now'");
    bursts->add_option("--count-mode", count_mode,
                       "counting unit: document (default) or token")
        ->check(CLI::IsMember({"document", "token"}));
    bursts->add_option("--chi2-mode", chi2_mode,
                       "statistic: one-cell (default) or contingency")
        ->check(CLI::IsMember({"one-cell", "contingency"}));
    bursts->add_option("--min-total", min_total,
                       "vocabulary threshold on total term count (default 5)");
    bursts->add_option("--vocab", vocab_list,
                       "comma-separated explicit vocabulary");
    bursts->add_option("--norm-table", table_path,
                       "normalization table file (leet/wstag lines)");
    bursts->add_flag("--marker-stats", marker_stats,
                     "also write markers.csv with normalization counts");
    add_out(bursts);

    CLI::App* eval = app.add_subcommand(
        "eval", "prequential naive Bayes evaluation");
    add_sources(eval, true);
    eval->add_option("--threshold", eval_cfg.threshold,
                     "spam decision threshold (default 0.9)");
    eval->add_option("--preset", preset,
                     "threshold preset: strict (.999) or even (.5)")
        ->check(CLI::IsMember({"strict", "even"}));
    eval->add_option("--alpha", eval_cfg.nb.alpha,
                     "Laplace smoothing (default 1)");
    eval->add_option("--legit-token-weight", eval_cfg.nb.legit_token_weight,
                     "training weight per legit token (2 = double-counting)");
    eval->add_option("--fixed-priors", eval_cfg.nb.fixed_priors,
                     "freeze model priors at 0.5/0.5 (default true)");
    eval->add_option("--mode", mode_str, "feedback mode")
        ->check(CLI::IsMember({"test-then-train", "feedback-only"}));
    add_costs(eval);
    eval->add_option("--ratios", ratio_list,
                     "comma-separated cost-ratio sweep, e.g. 1,10,100");
    eval->add_option("--config", config_path, "key=value config file");
    eval->add_option("--norm-table", table_path,
                     "normalization table file (leet/wstag lines)");
    add_out(eval);

    CLI::App* synth = app.add_subcommand(
        "synth", "generate a synthetic labeled stream as mbox files");
    synth->add_option("--spec", spec_path, "stream spec file")->required();
    synth->add_option("--seed", seed_override, "override the spec's seed");
    add_out(synth);

    CLI::App* render = app.add_subcommand(
        "render", "re-draw SVG charts from CSV artifacts");
    render->add_option("--priors", priors_path, "priors.csv to chart");
    render->add_option("--bursts", bursts_path, "bursts.csv to chart");
    render->add_option("--classifier", classifiers,
                       "classifier point name:fpr:fnr (repeatable)");
    render->add_option("--range", range_str, "shaded pcf range lo:hi");
    add_costs(render);
    add_out(render);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*ingest) return run_ingest(spam_paths, legit_paths, out_dir, now);
        if (*priors) return run_priors(spam_paths, legit_paths, out_dir, now, decay);
        if (*pcf_cmd) {
            return run_pcf(priors_path, out_dir, costs, classifiers, grid);
        }
        if (*bursts) {
            return run_bursts(spam_paths, out_dir, now, count_mode, chi2_mode,
                              min_total, vocab_list, table_path, marker_stats);
        }
        if (*eval) {
            EvalConfig cfg;
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) {
                    throw std::runtime_error("cannot open config file: " +
                                             config_path);
                }
                cfg = load_eval_config(in);
            }
            // explicit flags override the file
            if (eval->count("--threshold")) cfg.threshold = eval_cfg.threshold;
            if (eval->count("--alpha")) cfg.nb.alpha = eval_cfg.nb.alpha;
            if (eval->count("--legit-token-weight")) {
                cfg.nb.legit_token_weight = eval_cfg.nb.legit_token_weight;
            }
            if (eval->count("--fixed-priors")) {
                cfg.nb.fixed_priors = eval_cfg.nb.fixed_priors;
            }
            if (eval->count("--cost-fp")) cfg.costs.cost_fp = costs.cost_fp;
            if (eval->count("--cost-fn")) cfg.costs.cost_fn = costs.cost_fn;
            if (eval->count("--mode")) {
                cfg.mode = mode_str == "feedback-only"
                               ? FeedbackMode::TrainOnlyOnFeedback
                               : FeedbackMode::TestThenTrain;
            }
            if (eval->count("--preset")) {
                cfg.threshold = preset == "strict" ? 0.999 : 0.5;
            }
            cfg.nb.validate();
            cfg.costs.validate();
            return run_eval(spam_paths, legit_paths, out_dir, now, cfg,
                            ratio_list, table_path);
        }
        if (*synth) {
            return run_synth(spec_path, out_dir, seed_override,
                             synth->count("--seed") > 0);
        }
        if (*render) {
            if (priors_path.empty() && bursts_path.empty() &&
                classifiers.empty()) {
                std::cerr << "error: render needs --priors, --bursts or "
                             "--classifier\n";
                return 2;
            }
            return run_render(priors_path, bursts_path, classifiers, range_str,
                              costs, out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
