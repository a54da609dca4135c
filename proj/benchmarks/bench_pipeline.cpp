// Microbenchmarks for the hot paths: normalization, scoring, the burst
// statistic and stream generation.  Run via ./spamdrift_bench.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>
#include <vector>

#include "spamdrift/costs.hpp"
#include "spamdrift/drift.hpp"
#include "spamdrift/filtereval.hpp"
#include "spamdrift/normalize.hpp"
#include "spamdrift/synth.hpp"

using namespace spamdrift;

namespace {

const std::string kObscuredBody =
    "Our pro<br2sd9/>duct is doctor reco<br2sd9 />mmen<br2sd9/>ded and made "
    "from 100% natu<br2sd9/>ral ingre<br2sd9/>dients. "
    "C<!--7udzl53l5spp6-->lic<!--yajiwn1xnbecx2-->k he<!--ehc0aj2pvwu-->re</a> "
    "for v.ia.g.ra and a 100% Mo|ney Back Guaran|tee!";

void BM_normalize(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(normalize(kObscuredBody));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(kObscuredBody.size()));
}
BENCHMARK(BM_normalize);

void BM_tokenize(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(tokenize(kObscuredBody));
    }
}
BENCHMARK(BM_tokenize);

void BM_nb_score(benchmark::State& state) {
    NaiveBayesModel model;
    const std::string words[8] = {"free",   "cash",  "click", "meeting",
                                  "report", "offer", "pills", "thanks"};
    for (int d = 0; d < 200; ++d) {
        TokenList doc;
        for (int k = 0; k < 6; ++k) doc.push_back(words[(d + k) % 8]);
        model.train(doc, d % 3 ? Label::Spam : Label::Legit);
    }
    TokenList probe = {"free", "offer", "meeting", "pills", "thanks"};
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.score(probe));
    }
}
BENCHMARK(BM_nb_score);

void BM_chi2(benchmark::State& state) {
    TermWeekMatrix m;
    m.terms = {"a", "b", "c", "d", "e"};
    WeekKey wk{2002, 1};
    for (int w = 0; w < 52; ++w) {
        m.weeks.push_back(wk);
        wk = next_week(wk);
    }
    m.observed.assign(5, std::vector<std::uint64_t>(52, 2));
    m.week_totals.assign(52, 10);
    for (int t = 0; t < 5; ++t) {
        m.observed[t][10 + 7 * t] = 12;
        m.expected.push_back((2.0 * 51 + 12.0) / 52.0);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(chi2_bursts(m, Chi2Mode::OneCell));
    }
}
BENCHMARK(BM_chi2);

void BM_pcf(benchmark::State& state) {
    CostSpec costs{10.0, 1.0};
    double p = 0.32;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pcf(p, costs));
        p = p < 0.9 ? p + 1e-6 : 0.32;
    }
}
BENCHMARK(BM_pcf);

void BM_generate_week(benchmark::State& state) {
    StreamSpec spec;
    spec.seed = 7;
    spec.weeks = 1;
    spec.spam_volume.base = 146;
    spec.legit_volume.base = 12;
    spec.obfuscation_rate = 0.25;
    TopicSpec topic;
    topic.kind = TopicKind::Constant;
    topic.terms = {"mortgage", "rates"};
    topic.intensity = 30;
    spec.topics = {topic};
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate(spec));
    }
}
BENCHMARK(BM_generate_week);

}  // namespace

BENCHMARK_MAIN();
