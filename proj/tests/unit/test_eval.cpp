#include <doctest.h>

#include <random>
#include <regex>
#include <sstream>

#include "agora/benchmark.hpp"
#include "agora/error.hpp"
#include "agora/metrics.hpp"
#include "agora/report.hpp"
#include "agora/resources.hpp"
#include "agora/sweep.hpp"
#include "synthetic.hpp"

using namespace agora;
using namespace agora::eval;
using text::PreprocessMode;

namespace {

constexpr Label P = Label::Political, N = Label::NonPolitical;

std::vector<Label> random_labels(std::mt19937_64& rng, std::size_t n) {
  std::vector<Label> out(n);
  for (auto& l : out) l = rng() % 2 ? P : N;
  return out;
}

SweepResult brute_sweep(const std::vector<double>& probs, const std::vector<Label>& gold,
                        const std::vector<double>& grid) {
  SweepResult r;
  ConfusionMatrix best_cm;
  bool have = false;
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  for (const double p : sorted) {
    std::vector<Label> pred;
    for (const double q : probs) pred.push_back(q >= p ? P : N);
    const auto cm = confusion(gold, pred);
    if (!have || compare_macro_f1(cm, best_cm) > 0) {
      best_cm = cm;
      r.best_p = p;
      r.best_macro_f1 = macro_f1(cm);
      have = true;
    }
  }
  return r;
}

bench::BenchmarkInput small_grid_input() {
  bench::BenchmarkInput in;
  in.train = corpus::LabeledCorpus(synth::corpus(40, 40, 1, "t", 0.2));
  in.eval_sets = {{"A", corpus::LabeledCorpus(synth::corpus(15, 15, 2, "a", 0.2))},
                  {"B", corpus::LabeledCorpus(synth::corpus(10, 20, 3, "b", 0.3))},
                  {"C", corpus::LabeledCorpus(synth::corpus(20, 10, 4, "c", 0.1))}};
  in.curated = dict::load_dictionary(default_curated_dictionary_path(), "Di-CAP");
  in.preprocessor = load_preprocessor();
  return in;
}

std::string csv_of(const bench::BenchmarkResult& r) {
  std::ostringstream out;
  report::write_grid_csv(out, r);
  return out.str();
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("confusion") {
  const std::vector<Label> gold{P, P, N, N}, pred{P, N, N, P};
  CHECK(confusion(gold, pred) == ConfusionMatrix{1, 1, 1, 1});
  const auto same = confusion(gold, gold);
  CHECK(same.fp == 0);
  CHECK(same.fn == 0);
  CHECK_THROWS_AS(confusion(gold, std::vector<Label>{P}), Error);
}

TEST_CASE("confusion matches a naive tally") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto g = random_labels(rng, 1000), p = random_labels(rng, 1000);
    std::size_t c[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < g.size(); ++i) ++c[g[i] == P][p[i] == P];
    const auto cm = confusion(g, p);
    CHECK(cm.tp == c[1][1]);
    CHECK(cm.fn == c[1][0]);
    CHECK(cm.fp == c[0][1]);
    CHECK(cm.tn == c[0][0]);
    CHECK(cm.total() == 1000);
  }
}

TEST_CASE("class metrics") {
  const ConfusionMatrix cm{731, 344, 119, 500};
  const auto m = class_metrics(cm, P);
  CHECK(m.precision == doctest::Approx(0.68));
  CHECK(m.recall == doctest::Approx(0.86));
  CHECK(std::abs(m.f1 - 0.76) <= 0.005);
  CHECK(format2(m.f1) == "0.76");

  const auto eq = class_metrics(ConfusionMatrix{3, 1, 1, 5}, P);
  CHECK(eq.precision == eq.recall);
  CHECK(eq.f1 == doctest::Approx(eq.precision));

  const auto zero = class_metrics(ConfusionMatrix{0, 0, 0, 7}, P);
  CHECK(zero.precision == 0.0);
  CHECK(zero.recall == 0.0);
  CHECK(zero.f1 == 0.0);

  const auto non = class_metrics(ConfusionMatrix{2, 3, 1, 4}, N);
  CHECK(non.precision == doctest::Approx(4.0 / 5.0));
  CHECK(non.recall == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("macro report and display rounding") {
  CHECK(round2((0.82 + 0.76) / 2) == 0.79);
  CHECK(format2((0.79 + 0.22) / 2) == "0.51");
  CHECK(format2(0.505) == "0.51");
  CHECK(format2(0.125) == "0.13");
  CHECK(format2(0.0) == "0.00");
  CHECK(format2(1.0) == "1.00");
  CHECK(format_cell(0.76, 0.79) == "0.76 [0.79]");

  const ConfusionMatrix cm{5, 2, 3, 9};
  const auto r = macro_report(cm);
  CHECK(r.macro.f1 == (r.political.f1 + r.non_political.f1) / 2);
  CHECK(r.macro.precision == (r.political.precision + r.non_political.precision) / 2);
  CHECK(r.support_political == 8);
  CHECK(r.support_non_political == 11);
  CHECK(macro_f1(cm) == r.macro.f1);

  const auto sym = macro_report(ConfusionMatrix{4, 1, 1, 4});
  CHECK(sym.macro.f1 == doctest::Approx(sym.political.f1));
}

TEST_CASE("metric symmetries") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    auto g = random_labels(rng, 50), p = random_labels(rng, 50);
    const auto base = macro_report(confusion(g, p));

    std::vector<std::size_t> idx(50);
    std::iota(idx.begin(), idx.end(), 0);
    seeded_shuffle(std::span(idx), rng);
    std::vector<Label> g2, p2;
    for (auto i : idx) {
      g2.push_back(g[i]);
      p2.push_back(p[i]);
    }
    CHECK(macro_report(confusion(g2, p2)).macro.f1 == base.macro.f1);

    std::vector<Label> gf, pf;
    for (std::size_t i = 0; i < g.size(); ++i) {
      gf.push_back(other(g[i]));
      pf.push_back(other(p[i]));
    }
    const auto swapped = macro_report(confusion(gf, pf));
    CHECK(swapped.political.f1 == base.non_political.f1);
    CHECK(swapped.non_political.precision == base.political.precision);
    CHECK(swapped.macro.f1 == doctest::Approx(base.macro.f1).epsilon(1e-15));
  }
}

TEST_CASE("compare_macro_f1 agrees with floating point away from ties") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 2000; ++t) {
    const ConfusionMatrix a{rng() % 20, rng() % 20, rng() % 20, rng() % 20};
    const ConfusionMatrix b{rng() % 20, rng() % 20, rng() % 20, rng() % 20};
    const double fa = macro_f1(a), fb = macro_f1(b);
    if (std::abs(fa - fb) > 1e-12) CHECK((compare_macro_f1(a, b) > 0) == (fa > fb));
    CHECK(compare_macro_f1(a, a) == 0);
  }
}

TEST_CASE("probability sweep") {
  const std::vector<double> probs{0.06, 0.12, 0.15, 0.17, 0.30, 0.08, 0.19};
  const std::vector<Label> gold{N, N, P, P, P, N, P};
  const auto r = sweep_prob_threshold(probs, gold, kDefaultProbGrid);
  CHECK(r.best_p == 0.15);
  CHECK(r.best_macro_f1 == 1.0);
  REQUIRE(r.table.size() == kDefaultProbGrid.size());
  CHECK(r.table[0].first == 0.05);

  const std::vector<double> flat(6, 0.3);
  const auto same = sweep_prob_threshold(flat, std::vector<Label>{P, N, P, N, P, N}, kDefaultProbGrid);
  CHECK(same.best_p == 0.05);
  for (const auto& [p, f] : same.table) CHECK(f == same.table.front().second);

  CHECK(sweep_prob_threshold(probs, gold, std::vector<double>{0.3}).best_p == 0.3);
  CHECK_THROWS_AS(sweep_prob_threshold(probs, gold, std::vector<double>{}), Error);
}

TEST_CASE("probability sweep equals brute force") {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 500;
    std::vector<double> probs(n);
    for (auto& p : probs) p = static_cast<double>(rng() % 50) / 100.0;
    const auto gold = random_labels(rng, n);
    std::vector<double> grid = kDefaultProbGrid;
    if (t % 3 == 0) grid = {0.4, 0.1, 0.25};
    const auto got = sweep_prob_threshold(probs, gold, grid);
    const auto want = brute_sweep(probs, gold, grid);
    CHECK(got.best_p == want.best_p);
    CHECK(got.best_macro_f1 == want.best_macro_f1);
  }
}

TEST_CASE("sweep over a trained model") {
  auto in = small_grid_input();
  const auto pre = load_preprocessor();
  std::vector<text::TokenizedDoc> docs;
  for (const auto& d : in.train.documents()) docs.push_back(pre.apply(d.text, PreprocessMode::None));
  const auto space = sml::FeatureSpace::fit(docs);
  std::vector<sml::Example> ex;
  const auto labels = in.train.labels();
  for (std::size_t i = 0; i < docs.size(); ++i) ex.push_back({space.vectorize(docs[i].tokens), labels[i]});
  const auto lr = sml::train(sml::ModelKind::LR, space, ex);
  const auto r = sweep_prob_threshold(lr, ex, kDefaultProbGrid);
  std::vector<double> probs;
  for (const auto& e : ex) probs.push_back(sml::predict_proba(lr, e.x));
  CHECK(r.best_p == brute_sweep(probs, labels, kDefaultProbGrid).best_p);
  const auto pa = sml::train(sml::ModelKind::PA, space, ex);
  CHECK_THROWS_AS(sweep_prob_threshold(pa, ex, kDefaultProbGrid), Error);
}

TEST_CASE("benchmark grid shape, determinism and jobs independence") {
  auto in = small_grid_input();
  const auto a = bench::run_benchmark(in);
  CHECK(a.cells.size() == 144);
  CHECK(a.failed() == 0);
  for (const auto& c : a.cells) {
    CHECK(c.f1_political() >= 0.0);
    CHECK(c.f1_macro() <= 1.0);
    CHECK(c.cm.total() == 30u);
    CHECK(c.theta.has_value() == bench::is_dictionary_model(c.model));
  }
  in.jobs = 4;
  const auto b = bench::run_benchmark(in);
  CHECK(csv_of(a) == csv_of(b));
  CHECK(csv_of(a) == csv_of(bench::run_benchmark(small_grid_input())));

  // Dictionary thresholds are shared by all eval sets of a (model, mode).
  for (const auto& m : {"Di-CAP", "Di-LL", "Di-CAP-LL"})
    for (const auto mode : text::kAllModes)
      CHECK(a.at(m, mode, "A").theta == a.at(m, mode, "C").theta);
}

TEST_CASE("single model and mode") {
  auto in = small_grid_input();
  in.models = {"LR"};
  in.modes = {PreprocessMode::Stem};
  const auto r = bench::run_benchmark(in);
  CHECK(r.cells.size() == 3);
  for (const auto& c : r.cells) CHECK(c.model == "LR");
}

TEST_CASE("failed jobs are recorded and the grid carries on") {
  auto in = small_grid_input();
  in.models = {"MNB", "PA"};
  in.modes = {PreprocessMode::None};
  in.hyperparameters.nb_alpha = 0.0;
  const auto r = bench::run_benchmark(in);
  CHECK(r.cells.size() == 6);
  CHECK(r.failed() == 3);
  CHECK_FALSE(r.at("MNB", PreprocessMode::None, "A").ok);
  CHECK_FALSE(r.at("MNB", PreprocessMode::None, "A").error.empty());
  CHECK(r.at("PA", PreprocessMode::None, "A").ok);
  const auto csv = csv_of(r);
  CHECK(csv.find(",failed,") != std::string::npos);
}

TEST_CASE("reports") {
  auto in = small_grid_input();
  in.models = {"Di-CAP", "PA"};
  in.modes = {PreprocessMode::None, PreprocessMode::LemmaStop};
  const auto r = bench::run_benchmark(in);

  const auto csv = csv_of(r);
  CHECK(csv.rfind("model,mode,eval_set,tp,fp,fn,tn,p_pol,r_pol,f1_pol,p_non,r_non,f1_non,f1_macro", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 12);

  std::ostringstream md;
  report::write_grid_markdown(md, r);
  const auto text = md.str();
  CHECK(text.find("SML [PA]") != std::string::npos);
  CHECK(text.find("Lemmatisation + stopword removal") != std::string::npos);
  const std::regex cell(R"(\d\.\d\d \[\d\.\d\d\])");
  CHECK(std::distance(std::sregex_iterator(text.begin(), text.end(), cell), std::sregex_iterator()) == 12);

  std::ostringstream one;
  report::write_report_markdown(one, "x", ConfusionMatrix{731, 344, 119, 500});
  CHECK(one.str().find("0.68") != std::string::npos);
}

TEST_CASE("model names") {
  CHECK(bench::canonical_model_name("SML [PA]") == "PA");
  CHECK(bench::canonical_model_name("Di-CAP") == "Di-CAP");
  CHECK(bench::display_name("LR") == "SML [LR]");
  CHECK_THROWS_AS(bench::canonical_model_name("BERT"), Error);
}

}
