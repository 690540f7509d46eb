#include "agora/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>

#include <spdlog/spdlog.h>

#include "agora/error.hpp"
#include "agora/features.hpp"

namespace agora::bench {

using text::PreprocessMode;
using text::TokenizedDoc;

bool is_dictionary_model(const std::string& name) {
  return name == "Di-CAP" || name == "Di-LL" || name == "Di-CAP-LL";
}

std::string canonical_model_name(const std::string& name) {
  std::string n = name;
  if (n.starts_with("SML [") && n.ends_with("]")) n = n.substr(5, n.size() - 6);
  if (std::find(kAllModels.begin(), kAllModels.end(), n) == kAllModels.end())
    throw Error("unknown model '" + name +
                "' (expected Di-CAP|Di-LL|Di-CAP-LL|PA|BNB|MNB|LR|SGD)");
  return n;
}

std::string display_name(const std::string& model) {
  return is_dictionary_model(model) ? model : "SML [" + model + "]";
}

const GridCell& BenchmarkResult::at(const std::string& model, PreprocessMode mode,
                                    const std::string& eval_set) const {
  for (const auto& c : cells)
    if (c.model == model && c.mode == mode && c.eval_set == eval_set) return c;
  throw Error("no grid cell for " + model + "/" + std::string(text::to_string(mode)) + "/" + eval_set);
}

std::size_t BenchmarkResult::failed() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const GridCell& c) { return !c.ok; }));
}

namespace {

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, n))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
}

struct ModeData {
  std::vector<TokenizedDoc> train;
  std::vector<Label> train_labels;
  std::vector<std::vector<TokenizedDoc>> evals;
};

std::vector<TokenizedDoc> preprocess_all(const corpus::LabeledCorpus& c, PreprocessMode mode,
                                         const text::Preprocessor& pre) {
  std::vector<TokenizedDoc> out;
  out.reserve(c.size());
  for (const auto& d : c.documents()) out.push_back(pre.apply(d.text, mode, d.id));
  return out;
}

std::vector<GridCell> run_dictionary_job(const BenchmarkInput& in, const std::string& model,
                                         PreprocessMode mode, const ModeData& data) {
  dict::Dictionary dictionary;
  if (model == "Di-CAP") {
    dictionary = in.curated.normalized(mode, in.preprocessor);
  } else {
    auto ll = dict::build_ll_dictionary(data.train, data.train_labels, mode, in.ll_top_k);
    dictionary = model == "Di-LL"
                     ? std::move(ll)
                     : dict::merge_dictionaries(in.curated.normalized(mode, in.preprocessor), ll,
                                                "Di-CAP-LL");
  }
  if (dictionary.empty()) throw Error(model + ": dictionary is empty under mode " +
                                      std::string(text::to_string(mode)));

  std::vector<dict::ScoredDataset> scored;
  std::vector<double> candidates;
  for (std::size_t e = 0; e < in.eval_sets.size(); ++e) {
    dict::ScoredDataset s;
    s.name = in.eval_sets[e].name;
    s.gold = in.eval_sets[e].corpus.labels();
    for (const auto& doc : data.evals[e]) s.ratios.push_back(dict::score_document(doc, dictionary).ratio);
    candidates.push_back(dict::calibrate_threshold(s.ratios, s.gold).theta);
    scored.push_back(std::move(s));
  }
  const double theta = dict::select_consistent_threshold(candidates, scored).theta;

  std::vector<GridCell> cells;
  for (const auto& s : scored) {
    std::vector<Label> pred;
    pred.reserve(s.ratios.size());
    for (const double r : s.ratios) pred.push_back(r >= theta ? Label::Political : Label::NonPolitical);
    GridCell cell;
    cell.eval_set = s.name;
    cell.cm = eval::confusion(s.gold, pred);
    cell.theta = theta;
    cells.push_back(std::move(cell));
  }
  return cells;
}

std::vector<GridCell> run_sml_job(const BenchmarkInput& in, const std::string& model,
                                  PreprocessMode mode, const ModeData& data) {
  const auto kind = sml::parse_model_kind(model);
  auto space = sml::FeatureSpace::fit(data.train, in.max_features);
  std::vector<sml::Example> examples;
  examples.reserve(data.train.size());
  for (std::size_t i = 0; i < data.train.size(); ++i)
    examples.push_back({space.vectorize(data.train[i].tokens), data.train_labels[i]});
  auto trained = sml::train(kind, std::move(space), examples, in.hyperparameters, in.seed);
  trained.mode = mode;

  std::vector<GridCell> cells;
  for (std::size_t e = 0; e < in.eval_sets.size(); ++e) {
    std::vector<Label> pred;
    pred.reserve(data.evals[e].size());
    for (const auto& doc : data.evals[e])
      pred.push_back(sml::predict(trained, trained.feature_space.vectorize(doc.tokens)));
    GridCell cell;
    cell.eval_set = in.eval_sets[e].name;
    cell.cm = eval::confusion(in.eval_sets[e].corpus.labels(), pred);
    cells.push_back(std::move(cell));
  }
  return cells;
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkInput& input) {
  if (input.models.empty()) throw Error("benchmark: no models selected");
  if (input.modes.empty()) throw Error("benchmark: no preprocessing modes selected");
  if (input.eval_sets.empty()) throw Error("benchmark: no evaluation sets");
  if (!input.train.has_both_classes()) throw Error("benchmark: training corpus needs both classes");

  BenchmarkResult result;
  for (const auto& m : input.models) result.models.push_back(canonical_model_name(m));
  result.modes = input.modes;
  for (const auto& e : input.eval_sets) result.eval_sets.push_back(e.name);

  std::vector<ModeData> per_mode(input.modes.size());
  parallel_for(input.modes.size(), input.jobs, [&](std::size_t i) {
    auto& d = per_mode[i];
    d.train = preprocess_all(input.train, input.modes[i], input.preprocessor);
    d.train_labels = input.train.labels();
    for (const auto& e : input.eval_sets)
      d.evals.push_back(preprocess_all(e.corpus, input.modes[i], input.preprocessor));
  });

  const std::size_t n_jobs = result.models.size() * input.modes.size();
  std::vector<std::vector<GridCell>> job_cells(n_jobs);
  parallel_for(n_jobs, input.jobs, [&](std::size_t j) {
    const auto& model = result.models[j / input.modes.size()];
    const std::size_t mode_index = j % input.modes.size();
    const auto mode = input.modes[mode_index];
    std::vector<GridCell> cells;
    try {
      cells = is_dictionary_model(model) ? run_dictionary_job(input, model, mode, per_mode[mode_index])
                                         : run_sml_job(input, model, mode, per_mode[mode_index]);
      for (auto& c : cells) {
        c.ok = true;
        c.report = eval::macro_report(c.cm);
      }
    } catch (const std::exception& e) {
      spdlog::warn("benchmark cell {}/{} failed: {}", model, text::to_string(mode), e.what());
      cells.clear();
      for (const auto& es : input.eval_sets) {
        GridCell c;
        c.eval_set = es.name;
        c.error = e.what();
        cells.push_back(std::move(c));
      }
    }
    for (auto& c : cells) {
      c.model = model;
      c.mode = mode;
    }
    job_cells[j] = std::move(cells);
  });

  for (auto& cells : job_cells)
    for (auto& c : cells) result.cells.push_back(std::move(c));
  return result;
}

}  // namespace agora::bench
