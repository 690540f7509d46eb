#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agora/corpus.hpp"
#include "agora/dictionary.hpp"
#include "agora/metrics.hpp"
#include "agora/models.hpp"
#include "agora/preprocess.hpp"

namespace agora::bench {

// Detection models of the grid: the three dictionary detectors and the five
// supervised classifiers, in table order.
inline const std::vector<std::string> kAllModels{"Di-CAP", "Di-LL", "Di-CAP-LL", "PA",
                                                 "BNB",    "MNB",   "LR",        "SGD"};

bool is_dictionary_model(const std::string& name);
// Validates a model name; accepts "SML [PA]" style spellings too.
std::string canonical_model_name(const std::string& name);
// "SML [PA]" for classifiers, the name itself for dictionaries.
std::string display_name(const std::string& model);

struct NamedCorpus {
  std::string name;
  corpus::LabeledCorpus corpus;
};

struct BenchmarkInput {
  corpus::LabeledCorpus train;
  std::vector<NamedCorpus> eval_sets;
  dict::Dictionary curated;  // surface-form curated dictionary for Di-CAP
  text::Preprocessor preprocessor;
  std::vector<std::string> models = kAllModels;
  std::vector<text::PreprocessMode> modes{text::kAllModes.begin(), text::kAllModes.end()};
  std::size_t ll_top_k = 100;
  sml::Hyperparameters hyperparameters;
  std::optional<std::size_t> max_features;
  std::uint64_t seed = 42;
  unsigned jobs = 1;
};

struct GridCell {
  std::string model;
  text::PreprocessMode mode = text::PreprocessMode::None;
  std::string eval_set;
  bool ok = false;
  std::string error;
  eval::ConfusionMatrix cm;
  eval::EvalReport report;
  std::optional<double> theta;  // dictionary detectors only

  double f1_political() const { return report.political.f1; }
  double f1_macro() const { return report.macro.f1; }
};

struct BenchmarkResult {
  std::vector<std::string> models;
  std::vector<text::PreprocessMode> modes;
  std::vector<std::string> eval_sets;
  // Ordered by model, then mode, then eval set.
  std::vector<GridCell> cells;

  const GridCell& at(const std::string& model, text::PreprocessMode mode,
                     const std::string& eval_set) const;
  std::size_t failed() const;
};

// Every (model, mode) pair is one job; a failing job marks its cells failed
// and the grid carries on. Dictionary thresholds are calibrated per eval set
// and the most consistent candidate across eval sets is applied to all.
// Results do not depend on `jobs`.
BenchmarkResult run_benchmark(const BenchmarkInput& input);

}  // namespace agora::bench
