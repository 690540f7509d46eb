#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agora/benchmark.hpp"
#include "agora/models.hpp"
#include "agora/preprocess.hpp"

namespace agora::config {

struct SplitConfig {
  std::string eval_name = "TVD";  // name of the held-out part in the grid
  double test_fraction = 0.2;
  bool stratified = true;
};

// Benchmark run description. Relative paths resolve against the directory
// of the config file; empty resource paths mean the bundled data files.
struct RunConfig {
  std::filesystem::path train;
  std::optional<SplitConfig> split;
  std::vector<std::pair<std::string, std::filesystem::path>> eval_sets;
  std::filesystem::path curated_dictionary;
  std::filesystem::path stopwords;
  std::filesystem::path lemmas;
  std::filesystem::path label_map;
  std::filesystem::path denylist;
  std::filesystem::path output_dir = "benchmark_out";
  std::vector<text::PreprocessMode> modes{text::kAllModes.begin(), text::kAllModes.end()};
  std::vector<std::string> models = bench::kAllModels;
  std::uint64_t seed = 42;
  std::vector<double> prob_grid{0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40};
  std::size_t ll_top_k = 100;
  std::optional<std::size_t> max_features;
  sml::Hyperparameters hyperparameters;
  unsigned jobs = 1;
};

// Parses and validates everything up front: unknown keys, bad modes or
// models, missing files and an empty model/mode list are all errors.
RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// Loads corpora and resources; applies the denylist and the optional split.
bench::BenchmarkInput prepare_benchmark(const RunConfig& cfg);

}  // namespace agora::config
