#include "agora/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "agora/error.hpp"
#include "agora/model_io.hpp"
#include "agora/resources.hpp"

namespace agora::config {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

void require_file(const fs::path& p, const std::string& what) {
  if (!p.empty() && !fs::is_regular_file(p)) throw Error(what + " not found: " + p.string());
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("config must be a JSON object");

  static const std::set<std::string> known{
      "train",  "split",     "eval_sets",  "curated_dictionary", "stopwords",
      "lemmas", "label_map", "denylist",   "output_dir",         "modes",
      "models", "seed",      "prob_grid",  "ll_top_k",           "max_features",
      "hyperparameters",     "jobs"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw Error("config: unknown key '" + key + "'");

  RunConfig cfg;
  try {
    cfg.train = resolve(base_dir, j.at("train").get<std::string>());
    if (auto it = j.find("split"); it != j.end()) {
      SplitConfig s;
      s.eval_name = it->value("eval_name", s.eval_name);
      s.test_fraction = it->value("test_fraction", s.test_fraction);
      s.stratified = it->value("stratified", s.stratified);
      if (!(s.test_fraction > 0.0 && s.test_fraction < 1.0))
        throw Error("config: split.test_fraction must lie strictly between 0 and 1");
      cfg.split = s;
    }
    if (auto it = j.find("eval_sets"); it != j.end()) {
      if (!it->is_object()) throw Error("config: eval_sets must map names to JSONL paths");
      for (const auto& [name, path] : it->items())
        cfg.eval_sets.emplace_back(name, resolve(base_dir, path.get<std::string>()));
    }
    cfg.curated_dictionary = resolve(base_dir, j.value("curated_dictionary", ""));
    cfg.stopwords = resolve(base_dir, j.value("stopwords", ""));
    cfg.lemmas = resolve(base_dir, j.value("lemmas", ""));
    cfg.label_map = resolve(base_dir, j.value("label_map", ""));
    cfg.denylist = resolve(base_dir, j.value("denylist", ""));
    if (auto it = j.find("output_dir"); it != j.end())
      cfg.output_dir = resolve(base_dir, it->get<std::string>());
    if (auto it = j.find("modes"); it != j.end()) {
      cfg.modes.clear();
      for (const auto& m : *it) cfg.modes.push_back(text::parse_mode(m.get<std::string>()));
    }
    if (auto it = j.find("models"); it != j.end()) {
      cfg.models.clear();
      for (const auto& m : *it) cfg.models.push_back(bench::canonical_model_name(m.get<std::string>()));
    }
    cfg.seed = j.value("seed", cfg.seed);
    if (auto it = j.find("prob_grid"); it != j.end()) cfg.prob_grid = it->get<std::vector<double>>();
    cfg.ll_top_k = j.value("ll_top_k", cfg.ll_top_k);
    if (auto it = j.find("max_features"); it != j.end() && !it->is_null())
      cfg.max_features = it->get<std::size_t>();
    if (auto it = j.find("hyperparameters"); it != j.end())
      cfg.hyperparameters = sml::hyperparameters_from_json(*it);
    cfg.jobs = j.value("jobs", cfg.jobs);
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }

  if (cfg.modes.empty()) throw Error("config: modes must not be empty");
  if (cfg.models.empty()) throw Error("config: models must not be empty");
  if (cfg.eval_sets.empty() && !cfg.split)
    throw Error("config: give eval_sets, a split, or both");
  if (cfg.ll_top_k == 0) throw Error("config: ll_top_k must be at least 1");
  if (cfg.prob_grid.empty()) throw Error("config: prob_grid must not be empty");
  for (const double p : cfg.prob_grid)
    if (!(p > 0.0 && p < 1.0)) throw Error("config: prob_grid values must lie in (0, 1)");
  std::set<std::string> names;
  if (cfg.split) names.insert(cfg.split->eval_name);
  for (const auto& [name, path] : cfg.eval_sets) {
    if (!names.insert(name).second) throw Error("config: duplicate eval set name '" + name + "'");
    require_file(path, "eval set '" + name + "'");
  }
  require_file(cfg.train, "training corpus");
  require_file(cfg.curated_dictionary, "curated dictionary");
  require_file(cfg.stopwords, "stopword file");
  require_file(cfg.lemmas, "lemma table");
  require_file(cfg.label_map, "label map");
  require_file(cfg.denylist, "denylist");
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path());
}

bench::BenchmarkInput prepare_benchmark(const RunConfig& cfg) {
  corpus::LoadOptions opts;
  if (!cfg.label_map.empty()) opts.label_map = corpus::LabelMap::load(cfg.label_map);
  const corpus::Denylist denylist =
      cfg.denylist.empty() ? corpus::Denylist{} : corpus::Denylist::load(cfg.denylist);

  auto load = [&](const fs::path& p) {
    auto docs = corpus::load_jsonl(p, opts);
    const auto before = docs.size();
    docs = corpus::filter_denylist(std::move(docs), denylist);
    if (docs.size() != before)
      spdlog::info("{}: denylist removed {} documents", p.string(), before - docs.size());
    for (const auto& d : docs)
      if (!d.label) throw Error(p.string() + ": document '" + d.id + "' has no label");
    return corpus::LabeledCorpus(std::move(docs));
  };

  bench::BenchmarkInput in;
  in.train = load(cfg.train);
  if (cfg.split) {
    auto [train, test] = corpus::split_train_test(
        in.train, {cfg.split->test_fraction, cfg.seed, cfg.split->stratified});
    in.train = std::move(train);
    in.eval_sets.push_back({cfg.split->eval_name, std::move(test)});
  }
  for (const auto& [name, path] : cfg.eval_sets) in.eval_sets.push_back({name, load(path)});
  in.curated = dict::load_dictionary(
      cfg.curated_dictionary.empty() ? default_curated_dictionary_path() : cfg.curated_dictionary,
      "Di-CAP");
  in.preprocessor = load_preprocessor(cfg.stopwords, cfg.lemmas);
  in.models = cfg.models;
  in.modes = cfg.modes;
  in.ll_top_k = cfg.ll_top_k;
  in.hyperparameters = cfg.hyperparameters;
  in.max_features = cfg.max_features;
  in.seed = cfg.seed;
  in.jobs = cfg.jobs;
  return in;
}

}  // namespace agora::config
