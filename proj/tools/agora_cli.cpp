// agora: command-line front end for political content detection.
//
//   agora extract    --in pages/ --out corpus.jsonl
//   agora build-dict --train train.jsonl --mode none --top-k 100 --out di_ll.txt
//   agora calibrate  --dict di_cap.txt --datasets a.jsonl b.jsonl --mode none --out thr.json
//   agora train      --model PA --train train.jsonl --mode stem --out pa.json
//   agora eval       --model pa.json --data test.jsonl --out report
//   agora benchmark  --config run.json --jobs 4
//
// Logs go to stderr, data only to the files named on the command line.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "agora/benchmark.hpp"
#include "agora/config.hpp"
#include "agora/corpus.hpp"
#include "agora/dictionary.hpp"
#include "agora/error.hpp"
#include "agora/html_extract.hpp"
#include "agora/model_io.hpp"
#include "agora/models.hpp"
#include "agora/report.hpp"
#include "agora/resources.hpp"
#include "agora/sweep.hpp"
#include "agora/unicode.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::uint64_t seed = 42;
  std::string mode = "none";
  std::string stopwords;
  std::string lemmas;
  std::string label_map;
};

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw agora::Error("cannot write " + p.string());
  return out;
}

agora::corpus::LoadOptions load_options(const Common& c) {
  agora::corpus::LoadOptions opts;
  if (!c.label_map.empty()) opts.label_map = agora::corpus::LabelMap::load(c.label_map);
  return opts;
}

// ---- extract -------------------------------------------------------------

struct ExtractArgs {
  std::string in;
  std::string out;
  std::string encoding;
};

int run_extract(const ExtractArgs& a) {
  std::vector<fs::path> files;
  if (fs::is_directory(a.in)) {
    for (const auto& e : fs::directory_iterator(a.in))
      if (e.is_regular_file()) {
        const auto ext = agora::unicode::ascii_lower(e.path().extension().string());
        if (ext == ".html" || ext == ".htm") files.push_back(e.path());
      }
  } else if (fs::is_regular_file(a.in)) {
    files.push_back(a.in);
  } else {
    throw agora::Error("no such file or directory: " + a.in);
  }
  std::sort(files.begin(), files.end());

  std::vector<agora::corpus::Document> docs;
  for (const auto& f : files) {
    try {
      std::ifstream in(f, std::ios::binary);
      if (!in) throw agora::Error("cannot read");
      std::stringstream ss;
      ss << in.rdbuf();
      agora::html::HtmlPage page{ss.str(), std::nullopt};
      if (!a.encoding.empty()) page.declared_encoding = a.encoding;
      const auto extracted = agora::html::extract_text(page);
      if (extracted.text.find("\xEF\xBF\xBD") != std::string::npos)
        spdlog::warn("{}: undecodable bytes replaced with U+FFFD", f.string());
      if (extracted.noise_score > 0.3)
        spdlog::warn("{}: noisy extraction (noise score {:.3f})", f.string(), extracted.noise_score);
      agora::corpus::Document d;
      d.id = f.stem().string();
      d.text = extracted.text;
      d.source = f.filename().string();
      docs.push_back(std::move(d));
    } catch (const std::exception& e) {
      spdlog::warn("{}: skipped ({})", f.string(), e.what());
    }
  }
  auto out = open_out(a.out);
  agora::corpus::write_jsonl(out, docs);
  spdlog::info("extracted {} documents to {}", docs.size(), a.out);
  return 0;
}

// ---- build-dict ------------------------------------------------------------

struct BuildDictArgs {
  std::string train;
  std::size_t top_k = 100;
  std::string out;
  std::string name = "Di-LL";
};

int run_build_dict(const BuildDictArgs& a, const Common& c) {
  const auto mode = agora::text::parse_mode(c.mode);
  const auto pre = agora::load_preprocessor(c.stopwords, c.lemmas);
  const auto train = agora::corpus::load_labeled_jsonl(a.train, load_options(c));
  if (!train.has_both_classes())
    throw agora::Error("training corpus needs political and non-political documents");

  std::vector<agora::text::TokenizedDoc> docs;
  for (const auto& d : train.documents()) docs.push_back(pre.apply(d.text, mode, d.id));
  const auto labels = train.labels();
  const auto dictionary = agora::dict::build_ll_dictionary(docs, labels, mode, a.top_k, a.name);

  // Entries in keyness order.
  std::vector<agora::dict::Entry> order;
  for (const auto& e : agora::dict::keyness_table(docs, labels))
    if (dictionary.contains({e.term})) order.push_back({e.term});
  auto out = open_out(a.out);
  agora::dict::write_dictionary(out, dictionary, order);
  spdlog::info("wrote {} entries to {}", dictionary.size(), a.out);
  return 0;
}

// ---- calibrate -------------------------------------------------------------

struct CalibrateArgs {
  std::string dict;
  std::vector<std::string> datasets;
  std::string out;
};

int run_calibrate(const CalibrateArgs& a, const Common& c) {
  const auto mode = agora::text::parse_mode(c.mode);
  const auto pre = agora::load_preprocessor(c.stopwords, c.lemmas);
  const auto dictionary =
      agora::dict::load_dictionary(a.dict, fs::path(a.dict).stem().string()).normalized(mode, pre);
  const auto opts = load_options(c);

  std::vector<agora::dict::ScoredDataset> scored;
  std::vector<double> candidates;
  json per_dataset = json::array();
  for (const auto& path : a.datasets) {
    const auto corpus = agora::corpus::load_labeled_jsonl(path, opts);
    if (!corpus.has_both_classes())
      throw agora::Error(path + ": calibration needs both classes");
    auto s = agora::dict::score_dataset(fs::path(path).stem().string(), corpus, dictionary, mode, pre);
    const auto cal = agora::dict::calibrate_threshold(s.ratios, s.gold);
    candidates.push_back(cal.theta);
    per_dataset.push_back({{"dataset", s.name}, {"theta", cal.theta}, {"macro_f1", cal.macro_f1}});
    scored.push_back(std::move(s));
  }
  const auto chosen = agora::dict::select_consistent_threshold(candidates, scored);
  for (std::size_t i = 0; i < scored.size(); ++i)
    per_dataset[i]["macro_f1_at_selected"] = agora::dict::macro_f1_at(scored[i], chosen.theta);

  json report = {{"dictionary", dictionary.name()},
                 {"mode", std::string(agora::text::to_string(mode))},
                 {"theta", chosen.theta},
                 {"macro_f1", chosen.mean_macro_f1},
                 {"per_dataset", per_dataset}};
  auto out = open_out(a.out);
  out << report.dump(2) << '\n';
  spdlog::info("theta = {} (mean macro F1 {:.4f})", chosen.theta, chosen.mean_macro_f1);
  return 0;
}

// ---- train -----------------------------------------------------------------

struct TrainArgs {
  std::string model;
  std::string train;
  std::string out;
  std::string hyper;
  std::size_t max_features = 0;
};

int run_train(const TrainArgs& a, const Common& c) {
  const auto kind = agora::sml::parse_model_kind(a.model);
  const auto mode = agora::text::parse_mode(c.mode);
  const auto pre = agora::load_preprocessor(c.stopwords, c.lemmas);
  const auto train = agora::corpus::load_labeled_jsonl(a.train, load_options(c));

  agora::sml::Hyperparameters hp;
  if (!a.hyper.empty()) {
    std::ifstream in(a.hyper);
    if (!in) throw agora::Error("cannot open hyperparameter file: " + a.hyper);
    hp = agora::sml::hyperparameters_from_json(json::parse(in));
  }
  std::vector<agora::text::TokenizedDoc> docs;
  for (const auto& d : train.documents()) docs.push_back(pre.apply(d.text, mode, d.id));
  auto space = agora::sml::FeatureSpace::fit(
      docs, a.max_features ? std::optional<std::size_t>(a.max_features) : std::nullopt);
  std::vector<agora::sml::Example> examples;
  const auto labels = train.labels();
  for (std::size_t i = 0; i < docs.size(); ++i)
    examples.push_back({space.vectorize(docs[i].tokens), labels[i]});
  auto model = agora::sml::train(kind, std::move(space), examples, hp, c.seed);
  model.mode = mode;
  agora::sml::save_model(a.out, model);
  spdlog::info("trained {} on {} documents ({} features) -> {}", a.model, docs.size(),
               model.feature_space.size(), a.out);
  return 0;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string model;
  std::string dict;
  double theta = -1.0;
  std::string data;
  std::string out = "report";
  double threshold = 0.0;
  bool sweep = false;
  std::vector<double> grid = agora::eval::kDefaultProbGrid;
  bool mode_given = false;
};

int run_eval(const EvalArgs& a, const Common& c) {
  const auto pre = agora::load_preprocessor(c.stopwords, c.lemmas);
  const auto data = agora::corpus::load_labeled_jsonl(a.data, load_options(c));
  const auto gold = data.labels();
  std::vector<agora::Label> pred;
  std::string model_name;
  agora::text::PreprocessMode mode = agora::text::parse_mode(c.mode);
  std::optional<agora::eval::SweepResult> sweep;

  if (!a.model.empty()) {
    const auto model = agora::sml::load_model(a.model);
    if (!a.mode_given) mode = model.mode;
    model_name = std::string(agora::sml::to_string(model.kind));
    std::vector<agora::sml::Example> examples;
    for (const auto& d : data.documents())
      examples.push_back({model.feature_space.vectorize(pre.apply(d.text, mode, d.id).tokens),
                          *d.label});
    for (const auto& e : examples) {
      if (a.threshold > 0.0)
        pred.push_back(agora::sml::classify_with_threshold(model, e.x, agora::sml::ProbThreshold(a.threshold)));
      else
        pred.push_back(agora::sml::predict(model, e.x));
    }
    if (a.sweep) sweep = agora::eval::sweep_prob_threshold(model, examples, a.grid);
  } else {
    if (a.dict.empty() || a.theta < 0.0)
      throw agora::Error("eval needs --model, or --dict together with --theta");
    if (a.theta > 1.0) throw agora::Error("--theta must lie in [0, 1]");
    const auto dictionary =
        agora::dict::load_dictionary(a.dict, fs::path(a.dict).stem().string()).normalized(mode, pre);
    model_name = dictionary.name();
    for (const auto& d : data.documents())
      pred.push_back(agora::dict::classify(
          agora::dict::score_document(pre.apply(d.text, mode, d.id), dictionary), a.theta));
  }

  const auto cm = agora::eval::confusion(gold, pred);
  const std::string set_name = fs::path(a.data).stem().string();
  {
    auto out = open_out(a.out + ".csv");
    agora::report::write_csv_header(out);
    agora::report::write_csv_row(out, model_name, mode, set_name, cm);
  }
  {
    auto out = open_out(a.out + ".md");
    agora::report::write_report_markdown(
        out, model_name + " / " + agora::report::mode_title(mode) + " / " + set_name, cm);
  }
  if (sweep) {
    auto out = open_out(a.out + "_sweep.csv");
    out << "p,f1_macro\n";
    for (const auto& [p, f1] : sweep->table) out << p << ',' << f1 << '\n';
    spdlog::info("best probability threshold {} (macro F1 {:.4f})", sweep->best_p, sweep->best_macro_f1);
  }
  const auto r = agora::eval::macro_report(cm);
  spdlog::info("{}: {}", set_name, agora::eval::format_cell(r.political.f1, r.macro.f1));
  return 0;
}

// ---- benchmark -------------------------------------------------------------

struct BenchmarkArgs {
  std::string config;
  unsigned jobs = 0;
  std::string out;
};

int run_benchmark(const BenchmarkArgs& a, const Common& c, bool seed_given) {
  auto cfg = agora::config::load_run_config(a.config);
  if (a.jobs > 0) cfg.jobs = a.jobs;
  if (!a.out.empty()) cfg.output_dir = a.out;
  if (seed_given) cfg.seed = c.seed;
  const auto input = agora::config::prepare_benchmark(cfg);
  spdlog::info("benchmark: {} models x {} modes x {} eval sets", input.models.size(),
               input.modes.size(), input.eval_sets.size());
  const auto result = agora::bench::run_benchmark(input);

  fs::create_directories(cfg.output_dir);
  {
    auto out = open_out(cfg.output_dir / "grid.csv");
    agora::report::write_grid_csv(out, result);
  }
  {
    auto out = open_out(cfg.output_dir / "grid.md");
    agora::report::write_grid_markdown(out, result);
  }
  {
    json thresholds = json::array();
    for (const auto& cell : result.cells)
      if (cell.theta && cell.eval_set == result.eval_sets.front())
        thresholds.push_back({{"model", cell.model},
                              {"mode", std::string(agora::text::to_string(cell.mode))},
                              {"theta", *cell.theta}});
    auto out = open_out(cfg.output_dir / "thresholds.json");
    out << thresholds.dump(2) << '\n';
  }
  spdlog::info("{} cells written to {} ({} failed)", result.cells.size(),
               cfg.output_dir.string(), result.failed());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("agora"));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Political content detection toolkit"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub, bool with_mode) {
    sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    if (with_mode)
      sub->add_option("--mode", common.mode, "none|stop|stem|stem-stop|lemma|lemma-stop")
          ->capture_default_str();
    sub->add_option("--stopwords", common.stopwords, "Stopword file (default: bundled list)");
    sub->add_option("--lemmas", common.lemmas, "Lemma table TSV (default: bundled table)");
    sub->add_option("--label-map", common.label_map, "JSON tag->label map for unlabeled documents");
  };

  ExtractArgs extract;
  auto* ex = app.add_subcommand("extract", "Extract visible text from HTML files into JSONL");
  ex->add_option("--in", extract.in, "HTML file or directory")->required();
  ex->add_option("--out", extract.out, "Output JSONL")->required();
  ex->add_option("--encoding", extract.encoding, "Declared input encoding");
  ex->add_option("--seed", common.seed, "Random seed (unused)");

  BuildDictArgs build;
  auto* bd = app.add_subcommand("build-dict", "Build a log-likelihood keyness dictionary");
  bd->add_option("--train", build.train, "Labeled training JSONL")->required();
  bd->add_option("--top-k", build.top_k, "Number of terms")->capture_default_str();
  bd->add_option("--out", build.out, "Output dictionary file")->required();
  bd->add_option("--name", build.name, "Dictionary name")->capture_default_str();
  add_common(bd, true);

  CalibrateArgs cal;
  auto* cb = app.add_subcommand("calibrate", "Calibrate a dictionary ratio threshold");
  cb->add_option("--dict", cal.dict, "Dictionary file")->required();
  cb->add_option("--datasets", cal.datasets, "Labeled JSONL datasets")->required()->expected(1, -1);
  cb->add_option("--out", cal.out, "Output threshold JSON")->required();
  add_common(cb, true);

  TrainArgs tr;
  auto* tn = app.add_subcommand("train", "Train a bag-of-words classifier");
  tn->add_option("--model", tr.model, "MNB|BNB|LR|PA|SGD")->required();
  tn->add_option("--train", tr.train, "Labeled training JSONL")->required();
  tn->add_option("--out", tr.out, "Output model JSON")->required();
  tn->add_option("--hyperparameters", tr.hyper, "JSON file overriding defaults");
  tn->add_option("--max-features", tr.max_features, "Cap the vocabulary (0 = uncapped)");
  add_common(tn, true);

  EvalArgs ev;
  auto* el = app.add_subcommand("eval", "Evaluate a model or dictionary on labeled data");
  el->add_option("--model", ev.model, "Model JSON from `train`");
  el->add_option("--dict", ev.dict, "Dictionary file");
  el->add_option("--theta", ev.theta, "Ratio threshold for --dict");
  el->add_option("--data", ev.data, "Labeled JSONL")->required();
  el->add_option("--out", ev.out, "Output prefix (.csv and .md)")->capture_default_str();
  el->add_option("--threshold", ev.threshold, "Probability cut for probabilistic models");
  el->add_flag("--sweep", ev.sweep, "Also sweep probability thresholds");
  el->add_option("--grid", ev.grid, "Probability grid for --sweep");
  add_common(el, true);

  BenchmarkArgs bm;
  auto* bn = app.add_subcommand("benchmark", "Run the model x preprocessing grid");
  bn->add_option("--config", bm.config, "Run config JSON")->required();
  bn->add_option("--jobs", bm.jobs, "Parallel jobs (overrides config)");
  bn->add_option("--out", bm.out, "Output directory (overrides config)");
  bn->add_option("--seed", common.seed, "Random seed (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ex->parsed()) return run_extract(extract);
    if (bd->parsed()) return run_build_dict(build, common);
    if (cb->parsed()) return run_calibrate(cal, common);
    if (tn->parsed()) return run_train(tr, common);
    if (el->parsed()) {
      ev.mode_given = el->count("--mode") > 0;
      return run_eval(ev, common);
    }
    if (bn->parsed()) return run_benchmark(bm, common, bn->count("--seed") > 0);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 1;
}
