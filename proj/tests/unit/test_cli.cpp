#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "agora/config.hpp"
#include "agora/corpus.hpp"
#include "agora/error.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;
using namespace agora;

namespace {

struct Run {
  int code = -1;
  std::string err;
};

Run agora_cli(const std::string& args, const fs::path& dir) {
  const auto err_path = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + AGORA_CLI_PATH + "\" " + args + " 2> \"" + err_path.string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

void write(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config validation") {
  const auto dir = synth::temp_dir("config");
  corpus::save_jsonl(dir / "train.jsonl", synth::corpus(5, 5, 1));
  const auto ok = config::parse_run_config(R"({"train": "train.jsonl", "split": {}})", dir);
  CHECK(ok.train == dir / "train.jsonl");
  CHECK(ok.split->test_fraction == 0.2);
  CHECK(ok.models.size() == 8);
  CHECK(ok.modes.size() == 6);
  CHECK(ok.seed == 42);

  const auto custom = config::parse_run_config(
      R"({"train": "train.jsonl", "eval_sets": {"X": "train.jsonl"}, "models": ["SML [LR]", "Di-LL"],
          "modes": ["stem-stop"], "seed": 7, "jobs": 3, "hyperparameters": {"pa_c": 0.5}})",
      dir);
  CHECK(custom.models == std::vector<std::string>{"LR", "Di-LL"});
  CHECK(custom.modes == std::vector<text::PreprocessMode>{text::PreprocessMode::StemStop});
  CHECK(custom.hyperparameters.pa_c == 0.5);
  CHECK(custom.jobs == 3);

  for (const char* bad : {R"({"train": "train.jsonl", "split": {}, "typo": 1})",
                          R"({"train": "missing.jsonl", "split": {}})",
                          R"({"train": "train.jsonl"})",
                          R"({"train": "train.jsonl", "split": {}, "models": []})",
                          R"({"train": "train.jsonl", "split": {}, "modes": ["stemming"]})",
                          R"({"train": "train.jsonl", "split": {}, "models": ["BERT"]})",
                          R"({"train": "train.jsonl", "split": {"test_fraction": 1.5}})",
                          R"({"train": "train.jsonl", "split": {}, "stopwords": "nope.txt"})",
                          R"([1, 2])", "{"}) {
    INFO(bad);
    CHECK_THROWS_AS(config::parse_run_config(bad, dir), Error);
  }
  fs::remove_all(dir);
}

TEST_CASE("extract") {
  const auto dir = synth::temp_dir("extract");
  fs::create_directories(dir / "pages");
  write(dir / "pages/a.html", "<p>Hallo <b>Welt</b></p>");
  write(dir / "pages/b.html", "<script>x</script>Politik");
  write(dir / "pages/c.htm", "<div><p>a<div>b");
  write(dir / "pages/notes.txt", "ignored");
  auto r = agora_cli("extract --in " + q(dir / "pages") + " --out " + q(dir / "out.jsonl"), dir);
  CHECK(r.code == 0);
  const auto docs = corpus::load_jsonl(dir / "out.jsonl");
  REQUIRE(docs.size() == 3);
  CHECK(docs[0].id == "a");
  CHECK(docs[0].text == "Hallo Welt");
  CHECK(docs[2].text == "a b");

  fs::create_directories(dir / "empty");
  r = agora_cli("extract --in " + q(dir / "empty") + " --out " + q(dir / "empty.jsonl"), dir);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "empty.jsonl"));
  CHECK(fs::file_size(dir / "empty.jsonl") == 0);

  fs::create_directories(dir / "junk");
  std::string garbage;
  for (int i = 0; i < 256; ++i) garbage += static_cast<char>(255 - i);
  write(dir / "junk/g.html", garbage);
  r = agora_cli("extract --in " + q(dir / "junk") + " --out " + q(dir / "junk.jsonl"), dir);
  CHECK(r.code == 0);
  CHECK(corpus::load_jsonl(dir / "junk.jsonl").front().text.find("\xEF\xBF\xBD") != std::string::npos);
  CHECK(r.err.find("warn") != std::string::npos);

  CHECK(agora_cli("extract --in " + q(dir / "nowhere") + " --out " + q(dir / "x.jsonl"), dir).code != 0);
  fs::remove_all(dir);
}

TEST_CASE("build-dict, calibrate, train and eval") {
  const auto dir = synth::temp_dir("pipeline");
  corpus::save_jsonl(dir / "train.jsonl", synth::corpus(40, 40, 1, "t", 0.2));
  corpus::save_jsonl(dir / "a.jsonl", synth::corpus(15, 15, 2, "a", 0.2));
  corpus::save_jsonl(dir / "b.jsonl", synth::corpus(10, 20, 3, "b", 0.3));

  auto r = agora_cli("build-dict --train " + q(dir / "train.jsonl") + " --mode stem --top-k 100 --out " +
                         q(dir / "ll.txt"),
                     dir);
  CHECK(r.code == 0);
  const auto dict_text = slurp(dir / "ll.txt");
  CHECK(dict_text.rfind("# dictionary=Di-LL provenance=keyness mode=stem\n", 0) == 0);
  CHECK(lines(dict_text) - 1 <= 100);
  CHECK(lines(dict_text) - 1 >= 10);

  r = agora_cli("build-dict --train " + q(dir / "train.jsonl") + " --top-k 1 --out " + q(dir / "top1.txt"), dir);
  CHECK(r.code == 0);
  CHECK(lines(slurp(dir / "top1.txt")) == 2);

  std::vector<corpus::Document> unlabeled = synth::corpus(3, 3, 1);
  for (auto& d : unlabeled) d.label.reset();
  corpus::save_jsonl(dir / "unlabeled.jsonl", unlabeled);
  r = agora_cli("build-dict --train " + q(dir / "unlabeled.jsonl") + " --out " + q(dir / "u.txt"), dir);
  CHECK(r.code != 0);
  CHECK(r.err.find("label") != std::string::npos);

  r = agora_cli("calibrate --dict " + q(dir / "ll.txt") + " --mode stem --datasets " + q(dir / "a.jsonl") + " " +
                    q(dir / "b.jsonl") + " --out " + q(dir / "thr.json"),
                dir);
  CHECK(r.code == 0);
  const auto thr = nlohmann::json::parse(slurp(dir / "thr.json"));
  CHECK(thr["dictionary"] == "ll");
  CHECK(thr["mode"] == "stem");
  CHECK(thr["per_dataset"].size() == 2);
  const double theta = thr["theta"].get<double>();
  CHECK(theta >= 0.0);
  CHECK(theta <= 1.0);

  std::ostringstream theta_str;
  theta_str.precision(17);
  theta_str << theta;
  r = agora_cli("eval --dict " + q(dir / "ll.txt") + " --theta " + theta_str.str() + " --mode stem --data " +
                    q(dir / "a.jsonl") + " --out " + q(dir / "dict_report"),
                dir);
  CHECK(r.code == 0);
  CHECK(lines(slurp(dir / "dict_report.csv")) == 2);
  CHECK(fs::exists(dir / "dict_report.md"));

  r = agora_cli("train --model LR --train " + q(dir / "train.jsonl") + " --mode lemma --out " + q(dir / "lr.json"), dir);
  CHECK(r.code == 0);
  const auto model_a = slurp(dir / "lr.json");
  r = agora_cli("train --model LR --train " + q(dir / "train.jsonl") + " --mode lemma --out " + q(dir / "lr2.json"), dir);
  CHECK(model_a == slurp(dir / "lr2.json"));

  r = agora_cli("eval --model " + q(dir / "lr.json") + " --data " + q(dir / "a.jsonl") + " --sweep --out " +
                    q(dir / "lr_report"),
                dir);
  CHECK(r.code == 0);
  const auto csv = slurp(dir / "lr_report.csv");
  CHECK(csv.find("\nLR,lemma,a,") != std::string::npos);
  CHECK(lines(slurp(dir / "lr_report_sweep.csv")) == 9);

  CHECK(agora_cli("train --model PA --train " + q(dir / "train.jsonl") + " --out " + q(dir / "pa.json"), dir).code == 0);
  r = agora_cli("eval --model " + q(dir / "pa.json") + " --data " + q(dir / "a.jsonl") + " --threshold 0.15 --out " +
                    q(dir / "pa_report"),
                dir);
  CHECK(r.code != 0);
  CHECK(r.err.find("margin model has no calibrated probability") != std::string::npos);

  CHECK(agora_cli("train --model SVM --train " + q(dir / "train.jsonl") + " --out " + q(dir / "x.json"), dir).code != 0);
  CHECK(agora_cli("eval --data " + q(dir / "a.jsonl"), dir).code != 0);
  CHECK(agora_cli("frobnicate", dir).code != 0);
  fs::remove_all(dir);
}

TEST_CASE("benchmark subcommand") {
  const auto dir = synth::temp_dir("bench");
  corpus::save_jsonl(dir / "train.jsonl", synth::corpus(30, 30, 1, "t", 0.2));
  corpus::save_jsonl(dir / "dvd.jsonl", synth::corpus(10, 10, 2, "d", 0.2));
  write(dir / "run.json", R"({"train": "train.jsonl", "split": {"eval_name": "TVD"},
      "eval_sets": {"DVD": "dvd.jsonl"}, "models": ["Di-CAP", "PA", "MNB"], "modes": ["none", "stop"],
      "output_dir": "out"})");
  auto r = agora_cli("benchmark --config " + q(dir / "run.json"), dir);
  CHECK(r.code == 0);
  const auto csv = slurp(dir / "out/grid.csv");
  CHECK(lines(csv) == 1 + 3 * 2 * 2);
  CHECK(csv.find(",TVD,") != std::string::npos);
  CHECK(fs::exists(dir / "out/grid.md"));
  const auto thresholds = nlohmann::json::parse(slurp(dir / "out/thresholds.json"));
  CHECK(thresholds.size() == 2);

  r = agora_cli("benchmark --jobs 3 --out " + q(dir / "out2") + " --config " + q(dir / "run.json"), dir);
  CHECK(r.code == 0);
  CHECK(slurp(dir / "out2/grid.csv") == csv);
  CHECK(slurp(dir / "out2/grid.md") == slurp(dir / "out/grid.md"));

  write(dir / "bad.json", R"({"train": "train.jsonl", "split": {}, "modes": []})");
  r = agora_cli("benchmark --config " + q(dir / "bad.json"), dir);
  CHECK(r.code != 0);
  CHECK(r.err.find("modes") != std::string::npos);
  fs::remove_all(dir);
}

}
