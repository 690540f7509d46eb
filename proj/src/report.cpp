#include "agora/report.hpp"

#include <ostream>

#include <fmt/format.h>

namespace agora::report {

namespace {

// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string mode_title(text::PreprocessMode mode) {
  using text::PreprocessMode;
  switch (mode) {
    case PreprocessMode::None: return "No preprocessing";
    case PreprocessMode::Stop: return "Stopword removal";
    case PreprocessMode::Stem: return "Stemming";
    case PreprocessMode::StemStop: return "Stemming + stopword removal";
    case PreprocessMode::Lemma: return "Lemmatisation";
    case PreprocessMode::LemmaStop: return "Lemmatisation + stopword removal";
  }
  return {};
}

void write_csv_header(std::ostream& out) {
  out << "model,mode,eval_set,tp,fp,fn,tn,p_pol,r_pol,f1_pol,p_non,r_non,f1_non,f1_macro,status,error\n";
}

void write_csv_row(std::ostream& out, const std::string& model, text::PreprocessMode mode,
                   const std::string& eval_set, const eval::ConfusionMatrix& cm,
                   const std::string& status, const std::string& error) {
  out << csv_field(model) << ',' << text::to_string(mode) << ',' << csv_field(eval_set) << ',';
  if (status != "ok") {
    out << ",,,,,,,,,,," << status << ',' << csv_field(error) << '\n';
    return;
  }
  const auto r = eval::macro_report(cm);
  out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},ok,\n", cm.tp, cm.fp, cm.fn, cm.tn,
                     r.political.precision, r.political.recall, r.political.f1,
                     r.non_political.precision, r.non_political.recall, r.non_political.f1,
                     r.macro.f1);
}

void write_grid_csv(std::ostream& out, const bench::BenchmarkResult& result) {
  write_csv_header(out);
  for (const auto& c : result.cells)
    write_csv_row(out, c.model, c.mode, c.eval_set, c.cm, c.ok ? "ok" : "failed", c.error);
}

void write_grid_markdown(std::ostream& out, const bench::BenchmarkResult& result) {
  for (const auto& set : result.eval_sets) {
    out << "## " << set << "\n\n|";
    for (const auto mode : result.modes) out << " | " << mode_title(mode);
    out << " |\n|---";
    for (std::size_t i = 0; i < result.modes.size(); ++i) out << "|---";
    out << "|\n";
    for (const auto& model : result.models) {
      out << "| " << bench::display_name(model);
      for (const auto mode : result.modes) {
        const auto& cell = result.at(model, mode, set);
        out << " | " << (cell.ok ? eval::format_cell(cell.f1_political(), cell.f1_macro()) : "failed");
      }
      out << " |\n";
    }
    out << '\n';
  }
}

void write_report_markdown(std::ostream& out, const std::string& title,
                           const eval::ConfusionMatrix& cm) {
  const auto r = eval::macro_report(cm);
  using eval::format2;
  out << "## " << title << "\n\n";
  out << "| class | Pr | Rec | F1 | support |\n|---|---|---|---|---|\n";
  out << "| av | " << format2(r.macro.precision) << " | " << format2(r.macro.recall) << " | "
      << format2(r.macro.f1) << " | " << cm.total() << " |\n";
  out << "| 0 [non-pol] | " << format2(r.non_political.precision) << " | "
      << format2(r.non_political.recall) << " | " << format2(r.non_political.f1) << " | "
      << r.support_non_political << " |\n";
  out << "| 1 [pol] | " << format2(r.political.precision) << " | " << format2(r.political.recall)
      << " | " << format2(r.political.f1) << " | " << r.support_political << " |\n\n";
  out << "F1: " << eval::format_cell(r.political.f1, r.macro.f1) << "\n";
}

}  // namespace agora::report
