#pragma once

#include <iosfwd>
#include <string>

#include "agora/benchmark.hpp"

namespace agora::report {

// model,mode,eval_set,tp,fp,fn,tn,p_pol,r_pol,f1_pol,p_non,r_non,f1_non,f1_macro,status,error
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const std::string& model, text::PreprocessMode mode,
                   const std::string& eval_set, const eval::ConfusionMatrix& cm,
                   const std::string& status = "ok", const std::string& error = {});
void write_grid_csv(std::ostream& out, const bench::BenchmarkResult& result);

// One table per eval set: models as rows, modes as columns, "F1_pol [F1_macro]" cells.
void write_grid_markdown(std::ostream& out, const bench::BenchmarkResult& result);

// Per-class precision/recall/F1 table for a single evaluation.
void write_report_markdown(std::ostream& out, const std::string& title,
                           const eval::ConfusionMatrix& cm);

// Human column header for a mode, e.g. "Stemming + stopword removal".
std::string mode_title(text::PreprocessMode mode);

}  // namespace agora::report
