#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "agora/label.hpp"

namespace agora::eval {

// Political is the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const Label> gold, std::span<const Label> pred);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Standard definitions: precision = tp/(tp+fp), recall = tp/(tp+fn), with the
// roles of tp/tn and fp/fn swapped for the non-political class. 0/0 is 0.
ClassMetrics class_metrics(const ConfusionMatrix& cm, Label positive);

struct EvalReport {
  ClassMetrics political;
  ClassMetrics non_political;
  ClassMetrics macro;  // unweighted mean of the two classes
  std::size_t support_political = 0;
  std::size_t support_non_political = 0;

  const ClassMetrics& of(Label l) const { return l == Label::Political ? political : non_political; }
};

EvalReport macro_report(const ConfusionMatrix& cm);

double macro_f1(const ConfusionMatrix& cm);

// Exact ordering of two confusion matrices by macro F1, free of floating
// point rounding; used wherever an argmax needs a deterministic tie-break.
std::strong_ordering compare_macro_f1(const ConfusionMatrix& a, const ConfusionMatrix& b);

// Two decimals, round half away from zero ("0.505" -> "0.51").
double round2(double x);
std::string format2(double x);

// "F1_pol [F1_macro]" as in the published tables.
std::string format_cell(double f1_political, double f1_macro);

}  // namespace agora::eval
