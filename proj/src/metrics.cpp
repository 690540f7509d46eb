#include "agora/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "agora/error.hpp"

namespace agora::eval {

ConfusionMatrix confusion(std::span<const Label> gold, std::span<const Label> pred) {
  if (gold.size() != pred.size())
    throw Error("confusion: gold and predicted label lists differ in length (" +
                std::to_string(gold.size()) + " vs " + std::to_string(pred.size()) + ")");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i] == Label::Political;
    const bool p = pred[i] == Label::Political;
    if (g && p) ++cm.tp;
    else if (!g && p) ++cm.fp;
    else if (g && !p) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ClassMetrics class_metrics(const ConfusionMatrix& cm, Label positive) {
  const bool pol = positive == Label::Political;
  const std::size_t tp = pol ? cm.tp : cm.tn;
  const std::size_t fp = pol ? cm.fp : cm.fn;
  const std::size_t fn = pol ? cm.fn : cm.fp;
  ClassMetrics m;
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  m.f1 = m.precision + m.recall == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

EvalReport macro_report(const ConfusionMatrix& cm) {
  EvalReport r;
  r.political = class_metrics(cm, Label::Political);
  r.non_political = class_metrics(cm, Label::NonPolitical);
  r.macro.precision = (r.political.precision + r.non_political.precision) / 2.0;
  r.macro.recall = (r.political.recall + r.non_political.recall) / 2.0;
  r.macro.f1 = (r.political.f1 + r.non_political.f1) / 2.0;
  r.support_political = cm.tp + cm.fn;
  r.support_non_political = cm.tn + cm.fp;
  return r;
}

double macro_f1(const ConfusionMatrix& cm) { return macro_report(cm).macro.f1; }

std::strong_ordering compare_macro_f1(const ConfusionMatrix& a, const ConfusionMatrix& b) {
  // F1 of a class equals 2tp / (2tp + fp + fn) (0 when the denominator is 0),
  // so macro F1 is a sum of two fractions compared by cross-multiplication.
  using i128 = __int128;
  struct Frac {
    i128 num, den;
  };
  auto f1 = [](std::size_t tp, std::size_t fp, std::size_t fn) {
    const i128 den = 2 * static_cast<i128>(tp) + fp + fn;
    return den == 0 ? Frac{0, 1} : Frac{2 * static_cast<i128>(tp), den};
  };
  auto sum = [&](const ConfusionMatrix& m) {
    const Frac p = f1(m.tp, m.fp, m.fn);
    const Frac n = f1(m.tn, m.fn, m.fp);
    return Frac{p.num * n.den + n.num * p.den, p.den * n.den};
  };
  const Frac x = sum(a), y = sum(b);
  const i128 lhs = x.num * y.den, rhs = y.num * x.den;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

double round2(double x) {
  // The nudge keeps decimal halves such as 0.505 (stored as 0.50499999...)
  // rounding away from zero like the printed tables do.
  const double scaled = x * 100.0;
  return std::round(scaled + std::copysign(1e-9, scaled)) / 100.0;
}

std::string format2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", round2(x));
  return buf;
}

std::string format_cell(double f1_political, double f1_macro) {
  return format2(f1_political) + " [" + format2(f1_macro) + "]";
}

}  // namespace agora::eval
