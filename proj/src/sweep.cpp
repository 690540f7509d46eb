#include "agora/sweep.hpp"

#include "agora/error.hpp"
#include "agora/metrics.hpp"

namespace agora::eval {

SweepResult sweep_prob_threshold(std::span<const double> probabilities,
                                 std::span<const Label> gold, std::span<const double> grid) {
  if (grid.empty()) throw Error("sweep_prob_threshold: empty grid");
  if (probabilities.empty()) throw Error("sweep_prob_threshold: empty dataset");
  if (probabilities.size() != gold.size())
    throw Error("sweep_prob_threshold: probabilities/labels length mismatch");
  SweepResult r;
  ConfusionMatrix best_cm;
  bool have_best = false;
  std::vector<Label> pred(probabilities.size());
  for (const double p : grid) {
    for (std::size_t i = 0; i < probabilities.size(); ++i)
      pred[i] = probabilities[i] >= p ? Label::Political : Label::NonPolitical;
    const auto cm = confusion(gold, pred);
    r.table.emplace_back(p, macro_f1(cm));
    const auto order = have_best ? compare_macro_f1(cm, best_cm) : std::strong_ordering::greater;
    if (order == std::strong_ordering::greater || (order == std::strong_ordering::equal && p < r.best_p)) {
      best_cm = cm;
      r.best_p = p;
      have_best = true;
    }
  }
  r.best_macro_f1 = macro_f1(best_cm);
  return r;
}

SweepResult sweep_prob_threshold(const sml::TrainedModel& model,
                                 std::span<const sml::Example> dataset,
                                 std::span<const double> grid) {
  if (!sml::is_probabilistic(model.kind))
    throw Error(std::string(sml::to_string(model.kind)) +
                ": margin model has no calibrated probability");
  std::vector<double> probs;
  std::vector<Label> gold;
  probs.reserve(dataset.size());
  gold.reserve(dataset.size());
  for (const auto& e : dataset) {
    probs.push_back(sml::predict_proba(model, e.x));
    gold.push_back(e.y);
  }
  return sweep_prob_threshold(probs, gold, grid);
}

}  // namespace agora::eval
