#pragma once

#include <span>
#include <utility>
#include <vector>

#include "agora/label.hpp"
#include "agora/models.hpp"

namespace agora::eval {

// Probability cut-offs tried for the political label.
inline const std::vector<double> kDefaultProbGrid{0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40};

struct SweepResult {
  double best_p = 0.0;
  double best_macro_f1 = 0.0;
  std::vector<std::pair<double, double>> table;  // (p, macro F1) in grid order
};

// Political iff probability >= p; best = highest macro F1, smallest p on ties.
SweepResult sweep_prob_threshold(std::span<const double> probabilities,
                                 std::span<const Label> gold, std::span<const double> grid);

// Throws for margin-only models.
SweepResult sweep_prob_threshold(const sml::TrainedModel& model,
                                 std::span<const sml::Example> dataset,
                                 std::span<const double> grid);

}  // namespace agora::eval
