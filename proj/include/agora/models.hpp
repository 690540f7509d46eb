#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "agora/features.hpp"
#include "agora/label.hpp"
#include "agora/preprocess.hpp"

namespace agora::sml {

enum class ModelKind { MNB, BNB, LR, PA, SGD };

inline constexpr std::array<ModelKind, 5> kAllModelKinds{ModelKind::PA, ModelKind::BNB,
                                                         ModelKind::MNB, ModelKind::LR,
                                                         ModelKind::SGD};

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);  // throws agora::Error

constexpr bool is_probabilistic(ModelKind k) {
  return k == ModelKind::MNB || k == ModelKind::BNB || k == ModelKind::LR;
}

struct Hyperparameters {
  double nb_alpha = 1.0;        // Laplace smoothing
  double lr_lambda = -1.0;      // L2 strength; negative means 1/n
  double lr_learning_rate = 0.1;
  int lr_max_epochs = 1000;
  double lr_tolerance = 1e-6;   // stop once the gradient norm is below this
  double pa_c = 1.0;            // PA-I aggressiveness cap
  int pa_epochs = 5;
  double sgd_learning_rate = 0.01;  // eta_epoch = rate / (1 + epoch)
  double sgd_alpha = 1e-4;          // L2 penalty
  int sgd_epochs = 5;
};

struct Example {
  FeatureVector x;
  Label y = Label::NonPolitical;
};

// Log-space naive Bayes parameters, indexed [class][term].
struct NaiveBayesParams {
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> log_prob;
  // Bernoulli only: log(1 - p) per term and its sum over the vocabulary.
  std::array<std::vector<double>, 2> log_not_prob;
  std::array<double, 2> log_not_sum{};
};

struct LinearParams {
  std::vector<double> weights;
  double bias = 0.0;
};

struct TrainedModel {
  ModelKind kind = ModelKind::MNB;
  Hyperparameters hyperparameters;
  text::PreprocessMode mode = text::PreprocessMode::None;
  FeatureSpace feature_space;
  std::variant<NaiveBayesParams, LinearParams> parameters;

  const NaiveBayesParams& naive_bayes() const { return std::get<NaiveBayesParams>(parameters); }
  const LinearParams& linear() const { return std::get<LinearParams>(parameters); }
};

// Objective value after each LR epoch (index 0 is the starting point).
struct TrainingTrace {
  std::vector<double> loss;
};

TrainedModel train(ModelKind kind, FeatureSpace space, std::span<const Example> examples,
                   const Hyperparameters& hp = {}, std::uint64_t seed = 42,
                   TrainingTrace* trace = nullptr);

// Log posteriors (NB) or the margin w.x + b (linear kinds).
std::array<double, 2> log_posteriors(const TrainedModel& model, const FeatureVector& v);
double margin(const TrainedModel& model, const FeatureVector& v);

// NB: argmax posterior (ties non-political); linear: political iff margin > 0.
Label predict(const TrainedModel& model, const FeatureVector& v);

// P(political | v). Throws for PA and SGD.
double predict_proba(const TrainedModel& model, const FeatureVector& v);

class ProbThreshold {
 public:
  explicit ProbThreshold(double p);
  double p() const { return p_; }

 private:
  double p_;
};

// Political iff predict_proba >= t.
Label classify_with_threshold(const TrainedModel& model, const FeatureVector& v, ProbThreshold t);

// Mean logistic loss plus (lambda/2)|w|^2, labels mapped to +1/-1.
class LogisticObjective {
 public:
  LogisticObjective(std::span<const Example> examples, std::size_t dim, double lambda);

  double value(const LinearParams& p) const;
  // Gradient over (weights..., bias).
  std::vector<double> gradient(const LinearParams& p) const;

 private:
  std::span<const Example> examples_;
  std::size_t dim_;
  double lambda_;
};

// One PA-I step on (x, 1) against y; returns the step size tau.
double pa_update(LinearParams& p, const FeatureVector& x, Label y, double c);

}  // namespace agora::sml
