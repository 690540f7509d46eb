#include "agora/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "agora/error.hpp"
#include "agora/rng.hpp"
#include "agora/unicode.hpp"

namespace agora::sml {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::MNB: return "MNB";
    case ModelKind::BNB: return "BNB";
    case ModelKind::LR: return "LR";
    case ModelKind::PA: return "PA";
    case ModelKind::SGD: return "SGD";
  }
  return "MNB";
}

ModelKind parse_model_kind(std::string_view name) {
  const auto upper = unicode::ascii_upper(name);
  for (auto k : kAllModelKinds)
    if (to_string(k) == upper) return k;
  throw Error("unknown model '" + std::string(name) + "' (expected MNB|BNB|LR|PA|SGD)");
}

namespace {

double sign_of(Label y) { return y == Label::Political ? 1.0 : -1.0; }

double dot(const std::vector<double>& w, const FeatureVector& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.indices.size(); ++k) s += w[x.indices[k]] * x.values[k];
  return s;
}

// log(1 + exp(t)) without overflow.
double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void check_examples(const FeatureSpace& space, std::span<const Example> examples) {
  bool seen[2] = {false, false};
  for (const auto& e : examples) {
    seen[index_of(e.y)] = true;
    for (const auto idx : e.x.indices)
      if (idx >= space.size()) throw Error("feature index outside the feature space");
  }
  if (!seen[0] || !seen[1]) throw Error("training data must contain both classes");
}

NaiveBayesParams fit_multinomial(const FeatureSpace& space, std::span<const Example> examples,
                                 double alpha) {
  const std::size_t dim = space.size();
  std::array<std::vector<double>, 2> counts{std::vector<double>(dim, 0.0),
                                            std::vector<double>(dim, 0.0)};
  std::array<double, 2> totals{0.0, 0.0}, docs{0.0, 0.0};
  for (const auto& e : examples) {
    const auto c = index_of(e.y);
    docs[c] += 1.0;
    for (std::size_t k = 0; k < e.x.nnz(); ++k) {
      counts[c][e.x.indices[k]] += e.x.values[k];
      totals[c] += e.x.values[k];
    }
  }
  NaiveBayesParams p;
  const double n = docs[0] + docs[1];
  for (std::size_t c = 0; c < 2; ++c) {
    p.log_prior[c] = std::log(docs[c] / n);
    const double denom = std::log(totals[c] + alpha * static_cast<double>(dim));
    p.log_prob[c].resize(dim);
    for (std::size_t j = 0; j < dim; ++j) p.log_prob[c][j] = std::log(counts[c][j] + alpha) - denom;
  }
  return p;
}

NaiveBayesParams fit_bernoulli(const FeatureSpace& space, std::span<const Example> examples,
                               double alpha) {
  const std::size_t dim = space.size();
  std::array<std::vector<double>, 2> present{std::vector<double>(dim, 0.0),
                                             std::vector<double>(dim, 0.0)};
  std::array<double, 2> docs{0.0, 0.0};
  for (const auto& e : examples) {
    const auto c = index_of(e.y);
    docs[c] += 1.0;
    for (const auto idx : e.x.indices) present[c][idx] += 1.0;
  }
  NaiveBayesParams p;
  const double n = docs[0] + docs[1];
  for (std::size_t c = 0; c < 2; ++c) {
    p.log_prior[c] = std::log(docs[c] / n);
    p.log_prob[c].resize(dim);
    p.log_not_prob[c].resize(dim);
    p.log_not_sum[c] = 0.0;
    const double denom = docs[c] + 2.0 * alpha;
    for (std::size_t j = 0; j < dim; ++j) {
      p.log_prob[c][j] = std::log((present[c][j] + alpha) / denom);
      p.log_not_prob[c][j] = std::log((docs[c] - present[c][j] + alpha) / denom);
      p.log_not_sum[c] += p.log_not_prob[c][j];
    }
  }
  return p;
}

LinearParams fit_logistic(const FeatureSpace& space, std::span<const Example> examples,
                          const Hyperparameters& hp, TrainingTrace* trace) {
  const double lambda =
      hp.lr_lambda < 0.0 ? 1.0 / static_cast<double>(examples.size()) : hp.lr_lambda;
  const LogisticObjective objective(examples, space.size(), lambda);
  LinearParams p;
  p.weights.assign(space.size(), 0.0);
  double loss = objective.value(p);
  if (trace) trace->loss.push_back(loss);

  // Full-batch gradient descent. The step starts at the configured rate and
  // is halved until the objective decreases (Armijo), so the loss trace is
  // monotone even when the raw rate would overshoot on count features.
  double step = hp.lr_learning_rate;
  for (int epoch = 0; epoch < hp.lr_max_epochs; ++epoch) {
    const auto grad = objective.gradient(p);
    double sq = 0.0;
    for (const double g : grad) sq += g * g;
    if (std::sqrt(sq) <= hp.lr_tolerance) break;

    LinearParams next;
    double next_loss = loss;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      next.weights = p.weights;
      for (std::size_t j = 0; j < next.weights.size(); ++j) next.weights[j] -= step * grad[j];
      next.bias = p.bias - step * grad.back();
      next_loss = objective.value(next);
      if (next_loss <= loss - 1e-4 * step * sq) {
        accepted = true;
        break;
      }
      step /= 2.0;
    }
    if (!accepted) break;  // no representable descent step left
    p = std::move(next);
    loss = next_loss;
    if (trace) trace->loss.push_back(loss);
    step = std::min(hp.lr_learning_rate, step * 2.0);
  }
  return p;
}

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

LinearParams fit_passive_aggressive(const FeatureSpace& space, std::span<const Example> examples,
                                    const Hyperparameters& hp, std::uint64_t seed) {
  LinearParams p;
  p.weights.assign(space.size(), 0.0);
  std::mt19937_64 rng(seed);
  auto order = identity_order(examples.size());
  for (int epoch = 0; epoch < hp.pa_epochs; ++epoch) {
    seeded_shuffle(std::span(order), rng);
    for (const auto i : order) pa_update(p, examples[i].x, examples[i].y, hp.pa_c);
  }
  return p;
}

LinearParams fit_sgd_hinge(const FeatureSpace& space, std::span<const Example> examples,
                           const Hyperparameters& hp, std::uint64_t seed) {
  // w = scale * v keeps the L2 shrink O(1) per step.
  std::vector<double> v(space.size(), 0.0);
  double scale = 1.0;
  double bias = 0.0;
  std::mt19937_64 rng(seed);
  auto order = identity_order(examples.size());
  for (int epoch = 0; epoch < hp.sgd_epochs; ++epoch) {
    seeded_shuffle(std::span(order), rng);
    const double eta = hp.sgd_learning_rate / (1.0 + epoch);
    for (const auto i : order) {
      const auto& ex = examples[i];
      const double y = sign_of(ex.y);
      const double z = scale * dot(v, ex.x) + bias;
      scale *= 1.0 - eta * hp.sgd_alpha;
      if (y * z < 1.0) {
        const double g = eta * y / scale;
        for (std::size_t k = 0; k < ex.x.nnz(); ++k) v[ex.x.indices[k]] += g * ex.x.values[k];
        bias += eta * y;
      }
      if (scale < 1e-9) {
        for (auto& w : v) w *= scale;
        scale = 1.0;
      }
    }
  }
  LinearParams p;
  p.weights.resize(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) p.weights[j] = scale * v[j];
  p.bias = bias;
  return p;
}

}  // namespace

LogisticObjective::LogisticObjective(std::span<const Example> examples, std::size_t dim,
                                     double lambda)
    : examples_(examples), dim_(dim), lambda_(lambda) {}

double LogisticObjective::value(const LinearParams& p) const {
  double sum = 0.0;
  for (const auto& e : examples_) sum += softplus(-sign_of(e.y) * (dot(p.weights, e.x) + p.bias));
  double reg = 0.0;
  for (const double w : p.weights) reg += w * w;
  return sum / static_cast<double>(examples_.size()) + 0.5 * lambda_ * reg;
}

std::vector<double> LogisticObjective::gradient(const LinearParams& p) const {
  std::vector<double> g(dim_ + 1, 0.0);
  const double inv_n = 1.0 / static_cast<double>(examples_.size());
  for (const auto& e : examples_) {
    const double y = sign_of(e.y);
    // d/dz softplus(-y z) = -y * sigmoid(-y z)
    const double coef = -y * sigmoid(-y * (dot(p.weights, e.x) + p.bias)) * inv_n;
    for (std::size_t k = 0; k < e.x.nnz(); ++k) g[e.x.indices[k]] += coef * e.x.values[k];
    g[dim_] += coef;
  }
  for (std::size_t j = 0; j < dim_; ++j) g[j] += lambda_ * p.weights[j];
  return g;
}

double pa_update(LinearParams& p, const FeatureVector& x, Label y, double c) {
  const double s = sign_of(y);
  const double loss = std::max(0.0, 1.0 - s * (dot(p.weights, x) + p.bias));
  if (loss == 0.0) return 0.0;
  const double tau = std::min(c, loss / (x.squared_norm() + 1.0));
  for (std::size_t k = 0; k < x.nnz(); ++k) p.weights[x.indices[k]] += tau * s * x.values[k];
  p.bias += tau * s;
  return tau;
}

TrainedModel train(ModelKind kind, FeatureSpace space, std::span<const Example> examples,
                   const Hyperparameters& hp, std::uint64_t seed, TrainingTrace* trace) {
  check_examples(space, examples);
  TrainedModel m;
  m.kind = kind;
  m.hyperparameters = hp;
  switch (kind) {
    case ModelKind::MNB:
    case ModelKind::BNB:
      if (!(hp.nb_alpha > 0.0)) throw Error("naive Bayes smoothing alpha must be positive");
      m.parameters = kind == ModelKind::MNB ? fit_multinomial(space, examples, hp.nb_alpha)
                                            : fit_bernoulli(space, examples, hp.nb_alpha);
      break;
    case ModelKind::LR: m.parameters = fit_logistic(space, examples, hp, trace); break;
    case ModelKind::PA: m.parameters = fit_passive_aggressive(space, examples, hp, seed); break;
    case ModelKind::SGD: m.parameters = fit_sgd_hinge(space, examples, hp, seed); break;
  }
  m.feature_space = std::move(space);
  return m;
}

std::array<double, 2> log_posteriors(const TrainedModel& model, const FeatureVector& v) {
  const auto& p = model.naive_bayes();
  std::array<double, 2> lp{};
  for (std::size_t c = 0; c < 2; ++c) {
    lp[c] = p.log_prior[c];
    if (model.kind == ModelKind::MNB) {
      for (std::size_t k = 0; k < v.nnz(); ++k) lp[c] += v.values[k] * p.log_prob[c][v.indices[k]];
    } else {
      lp[c] += p.log_not_sum[c];
      for (const auto idx : v.indices) lp[c] += p.log_prob[c][idx] - p.log_not_prob[c][idx];
    }
  }
  return lp;
}

double margin(const TrainedModel& model, const FeatureVector& v) {
  const auto& p = model.linear();
  return dot(p.weights, v) + p.bias;
}

Label predict(const TrainedModel& model, const FeatureVector& v) {
  if (model.kind == ModelKind::MNB || model.kind == ModelKind::BNB) {
    const auto lp = log_posteriors(model, v);
    return lp[1] > lp[0] ? Label::Political : Label::NonPolitical;
  }
  return margin(model, v) > 0.0 ? Label::Political : Label::NonPolitical;
}

double predict_proba(const TrainedModel& model, const FeatureVector& v) {
  switch (model.kind) {
    case ModelKind::MNB:
    case ModelKind::BNB: {
      const auto lp = log_posteriors(model, v);
      const double hi = std::max(lp[0], lp[1]);
      const double norm = hi + std::log(std::exp(lp[0] - hi) + std::exp(lp[1] - hi));
      return std::exp(lp[1] - norm);
    }
    case ModelKind::LR: return sigmoid(margin(model, v));
    case ModelKind::PA:
    case ModelKind::SGD: break;
  }
  throw Error(std::string(to_string(model.kind)) +
              ": margin model has no calibrated probability");
}

ProbThreshold::ProbThreshold(double p) : p_(p) {
  if (!(p > 0.0 && p < 1.0)) throw Error("probability threshold must lie strictly between 0 and 1");
}

Label classify_with_threshold(const TrainedModel& model, const FeatureVector& v, ProbThreshold t) {
  return predict_proba(model, v) >= t.p() ? Label::Political : Label::NonPolitical;
}

}  // namespace agora::sml
