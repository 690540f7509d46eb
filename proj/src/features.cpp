#include "agora/features.hpp"

#include <algorithm>
#include <map>

#include "agora/error.hpp"

namespace agora::sml {

double FeatureVector::squared_norm() const {
  double s = 0.0;
  for (const double v : values) s += v * v;
  return s;
}

FeatureSpace::FeatureSpace(std::vector<std::string> vocabulary) : vocab_(std::move(vocabulary)) {
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (i > 0 && !(vocab_[i - 1] < vocab_[i]))
      throw Error("feature vocabulary must be sorted and unique");
    index_.emplace(vocab_[i], static_cast<std::uint32_t>(i));
  }
}

FeatureSpace FeatureSpace::fit(std::span<const text::TokenizedDoc> docs,
                               std::optional<std::size_t> max_features) {
  if (docs.empty()) throw Error("fit_feature_space: no training documents");
  std::map<std::string, std::size_t> freq;
  for (const auto& d : docs)
    for (const auto& t : d.tokens) ++freq[t];
  if (freq.empty()) throw Error("fit_feature_space: training documents have no tokens");

  std::vector<std::string> vocab;
  if (max_features && *max_features < freq.size()) {
    std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    ranked.resize(*max_features);
    for (auto& [term, n] : ranked) vocab.push_back(std::move(term));
    std::sort(vocab.begin(), vocab.end());
  } else {
    vocab.reserve(freq.size());
    for (auto& [term, n] : freq) vocab.push_back(term);
  }
  return FeatureSpace(std::move(vocab));
}

FeatureVector FeatureSpace::vectorize(std::span<const std::string> tokens) const {
  std::map<std::uint32_t, double> counts;
  for (const auto& t : tokens)
    if (auto it = index_.find(t); it != index_.end()) counts[it->second] += 1.0;
  FeatureVector v;
  v.indices.reserve(counts.size());
  v.values.reserve(counts.size());
  for (const auto& [idx, c] : counts) {
    v.indices.push_back(idx);
    v.values.push_back(c);
  }
  return v;
}

std::optional<std::uint32_t> FeatureSpace::index_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace agora::sml
