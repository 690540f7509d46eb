#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "agora/preprocess.hpp"

namespace agora::sml {

// Sparse bag-of-words row: strictly increasing indices, positive values.
struct FeatureVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t nnz() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  double squared_norm() const;
  bool operator==(const FeatureVector&) const = default;
};

// Vocabulary of the training documents, indexed in lexicographic order.
class FeatureSpace {
 public:
  FeatureSpace() = default;
  // `vocabulary` must be sorted and free of duplicates.
  explicit FeatureSpace(std::vector<std::string> vocabulary);

  // With max_features set, only the most frequent terms are kept (ties by
  // term), then re-indexed lexicographically. Throws on an empty vocabulary.
  static FeatureSpace fit(std::span<const text::TokenizedDoc> docs,
                          std::optional<std::size_t> max_features = std::nullopt);

  // Raw term counts; unknown terms are dropped.
  FeatureVector vectorize(std::span<const std::string> tokens) const;

  std::optional<std::uint32_t> index_of(std::string_view term) const;
  const std::vector<std::string>& vocabulary() const { return vocab_; }
  std::size_t size() const { return vocab_.size(); }

 private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

}  // namespace agora::sml
