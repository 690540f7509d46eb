#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agora/label.hpp"

namespace agora::corpus {

struct Document {
  std::string id;
  std::string text;  // may be empty
  std::string source;
  std::vector<std::string> tags;
  std::optional<Label> label;

  bool operator==(const Document&) const = default;
};

// A document list in which every document carries a label and ids are unique.
class LabeledCorpus {
 public:
  LabeledCorpus() = default;
  // Throws agora::Error on an unlabeled document or a duplicate id.
  explicit LabeledCorpus(std::vector<Document> docs);

  const std::vector<Document>& documents() const { return docs_; }
  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }
  std::size_t count(Label l) const { return counts_[index_of(l)]; }
  bool has_both_classes() const { return counts_[0] > 0 && counts_[1] > 0; }

  std::vector<Label> labels() const;

 private:
  std::vector<Document> docs_;
  std::size_t counts_[2] = {0, 0};
};

// Tag -> label. Keys are stored lowercase; lookup is case-insensitive.
class LabelMap {
 public:
  LabelMap() = default;
  explicit LabelMap(const std::map<std::string, Label>& entries);

  static LabelMap load(const std::filesystem::path& path);  // JSON object

  std::optional<Label> lookup(std::string_view tag) const;
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }

 private:
  std::map<std::string, Label, std::less<>> map_;
};

// The first tag found in the map decides the label, then `fallback`, else the
// result is unlabeled. Tags mapping to both labels raise agora::Error.
Document label_from_tags(Document doc, const LabelMap& map,
                         std::optional<Label> fallback = std::nullopt);

struct LoadOptions {
  std::optional<LabelMap> label_map;
  std::optional<Label> fallback;
};

// One JSON object per line. Documents that already carry an explicit "label"
// keep it; the label map only fills in unlabeled ones.
std::vector<Document> read_jsonl(std::istream& in, const LoadOptions& opts = {});
std::vector<Document> load_jsonl(const std::filesystem::path& path,
                                 const LoadOptions& opts = {});
LabeledCorpus load_labeled_jsonl(const std::filesystem::path& path,
                                 const LoadOptions& opts = {});

void write_jsonl(std::ostream& out, const std::vector<Document>& docs);
void save_jsonl(const std::filesystem::path& path, const std::vector<Document>& docs);

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
  bool stratified = true;
};

// Number of test documents drawn from a group of n: round-half-up(n * fraction).
std::size_t test_count(std::size_t n, double fraction);

// Seeded uniform shuffle (per class when stratified), the first test_count
// documents of each shuffled group form the test side. Both sides keep the
// corpus order.
std::pair<LabeledCorpus, LabeledCorpus> split_train_test(const LabeledCorpus& corpus,
                                                         const SplitSpec& spec);

class Denylist {
 public:
  Denylist() = default;
  explicit Denylist(std::vector<std::string> patterns);
  static Denylist load(const std::filesystem::path& path);  // JSON array of strings

  // Host patterns match the source host or any subdomain of it; patterns with
  // a '/' match as URL prefixes. Case-insensitive.
  bool matches(std::string_view source) const;
  const std::vector<std::string>& patterns() const { return patterns_; }

 private:
  std::vector<std::string> patterns_;
};

std::vector<Document> filter_denylist(std::vector<Document> docs, const Denylist& denylist);

}  // namespace agora::corpus
