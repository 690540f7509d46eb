#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "agora/corpus.hpp"
#include "agora/label.hpp"
#include "agora/preprocess.hpp"

namespace agora::dict {

using text::PreprocessMode;

// One dictionary entry: 1..n normalized tokens (multiword actor names).
using Entry = std::vector<std::string>;

enum class Provenance { Curated, Keyness, Merged };

std::string_view to_string(Provenance p);

class Dictionary {
 public:
  Dictionary() = default;
  Dictionary(std::string name, std::set<Entry> entries, Provenance provenance,
             std::optional<PreprocessMode> mode = std::nullopt);

  const std::string& name() const { return name_; }
  const std::set<Entry>& entries() const { return entries_; }
  Provenance provenance() const { return provenance_; }
  // Mode the entries are normalized under; nullopt for surface forms as
  // written in a curated list.
  const std::optional<PreprocessMode>& mode() const { return mode_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(const Entry& e) const { return entries_.contains(e); }

  // Entries re-normalized for `mode`: stopwords dropped / stems / lemmas as the
  // mode prescribes. Entries left empty are dropped. Identity when the
  // dictionary is already in that mode.
  Dictionary normalized(PreprocessMode mode, const text::Preprocessor& pre) const;

 private:
  std::string name_;
  std::set<Entry> entries_;
  Provenance provenance_ = Provenance::Curated;
  std::optional<PreprocessMode> mode_;
};

// One entry per line, '#' comments. A leading "# mode=<mode>" line marks an
// already normalized dictionary. Throws when no usable entry remains.
Dictionary parse_dictionary(std::istream& in, std::string name);
Dictionary load_dictionary(const std::filesystem::path& path, std::string name);
void write_dictionary(std::ostream& out, const Dictionary& d,
                      const std::vector<Entry>& order = {});

// Dunning's 2x2 log-likelihood keyness, 0*ln(0) = 0.
// a = freq in target, c = target size, b = freq in reference, d = reference size.
double keyness_ll(std::size_t freq_target, std::size_t size_target, std::size_t freq_ref,
                  std::size_t size_ref);

struct KeynessEntry {
  std::string term;
  std::size_t freq_target = 0;
  std::size_t freq_ref = 0;
  double ll_score = 0.0;
  bool overrepresented = false;
};

// Keyness of every term; target = political documents. Sorted by LL
// descending, then term ascending.
std::vector<KeynessEntry> keyness_table(std::span<const text::TokenizedDoc> docs,
                                        std::span<const Label> labels);

// Top-k political-overrepresented terms as a unigram dictionary in `mode`.
Dictionary build_ll_dictionary(std::span<const text::TokenizedDoc> docs,
                               std::span<const Label> labels, PreprocessMode mode, std::size_t k,
                               std::string name = "Di-LL");
Dictionary build_ll_dictionary(const corpus::LabeledCorpus& train, PreprocessMode mode,
                               std::size_t k, const text::Preprocessor& pre,
                               std::string name = "Di-LL");

Dictionary merge_dictionaries(const Dictionary& a, const Dictionary& b, std::string name);

struct RatioScore {
  std::size_t matched_unique = 0;
  std::size_t total_unique = 0;
  double ratio = 0.0;
};

// Distinct entries found (unigrams by membership, multiword entries as
// contiguous token runs) over the number of unique unigrams in the document.
RatioScore score_document(const text::TokenizedDoc& doc, const Dictionary& dict);

struct ThresholdModel {
  Dictionary dictionary;
  PreprocessMode mode = PreprocessMode::None;
  double theta = 0.0;  // in [0, 1]
};

// Political iff ratio >= theta.
Label classify(const RatioScore& score, double theta);
inline Label classify(const RatioScore& score, const ThresholdModel& model) {
  return classify(score, model.theta);
}

struct Calibration {
  double theta = 0.0;
  double macro_f1 = 0.0;
};

// Candidates are 0 and every observed ratio; maximizes macro F1, ties go to
// the smallest theta.
Calibration calibrate_threshold(std::span<const double> ratios, std::span<const Label> gold);
Calibration calibrate_threshold(const corpus::LabeledCorpus& corpus, const Dictionary& dict,
                                PreprocessMode mode, const text::Preprocessor& pre);

struct ScoredDataset {
  std::string name;
  std::vector<double> ratios;
  std::vector<Label> gold;
};

ScoredDataset score_dataset(std::string name, const corpus::LabeledCorpus& corpus,
                            const Dictionary& dict, PreprocessMode mode,
                            const text::Preprocessor& pre);

double macro_f1_at(const ScoredDataset& data, double theta);

struct ConsistentThreshold {
  double theta = 0.0;
  double mean_macro_f1 = 0.0;
};

// Evaluates every candidate on every dataset and keeps the one with the
// highest mean macro F1 (smallest theta on ties).
ConsistentThreshold select_consistent_threshold(std::span<const double> candidates,
                                                std::span<const ScoredDataset> datasets);

}  // namespace agora::dict
