#include "agora/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "agora/error.hpp"
#include "agora/metrics.hpp"

namespace agora::dict {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Curated: return "curated";
    case Provenance::Keyness: return "keyness";
    case Provenance::Merged: return "merged";
  }
  return "curated";
}

Dictionary::Dictionary(std::string name, std::set<Entry> entries, Provenance provenance,
                       std::optional<PreprocessMode> mode)
    : name_(std::move(name)), entries_(std::move(entries)), provenance_(provenance), mode_(mode) {
  for (const auto& e : entries_)
    if (e.empty()) throw Error("dictionary '" + name_ + "' has an empty entry");
}

Dictionary Dictionary::normalized(PreprocessMode mode, const text::Preprocessor& pre) const {
  if (mode_ == mode) return *this;
  if (mode_ && *mode_ != PreprocessMode::None)
    throw Error("dictionary '" + name_ + "' is already normalized for mode " +
                std::string(text::to_string(*mode_)) + ", cannot re-normalize for " +
                std::string(text::to_string(mode)));
  std::set<Entry> out;
  for (const auto& e : entries_) {
    auto tokens = pre.transform(e, mode);
    if (!tokens.empty()) out.insert(std::move(tokens));
  }
  return Dictionary(name_, std::move(out), provenance_, mode);
}

Dictionary parse_dictionary(std::istream& in, std::string name) {
  std::set<Entry> entries;
  std::optional<PreprocessMode> mode;
  Provenance provenance = Provenance::Curated;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    if (line[b] == '#') {
      if (first) {
        if (auto pos = line.find("mode="); pos != std::string::npos) {
          auto value = line.substr(pos + 5);
          value = value.substr(0, value.find_first_of(" \t\r"));
          mode = text::parse_mode(value);
        }
        if (line.find("provenance=keyness") != std::string::npos) provenance = Provenance::Keyness;
        if (line.find("provenance=merged") != std::string::npos) provenance = Provenance::Merged;
      }
      continue;
    }
    first = false;
    auto tokens = text::tokenize(line);
    if (!tokens.empty()) entries.insert(std::move(tokens));
  }
  if (entries.empty()) throw Error("dictionary '" + name + "' has no usable entries");
  return Dictionary(std::move(name), std::move(entries), provenance, mode);
}

Dictionary load_dictionary(const std::filesystem::path& path, std::string name) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dictionary: " + path.string());
  return parse_dictionary(in, std::move(name));
}

void write_dictionary(std::ostream& out, const Dictionary& d, const std::vector<Entry>& order) {
  out << "# dictionary=" << d.name() << " provenance=" << to_string(d.provenance());
  if (d.mode()) out << " mode=" << text::to_string(*d.mode());
  out << '\n';
  auto write_entry = [&](const Entry& e) {
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << '\n';
  };
  if (order.empty()) {
    for (const auto& e : d.entries()) write_entry(e);
  } else {
    for (const auto& e : order) write_entry(e);
  }
}

double keyness_ll(std::size_t freq_target, std::size_t size_target, std::size_t freq_ref,
                  std::size_t size_ref) {
  if (size_target == 0 || size_ref == 0) throw Error("keyness_ll: corpus size must be positive");
  if (freq_target > size_target || freq_ref > size_ref)
    throw Error("keyness_ll: frequency exceeds corpus size");
  const double a = static_cast<double>(freq_target);
  const double b = static_cast<double>(freq_ref);
  const double c = static_cast<double>(size_target);
  const double d = static_cast<double>(size_ref);
  const double e1 = c * (a + b) / (c + d);
  const double e2 = d * (a + b) / (c + d);
  auto term = [](double observed, double expected) {
    return observed == 0.0 ? 0.0 : observed * std::log(observed / expected);
  };
  const double ll = 2.0 * (term(a, e1) + term(b, e2));
  // Rounding can leave a tiny negative value when the frequencies match.
  return std::max(0.0, ll);
}

std::vector<KeynessEntry> keyness_table(std::span<const text::TokenizedDoc> docs,
                                        std::span<const Label> labels) {
  if (docs.size() != labels.size()) throw Error("keyness_table: docs/labels length mismatch");
  std::map<std::string, std::pair<std::size_t, std::size_t>> freq;
  std::size_t size_target = 0, size_ref = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const bool target = labels[i] == Label::Political;
    for (const auto& t : docs[i].tokens) {
      auto& f = freq[t];
      (target ? f.first : f.second) += 1;
    }
    (target ? size_target : size_ref) += docs[i].tokens.size();
  }
  if (size_target == 0 || size_ref == 0)
    throw Error("keyness needs tokens in both the political and the non-political documents");

  std::vector<KeynessEntry> table;
  table.reserve(freq.size());
  for (const auto& [term, f] : freq) {
    KeynessEntry e;
    e.term = term;
    e.freq_target = f.first;
    e.freq_ref = f.second;
    e.ll_score = keyness_ll(f.first, size_target, f.second, size_ref);
    // a/c > b/d, compared without division.
    e.overrepresented = static_cast<double>(f.first) * static_cast<double>(size_ref) >
                        static_cast<double>(f.second) * static_cast<double>(size_target);
    table.push_back(std::move(e));
  }
  std::sort(table.begin(), table.end(), [](const KeynessEntry& x, const KeynessEntry& y) {
    if (x.ll_score != y.ll_score) return x.ll_score > y.ll_score;
    return x.term < y.term;
  });
  return table;
}

Dictionary build_ll_dictionary(std::span<const text::TokenizedDoc> docs,
                               std::span<const Label> labels, PreprocessMode mode, std::size_t k,
                               std::string name) {
  if (k == 0) throw Error("build_ll_dictionary: k must be at least 1");
  const bool has_pol = std::find(labels.begin(), labels.end(), Label::Political) != labels.end();
  const bool has_non = std::find(labels.begin(), labels.end(), Label::NonPolitical) != labels.end();
  if (!has_pol || !has_non) throw Error("build_ll_dictionary: training data needs both classes");
  std::set<Entry> entries;
  for (const auto& e : keyness_table(docs, labels)) {
    if (entries.size() == k) break;
    if (e.overrepresented) entries.insert(Entry{e.term});
  }
  if (entries.empty()) throw Error("build_ll_dictionary: no term is overrepresented in the political class");
  return Dictionary(std::move(name), std::move(entries), Provenance::Keyness, mode);
}

Dictionary build_ll_dictionary(const corpus::LabeledCorpus& train, PreprocessMode mode,
                               std::size_t k, const text::Preprocessor& pre, std::string name) {
  std::vector<text::TokenizedDoc> docs;
  docs.reserve(train.size());
  for (const auto& d : train.documents()) docs.push_back(pre.apply(d.text, mode, d.id));
  const auto labels = train.labels();
  return build_ll_dictionary(docs, labels, mode, k, std::move(name));
}

Dictionary merge_dictionaries(const Dictionary& a, const Dictionary& b, std::string name) {
  if (a.mode() && b.mode() && a.mode() != b.mode())
    throw Error("cannot merge dictionaries normalized for different modes");
  std::set<Entry> entries = a.entries();
  entries.insert(b.entries().begin(), b.entries().end());
  return Dictionary(std::move(name), std::move(entries), Provenance::Merged,
                    a.mode() ? a.mode() : b.mode());
}

RatioScore score_document(const text::TokenizedDoc& doc, const Dictionary& dict) {
  RatioScore s;
  s.total_unique = doc.unique_terms.size();
  std::unordered_map<std::string_view, std::vector<std::size_t>> positions;
  bool indexed = false;
  for (const auto& entry : dict.entries()) {
    if (entry.size() == 1) {
      if (doc.unique_terms.contains(entry.front())) ++s.matched_unique;
      continue;
    }
    if (!doc.unique_terms.contains(entry.front())) continue;
    if (!indexed) {
      for (std::size_t i = 0; i < doc.tokens.size(); ++i) positions[doc.tokens[i]].push_back(i);
      indexed = true;
    }
    const auto it = positions.find(entry.front());
    if (it == positions.end()) continue;
    for (const std::size_t start : it->second) {
      if (start + entry.size() > doc.tokens.size()) break;
      if (std::equal(entry.begin(), entry.end(), doc.tokens.begin() + static_cast<std::ptrdiff_t>(start))) {
        ++s.matched_unique;
        break;
      }
    }
  }
  s.ratio = s.total_unique == 0
                ? 0.0
                : static_cast<double>(s.matched_unique) / static_cast<double>(s.total_unique);
  return s;
}

Label classify(const RatioScore& score, double theta) {
  return score.ratio >= theta ? Label::Political : Label::NonPolitical;
}

Calibration calibrate_threshold(std::span<const double> ratios, std::span<const Label> gold) {
  if (ratios.size() != gold.size()) throw Error("calibrate_threshold: ratios/labels length mismatch");
  std::vector<std::size_t> order(ratios.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return ratios[x] < ratios[y]; });

  std::vector<double> candidates{0.0};
  for (const auto i : order)
    if (ratios[i] != candidates.back()) candidates.push_back(ratios[i]);
  // A negative ratio cannot occur, but keep the candidate list sorted anyway.
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::size_t total_pol = 0;
  for (const auto g : gold) total_pol += g == Label::Political;
  const std::size_t total_non = gold.size() - total_pol;

  // Sweep candidates upwards; documents below the threshold are predicted
  // non-political.
  std::size_t pol_below = 0, non_below = 0, cursor = 0;
  eval::ConfusionMatrix best_cm;
  double best_theta = 0.0;
  bool have_best = false;
  for (const double theta : candidates) {
    while (cursor < order.size() && ratios[order[cursor]] < theta) {
      (gold[order[cursor]] == Label::Political ? pol_below : non_below) += 1;
      ++cursor;
    }
    const eval::ConfusionMatrix cm{total_pol - pol_below, total_non - non_below, pol_below,
                                   non_below};
    if (!have_best || eval::compare_macro_f1(cm, best_cm) == std::strong_ordering::greater) {
      best_cm = cm;
      best_theta = theta;
      have_best = true;
    }
  }
  return {best_theta, eval::macro_f1(best_cm)};
}

ScoredDataset score_dataset(std::string name, const corpus::LabeledCorpus& corpus,
                            const Dictionary& dict, PreprocessMode mode,
                            const text::Preprocessor& pre) {
  const Dictionary normalized = dict.normalized(mode, pre);
  ScoredDataset out;
  out.name = std::move(name);
  out.ratios.reserve(corpus.size());
  for (const auto& d : corpus.documents())
    out.ratios.push_back(score_document(pre.apply(d.text, mode, d.id), normalized).ratio);
  out.gold = corpus.labels();
  return out;
}

Calibration calibrate_threshold(const corpus::LabeledCorpus& corpus, const Dictionary& dict,
                                PreprocessMode mode, const text::Preprocessor& pre) {
  if (!corpus.has_both_classes()) throw Error("calibrate_threshold: corpus needs both classes");
  const auto scored = score_dataset("", corpus, dict, mode, pre);
  return calibrate_threshold(scored.ratios, scored.gold);
}

double macro_f1_at(const ScoredDataset& data, double theta) {
  std::vector<Label> pred;
  pred.reserve(data.ratios.size());
  for (const double r : data.ratios) pred.push_back(r >= theta ? Label::Political : Label::NonPolitical);
  return eval::macro_f1(eval::confusion(data.gold, pred));
}

ConsistentThreshold select_consistent_threshold(std::span<const double> candidates,
                                                std::span<const ScoredDataset> datasets) {
  if (candidates.empty()) throw Error("select_consistent_threshold: no candidate thresholds");
  if (datasets.empty()) throw Error("select_consistent_threshold: no datasets");
  std::vector<double> sorted(candidates.begin(), candidates.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> means;
  means.reserve(sorted.size());
  for (const double theta : sorted) {
    double sum = 0.0;
    for (const auto& d : datasets) sum += macro_f1_at(d, theta);
    means.push_back(sum / static_cast<double>(datasets.size()));
  }
  const double best = *std::max_element(means.begin(), means.end());
  constexpr double kTie = 1e-12;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (means[i] >= best - kTie) return {sorted[i], means[i]};
  return {sorted.front(), means.front()};
}

}  // namespace agora::dict
