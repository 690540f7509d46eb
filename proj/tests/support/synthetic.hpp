#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "agora/corpus.hpp"
#include "agora/label.hpp"
#include "agora/rng.hpp"

namespace synth {

using agora::Label;
using agora::corpus::Document;

inline Document doc(std::string id, std::string text, std::optional<Label> label = std::nullopt,
                    std::string source = {}, std::vector<std::string> tags = {}) {
  Document d;
  d.id = std::move(id);
  d.text = std::move(text);
  d.source = std::move(source);
  d.tags = std::move(tags);
  d.label = label;
  return d;
}

// Class vocabularies with no overlap under any preprocessing mode. The
// political words all occur in the bundled demo dictionary.
inline const std::vector<std::string>& political_words() {
  static const std::vector<std::string> w{
      "Bundestag", "Regierung",  "Parlament", "Koalition", "Minister",  "Wahlkampf",
      "Partei",    "Gesetz",     "Opposition", "Abstimmung", "Fraktion", "Kanzlerin",
      "Landtag",   "Referendum", "Ministerium", "Parteitag"};
  return w;
}

inline const std::vector<std::string>& other_words() {
  static const std::vector<std::string> w{
      "Fußball",  "Trainer", "Konzert", "Rezept",  "Wetter",   "Urlaub", "Kino",  "Garten",
      "Torwart",  "Gitarre", "Kuchen",  "Strand",  "Schnee",   "Serie",  "Museum", "Tanzkurs"};
  return w;
}

inline std::string random_text(const std::vector<std::string>& main,
                               const std::vector<std::string>& other, double noise,
                               std::mt19937_64& rng) {
  const std::size_t n = 8 + agora::uniform_below(rng, 8);
  std::string text;
  for (std::size_t i = 0; i < n; ++i) {
    const bool flip = noise > 0.0 && static_cast<double>(agora::uniform_below(rng, 1000)) < noise * 1000.0;
    const auto& pool = flip ? other : main;
    if (!text.empty()) text += ' ';
    text += pool[agora::uniform_below(rng, pool.size())];
  }
  text += '.';
  return text;
}

// n_pol political and n_non non-political documents, interleaved. With
// noise > 0 each word comes from the other class's pool with that probability.
inline std::vector<Document> corpus(std::size_t n_pol, std::size_t n_non, std::uint64_t seed,
                                    const std::string& prefix = "d", double noise = 0.0) {
  std::mt19937_64 rng(seed);
  std::vector<Document> out;
  std::size_t p = 0, q = 0;
  while (p < n_pol || q < n_non) {
    const bool pol = q >= n_non || (p < n_pol && agora::uniform_below(rng, n_pol + n_non) < n_pol);
    const auto id = prefix + std::to_string(out.size());
    if (pol) {
      out.push_back(doc(id, random_text(political_words(), other_words(), noise, rng), Label::Political));
      ++p;
    } else {
      out.push_back(doc(id, random_text(other_words(), political_words(), noise, rng), Label::NonPolitical));
      ++q;
    }
  }
  return out;
}

// Fresh directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::uint64_t counter = 0;
  std::random_device rd;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("agora_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace synth
