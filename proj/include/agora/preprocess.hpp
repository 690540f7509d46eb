#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace agora::text {

enum class PreprocessMode { None, Stop, Stem, StemStop, Lemma, LemmaStop };

inline constexpr std::array<PreprocessMode, 6> kAllModes{
    PreprocessMode::None, PreprocessMode::Stop,  PreprocessMode::Stem,
    PreprocessMode::StemStop, PreprocessMode::Lemma, PreprocessMode::LemmaStop};

// CLI spelling: none|stop|stem|stem-stop|lemma|lemma-stop
std::string_view to_string(PreprocessMode mode);
PreprocessMode parse_mode(std::string_view name);  // throws agora::Error

constexpr bool removes_stopwords(PreprocessMode m) {
  return m == PreprocessMode::Stop || m == PreprocessMode::StemStop ||
         m == PreprocessMode::LemmaStop;
}
constexpr bool stems(PreprocessMode m) {
  return m == PreprocessMode::Stem || m == PreprocessMode::StemStop;
}
constexpr bool lemmatizes(PreprocessMode m) {
  return m == PreprocessMode::Lemma || m == PreprocessMode::LemmaStop;
}

class StopwordList {
 public:
  StopwordList() = default;
  StopwordList(std::vector<std::string> words, std::string language = "de");

  // One word per line, '#' comments and blank lines ignored.
  static StopwordList load(const std::filesystem::path& path, std::string language = "de");
  static StopwordList parse(std::istream& in, std::string language = "de");

  bool contains(std::string_view token) const { return words_.contains(std::string(token)); }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::string& language() const { return language_; }

 private:
  std::unordered_set<std::string> words_;
  std::string language_ = "de";
};

// surface form -> lemma, both lowercase.
class LemmaTable {
 public:
  LemmaTable() = default;
  explicit LemmaTable(const std::vector<std::pair<std::string, std::string>>& entries);

  // Two-column TSV (surface TAB lemma); '#' comments ignored.
  static LemmaTable load(const std::filesystem::path& path);
  static LemmaTable parse(std::istream& in);

  const std::string* find(std::string_view surface) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
};

struct TokenizedDoc {
  std::string doc_id;
  PreprocessMode mode = PreprocessMode::None;
  std::vector<std::string> tokens;
  std::set<std::string> unique_terms;

  bool operator==(const TokenizedDoc&) const = default;
};

// Lowercase, replace every Unicode punctuation/symbol code point by a space,
// split on whitespace. Digits are kept.
std::vector<std::string> tokenize(std::string_view text);

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopwordList& stopwords);

// CISTEM stemmer for German, case-insensitive variant.
std::string stem(std::string_view token);

std::string lemmatize(std::string_view token, const LemmaTable& table);

// Token-level part of a mode: stopword removal first, then stem/lemma.
std::vector<std::string> transform_tokens(std::vector<std::string> tokens, PreprocessMode mode,
                                          const StopwordList& stopwords,
                                          const LemmaTable& lemmas);

TokenizedDoc apply_mode(std::string_view text, PreprocessMode mode,
                        const StopwordList& stopwords, const LemmaTable& lemmas,
                        std::string doc_id = {});

// Bundles the language resources every mode needs.
class Preprocessor {
 public:
  Preprocessor() = default;
  Preprocessor(StopwordList stopwords, LemmaTable lemmas)
      : stopwords_(std::move(stopwords)), lemmas_(std::move(lemmas)) {}

  TokenizedDoc apply(std::string_view text, PreprocessMode mode, std::string doc_id = {}) const {
    return apply_mode(text, mode, stopwords_, lemmas_, std::move(doc_id));
  }
  std::vector<std::string> transform(std::vector<std::string> tokens, PreprocessMode mode) const {
    return transform_tokens(std::move(tokens), mode, stopwords_, lemmas_);
  }

  const StopwordList& stopwords() const { return stopwords_; }
  const LemmaTable& lemmas() const { return lemmas_; }

 private:
  StopwordList stopwords_;
  LemmaTable lemmas_;
};

}  // namespace agora::text
