#include "agora/preprocess.hpp"

#include <fstream>
#include <istream>

#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "agora/error.hpp"
#include "agora/unicode.hpp"

namespace agora::text {

std::string_view to_string(PreprocessMode mode) {
  switch (mode) {
    case PreprocessMode::None: return "none";
    case PreprocessMode::Stop: return "stop";
    case PreprocessMode::Stem: return "stem";
    case PreprocessMode::StemStop: return "stem-stop";
    case PreprocessMode::Lemma: return "lemma";
    case PreprocessMode::LemmaStop: return "lemma-stop";
  }
  return "none";
}

PreprocessMode parse_mode(std::string_view name) {
  for (auto m : kAllModes)
    if (to_string(m) == name) return m;
  throw Error("unknown preprocessing mode '" + std::string(name) +
              "' (expected none|stop|stem|stem-stop|lemma|lemma-stop)");
}

namespace {

std::string strip_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto b = line.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = line.find_last_not_of(" \t");
  return line.substr(b, e - b + 1);
}

}  // namespace

StopwordList::StopwordList(std::vector<std::string> words, std::string language)
    : language_(std::move(language)) {
  for (auto& w : words) {
    auto lw = unicode::to_lower(w);
    if (lw.empty()) throw Error("empty stopword");
    words_.insert(std::move(lw));
  }
}

StopwordList StopwordList::parse(std::istream& in, std::string language) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_line(std::move(line));
    if (line.empty() || line.front() == '#') continue;
    words.push_back(std::move(line));
  }
  return StopwordList(std::move(words), std::move(language));
}

StopwordList StopwordList::load(const std::filesystem::path& path, std::string language) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file: " + path.string());
  return parse(in, std::move(language));
}

LemmaTable::LemmaTable(const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [surface, lemma] : entries) {
    auto s = unicode::to_lower(surface);
    auto l = unicode::to_lower(lemma);
    if (s.empty() || l.empty()) throw Error("lemma table entries must be non-empty");
    entries_.insert_or_assign(std::move(s), std::move(l));
  }
}

LemmaTable LemmaTable::parse(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error("lemma table line " + std::to_string(lineno) + ": expected surface<TAB>lemma");
    entries.emplace_back(line.substr(0, tab), strip_line(line.substr(tab + 1)));
  }
  return LemmaTable(entries);
}

LemmaTable LemmaTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lemma table: " + path.string());
  return parse(in);
}

const std::string* LemmaTable::find(std::string_view surface) const {
  auto it = entries_.find(std::string(surface));
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> tokenize(std::string_view text) {
  auto u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  u.toLower(icu::Locale::getGerman());

  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (int32_t i = 0; i < u.length();) {
    const UChar32 c = u.char32At(i);
    i += U16_LENGTH(c);
    const auto type = static_cast<UCharCategory>(u_charType(c));
    const bool separator =
        u_isUWhiteSpace(c) || type == U_CONTROL_CHAR || type == U_DASH_PUNCTUATION ||
        type == U_START_PUNCTUATION || type == U_END_PUNCTUATION ||
        type == U_CONNECTOR_PUNCTUATION || type == U_OTHER_PUNCTUATION ||
        type == U_INITIAL_PUNCTUATION || type == U_FINAL_PUNCTUATION ||
        type == U_MATH_SYMBOL || type == U_CURRENCY_SYMBOL || type == U_MODIFIER_SYMBOL ||
        type == U_OTHER_SYMBOL;
    if (separator) {
      flush();
      continue;
    }
    // Format characters (soft hyphen, zero-width joiners) vanish inside words.
    if (type == U_FORMAT_CHAR) continue;
    char buf[U8_MAX_LENGTH];
    int32_t len = 0;
    UBool err = false;
    U8_APPEND(buf, len, U8_MAX_LENGTH, c, err);
    if (!err) current.append(buf, static_cast<std::size_t>(len));
  }
  flush();
  return tokens;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopwordList& stopwords) {
  if (stopwords.empty()) return tokens;
  std::erase_if(tokens, [&](const std::string& t) { return stopwords.contains(t); });
  return tokens;
}

std::string lemmatize(std::string_view token, const LemmaTable& table) {
  if (const auto* lemma = table.find(token)) return *lemma;
  return std::string(token);
}

std::vector<std::string> transform_tokens(std::vector<std::string> tokens, PreprocessMode mode,
                                          const StopwordList& stopwords,
                                          const LemmaTable& lemmas) {
  if (removes_stopwords(mode)) tokens = remove_stopwords(std::move(tokens), stopwords);
  if (stems(mode)) {
    for (auto& t : tokens) t = stem(t);
  } else if (lemmatizes(mode)) {
    for (auto& t : tokens) t = lemmatize(t, lemmas);
  }
  // A stem can come out empty only for empty input, but keep the invariant.
  std::erase_if(tokens, [](const std::string& t) { return t.empty(); });
  return tokens;
}

TokenizedDoc apply_mode(std::string_view text, PreprocessMode mode,
                        const StopwordList& stopwords, const LemmaTable& lemmas,
                        std::string doc_id) {
  TokenizedDoc doc;
  doc.doc_id = std::move(doc_id);
  doc.mode = mode;
  doc.tokens = transform_tokens(tokenize(text), mode, stopwords, lemmas);
  doc.unique_terms.insert(doc.tokens.begin(), doc.tokens.end());
  return doc;
}

}  // namespace agora::text
