// CISTEM stemmer for German (Weissweiler & Fraser), case-insensitive variant.
// Works on code points; tokens arrive already lowercased.

#include <string>
#include <string_view>

#include <unicode/unistr.h>

#include "agora/preprocess.hpp"

namespace agora::text {

namespace {

std::u32string to_u32(std::string_view utf8) {
  auto u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  std::u32string out(static_cast<std::size_t>(u.countChar32()), U'\0');
  UErrorCode status = U_ZERO_ERROR;
  u.toUTF32(reinterpret_cast<UChar32*>(out.data()), static_cast<int32_t>(out.size()), status);
  return out;
}

std::string to_utf8(const std::u32string& s) {
  auto u = icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(s.data()),
                                         static_cast<int32_t>(s.size()));
  std::string out;
  u.toUTF8String(out);
  return out;
}

void replace_all(std::u32string& s, std::u32string_view from, std::u32string_view to) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, from.size(), from) == 0) {
      out += to;
      i += from.size();
    } else {
      out += s[i++];
    }
  }
  s = std::move(out);
}

// Placeholders for the digraph/trigraph substitutions; none of these can
// occur in a token because the tokenizer turns punctuation into separators.
constexpr char32_t kSch = U'$';
constexpr char32_t kEi = U'%';
constexpr char32_t kIe = U'&';
constexpr char32_t kDouble = U'*';

void encode_clusters(std::u32string& w) {
  replace_all(w, U"sch", std::u32string(1, kSch));
  replace_all(w, U"ei", std::u32string(1, kEi));
  replace_all(w, U"ie", std::u32string(1, kIe));
  // Doubled letter -> letter + '*', non-overlapping left to right.
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i + 1] == w[i]) {
      w[i + 1] = kDouble;
      ++i;
    }
  }
}

void decode_clusters(std::u32string& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == kDouble) w[i] = w[i - 1];
  replace_all(w, std::u32string(1, kEi), U"ei");
  replace_all(w, std::u32string(1, kIe), U"ie");
  replace_all(w, std::u32string(1, kSch), U"sch");
}

}  // namespace

std::string stem(std::string_view token) {
  if (token.empty()) return {};
  std::u32string w = to_u32(token);

  replace_all(w, U"ü", U"u");
  replace_all(w, U"ö", U"o");
  replace_all(w, U"ä", U"a");
  replace_all(w, U"ß", U"ss");
  if (w.size() >= 6 && w[0] == U'g' && w[1] == U'e') w.erase(0, 2);

  encode_clusters(w);

  while (w.size() > 3) {
    const char32_t last = w.back();
    const char32_t prev = w[w.size() - 2];
    if (w.size() > 5) {
      if (prev == U'e' && (last == U'm' || last == U'r')) {
        w.resize(w.size() - 2);
        continue;
      }
      if (prev == U'n' && last == U'd') {
        w.resize(w.size() - 2);
        continue;
      }
    }
    if (last == U't' || last == U'e' || last == U's' || last == U'n') {
      w.pop_back();
      continue;
    }
    break;
  }

  decode_clusters(w);
  return to_utf8(w);
}

}  // namespace agora::text
