#include "agora/html_extract.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <memory>

#include <unicode/uchar.h>
#include <unicode/ucnv.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "agora/unicode.hpp"

namespace agora::html {

namespace {

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

void append_utf8(std::string& out, UChar32 cp) {
  if (cp <= 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool err = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, cp, err);
  out.append(buf, static_cast<std::size_t>(len));
}

// Case-insensitive search for `needle` (lowercase ASCII) starting at `from`.
std::size_t ifind(std::string_view hay, std::string_view needle, std::size_t from) {
  if (needle.size() > hay.size()) return std::string_view::npos;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < needle.size() && ok; ++k)
      ok = std::tolower(static_cast<unsigned char>(hay[i + k])) == needle[k];
    if (ok) return i;
  }
  return std::string_view::npos;
}

struct NamedEntity {
  std::string_view name;
  UChar32 cp;
};

constexpr std::array<NamedEntity, 26> kEntities{{
    {"amp", '&'},      {"lt", '<'},        {"gt", '>'},       {"quot", '"'},
    {"apos", '\''},    {"nbsp", 0xA0},     {"auml", 0xE4},    {"ouml", 0xF6},
    {"uuml", 0xFC},    {"Auml", 0xC4},     {"Ouml", 0xD6},    {"Uuml", 0xDC},
    {"szlig", 0xDF},   {"eacute", 0xE9},   {"egrave", 0xE8},  {"agrave", 0xE0},
    {"euro", 0x20AC},  {"ndash", 0x2013},  {"mdash", 0x2014}, {"bdquo", 0x201E},
    {"ldquo", 0x201C}, {"rdquo", 0x201D},  {"laquo", 0xAB},   {"raquo", 0xBB},
    {"shy", 0xAD},     {"hellip", 0x2026},
}};

// Decodes an entity starting at s[i] == '&'. Returns bytes consumed, 0 if
// the text is not a recognised entity.
std::size_t decode_entity(std::string_view s, std::size_t i, std::string& out) {
  std::size_t j = i + 1;
  if (j < s.size() && s[j] == '#') {
    ++j;
    int base = 10;
    if (j < s.size() && (s[j] == 'x' || s[j] == 'X')) {
      base = 16;
      ++j;
    }
    const std::size_t digits_begin = j;
    long long value = 0;
    while (j < s.size() && std::isxdigit(static_cast<unsigned char>(s[j])) &&
           (base == 16 || std::isdigit(static_cast<unsigned char>(s[j])))) {
      const int d = std::isdigit(static_cast<unsigned char>(s[j]))
                        ? s[j] - '0'
                        : std::tolower(static_cast<unsigned char>(s[j])) - 'a' + 10;
      if (value <= 0x10FFFF) value = value * base + d;
      ++j;
    }
    if (j == digits_begin) return 0;
    if (j < s.size() && s[j] == ';') ++j;
    append_utf8(out, value > 0x10FFFF ? 0xFFFD : static_cast<UChar32>(value));
    return j - i;
  }
  std::size_t k = j;
  while (k < s.size() && k - j < 8 && std::isalnum(static_cast<unsigned char>(s[k]))) ++k;
  if (k >= s.size() || s[k] != ';') return 0;
  const std::string_view name = s.substr(j, k - j);
  for (const auto& e : kEntities) {
    if (e.name == name) {
      append_utf8(out, e.cp);
      return k + 1 - i;
    }
  }
  return 0;
}

constexpr std::array<std::string_view, 4> kRawTextTags{"script", "style", "noscript", "template"};

// Skips a tag body starting after its name, honouring quoted attribute
// values. Returns the index just past '>' or npos when the input ends first.
std::size_t skip_tag_body(std::string_view s, std::size_t i) {
  char last_significant = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '>') return i + 1;
    if ((c == '"' || c == '\'') && last_significant == '=') {
      const auto close = s.find(c, i + 1);
      if (close == std::string_view::npos) return std::string_view::npos;
      i = close + 1;
      last_significant = c;
      continue;
    }
    if (!is_ascii_space(c)) last_significant = c;
    ++i;
  }
  return std::string_view::npos;
}

std::string strip_markup(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const char c = s[i];
    if (c == '&') {
      if (const auto used = decode_entity(s, i, out)) {
        i += used;
        continue;
      }
      out += c;
      ++i;
      continue;
    }
    if (c != '<' || i + 1 >= n) {
      out += c;
      ++i;
      continue;
    }
    const char next = s[i + 1];
    if (s.substr(i, 4) == "<!--") {
      std::size_t body = i + 4;
      // "<!-->" and "<!--->" close immediately.
      if (s.substr(body, 1) == ">") {
        i = body + 1;
      } else if (s.substr(body, 2) == "->") {
        i = body + 2;
      } else {
        const auto end = s.find("-->", body);
        i = end == std::string_view::npos ? n : end + 3;
      }
      continue;
    }
    if (next == '!' || next == '?' || (next == '/' && (i + 2 >= n || !is_ascii_alpha(s[i + 2])))) {
      // Doctype, processing instruction, CDATA or bogus end tag.
      const auto end = s.find('>', i + 1);
      i = end == std::string_view::npos ? n : end + 1;
      out += ' ';
      continue;
    }
    const bool closing = next == '/';
    const std::size_t name_begin = i + (closing ? 2 : 1);
    if (!is_ascii_alpha(s[name_begin])) {
      out += c;
      ++i;
      continue;
    }
    std::size_t name_end = name_begin;
    while (name_end < n && !is_ascii_space(s[name_end]) && s[name_end] != '/' && s[name_end] != '>')
      ++name_end;
    const std::string name = unicode::ascii_lower(s.substr(name_begin, name_end - name_begin));
    const auto after = skip_tag_body(s, name_end);
    if (after == std::string_view::npos) break;  // tag cut off by end of input
    i = after;
    out += ' ';
    if (closing) continue;
    const bool self_closing = after >= 2 && s[after - 2] == '/';
    if (self_closing || std::find(kRawTextTags.begin(), kRawTextTags.end(), name) == kRawTextTags.end())
      continue;
    // Raw text element: drop everything up to the matching end tag.
    const std::string close = "</" + name;
    std::size_t pos = i;
    while (true) {
      pos = ifind(s, close, pos);
      if (pos == std::string_view::npos) {
        i = n;
        break;
      }
      const std::size_t tail = pos + close.size();
      if (tail >= n || is_ascii_space(s[tail]) || s[tail] == '/' || s[tail] == '>') {
        const auto end = s.find('>', tail);
        i = end == std::string_view::npos ? n : end + 1;
        break;
      }
      pos = tail;
    }
  }
  return out;
}

bool is_collapsible_space(UChar32 cp) { return cp == 0xA0 || u_isUWhiteSpace(cp); }

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  int32_t i = 0;
  const auto len = static_cast<int32_t>(s.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  while (i < len) {
    const int32_t start = i;
    UChar32 cp;
    U8_NEXT(bytes, i, len, cp);
    if (cp >= 0 && is_collapsible_space(cp)) {
      pending = true;
      continue;
    }
    if (pending && !out.empty()) out += ' ';
    pending = false;
    if (cp < 0)
      append_utf8(out, 0xFFFD);
    else
      out.append(s.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(i - start)));
  }
  return out;
}

std::string normalise_charset(std::string name) {
  name = unicode::ascii_lower(name);
  const auto b = name.find_first_not_of(" \t\"'");
  if (b == std::string::npos) return {};
  const auto e = name.find_last_not_of(" \t\"';");
  name = name.substr(b, e - b + 1);
  // Browsers treat these labels as windows-1252.
  if (name == "iso-8859-1" || name == "latin1" || name == "iso8859-1" || name == "us-ascii" ||
      name == "ascii" || name == "l1" || name == "cp1252")
    return "windows-1252";
  if (name == "utf8") return "utf-8";
  return name;
}

std::optional<std::string> convert_with_icu(std::string_view raw, const std::string& charset) {
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<UConverter, decltype(&ucnv_close)> conv(ucnv_open(charset.c_str(), &status),
                                                           &ucnv_close);
  if (U_FAILURE(status) || !conv) return std::nullopt;
  icu::UnicodeString u(raw.data(), static_cast<int32_t>(raw.size()), conv.get(), status);
  if (U_FAILURE(status) || u.isBogus()) return std::nullopt;
  u.findAndReplace(icu::UnicodeString(static_cast<UChar32>(0x1A)),
                   icu::UnicodeString(static_cast<UChar32>(0xFFFD)));
  std::string out;
  u.toUTF8String(out);
  return out;
}

}  // namespace

std::optional<std::string> sniff_meta_charset(std::string_view raw) {
  const std::string_view head = raw.substr(0, 4096);
  std::size_t pos = 0;
  while ((pos = ifind(head, "<meta", pos)) != std::string_view::npos) {
    const auto end = head.find('>', pos);
    const std::string_view tag =
        head.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    if (const auto cs = ifind(tag, "charset", 0); cs != std::string_view::npos) {
      std::size_t v = cs + 7;
      while (v < tag.size() && (is_ascii_space(tag[v]) || tag[v] == '=' || tag[v] == '"' || tag[v] == '\''))
        ++v;
      std::size_t w = v;
      while (w < tag.size() && (std::isalnum(static_cast<unsigned char>(tag[w])) || tag[w] == '-' ||
                                tag[w] == '_' || tag[w] == ':' || tag[w] == '.'))
        ++w;
      if (w > v) return std::string(tag.substr(v, w - v));
    }
    pos += 5;
  }
  return std::nullopt;
}

std::string decode_to_utf8(std::string_view raw,
                           const std::optional<std::string>& declared_encoding) {
  if (raw.starts_with("\xEF\xBB\xBF")) return unicode::sanitize_utf8(raw.substr(3));
  if (raw.starts_with("\xFF\xFE") || raw.starts_with("\xFE\xFF")) {
    if (auto s = convert_with_icu(raw, "utf-16")) return *s;
  }
  std::optional<std::string> charset = declared_encoding;
  if (!charset || charset->empty()) charset = sniff_meta_charset(raw);
  if (charset) {
    const std::string name = normalise_charset(*charset);
    if (!name.empty() && name != "utf-8") {
      if (auto s = convert_with_icu(raw, name)) return *s;
    }
  }
  return unicode::sanitize_utf8(raw);
}

ExtractedText extract_text(const HtmlPage& page) {
  ExtractedText result;
  try {
    const std::string decoded = decode_to_utf8(page.raw, page.declared_encoding);
    result.text = collapse_whitespace(strip_markup(decoded));
  } catch (...) {
    // Only allocation failure can get here; an empty extraction is the
    // total-function fallback.
    result.text.clear();
  }
  result.noise_score = noise_score(result.text);
  return result;
}

double noise_score(std::string_view utf8) {
  static constexpr std::string_view kBasicPunct = ".,;:!?'\"-()";
  std::size_t total = 0, noisy = 0;
  int32_t i = 0;
  const auto len = static_cast<int32_t>(utf8.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(utf8.data());
  while (i < len) {
    UChar32 cp;
    U8_NEXT(bytes, i, len, cp);
    ++total;
    if (cp < 0) {
      ++noisy;
      continue;
    }
    const bool clean = u_isalpha(cp) || u_isdigit(cp) || u_isUWhiteSpace(cp) ||
                       (cp < 0x80 && kBasicPunct.find(static_cast<char>(cp)) != std::string_view::npos);
    if (!clean) ++noisy;
  }
  return static_cast<double>(noisy) / static_cast<double>(std::max<std::size_t>(1, total));
}

}  // namespace agora::html
