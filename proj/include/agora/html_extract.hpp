#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace agora::html {

struct HtmlPage {
  std::string raw;  // arbitrary bytes
  std::optional<std::string> declared_encoding;
};

struct ExtractedText {
  std::string text;  // valid UTF-8
  double noise_score = 0.0;
};

// Visible text of a page. Never throws: script/style/noscript/template
// content and comments are dropped, every tag becomes a space, the basic
// entities are decoded and whitespace runs collapse to one space.
ExtractedText extract_text(const HtmlPage& page);

// Share of code points outside letters, digits, whitespace and . , ; : ! ? ' " - ( )
double noise_score(std::string_view utf8);

// Decodes raw bytes to UTF-8. The declared encoding wins, then a <meta>
// charset found near the top of the document, then UTF-8. Undecodable bytes
// become U+FFFD.
std::string decode_to_utf8(std::string_view raw,
                           const std::optional<std::string>& declared_encoding);

// charset named by <meta charset=...> or <meta http-equiv ... content="...charset=...">
std::optional<std::string> sniff_meta_charset(std::string_view raw);

}  // namespace agora::html
