#pragma once

#include <string>
#include <string_view>

namespace agora::unicode {

// Full Unicode lowercasing of UTF-8 text (German rules; ß is preserved).
// Invalid byte sequences become U+FFFD.
std::string to_lower(std::string_view utf8);

std::string ascii_lower(std::string_view s);
std::string ascii_upper(std::string_view s);

// Re-encodes text as valid UTF-8, replacing invalid sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

}  // namespace agora::unicode
