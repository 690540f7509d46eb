#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace agora {

// Binary label vocabulary. Political is the positive class everywhere.
enum class Label : std::uint8_t { NonPolitical = 0, Political = 1 };

inline constexpr std::array<Label, 2> kLabels{Label::NonPolitical, Label::Political};

constexpr std::string_view to_string(Label l) {
  return l == Label::Political ? "political" : "non_political";
}

constexpr Label other(Label l) {
  return l == Label::Political ? Label::NonPolitical : Label::Political;
}

constexpr std::size_t index_of(Label l) { return static_cast<std::size_t>(l); }

// Accepts "political" / "non_political" (also "non-political", "1", "0").
std::optional<Label> parse_label(std::string_view s);

}  // namespace agora
