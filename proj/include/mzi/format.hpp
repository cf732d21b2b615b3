#pragma once

// Shortest round-trip decimal text for doubles. Every CSV and schedule file
// goes through these so that parse(format(x)) == x bit for bit.

#include <optional>
#include <string>
#include <string_view>

namespace mzi {

[[nodiscard]] std::string format_double(double x);

/// Whole-token parse; nullopt on trailing garbage or empty input.
[[nodiscard]] std::optional<double> parse_double(std::string_view text) noexcept;

}  // namespace mzi
