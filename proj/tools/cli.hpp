#pragma once

// Command-line front end for the interferometer simulator.
//
// Exit codes: 0 pass, 1 acceptance check failed, 2 usage/config error,
// 3 degenerate data (a BS2 subset never occurs).

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mzi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDegenerate = 3;

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 0;
};

/// Angles accept plain numbers and multiples of pi: "pi", "-pi", "2pi",
/// "2*pi", "pi/2", "3pi/4", "0.5pi".
[[nodiscard]] std::optional<double> parse_angle(std::string_view text);

/// "start:stop:count", inclusive of both ends. Throws std::invalid_argument
/// on malformed input or count < 2.
[[nodiscard]] GridSpec parse_grid(std::string_view text);

/// Runs one invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mzi::cli
