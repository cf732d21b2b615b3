#pragma once

// Piecewise-constant control of BS2 over the accumulation window [0, T).
//
// A schedule is a contiguous run of half-open segments [t_start, t_end),
// each carrying exactly one BS2 state, so a(t) b(t) = 0 and a(t) + b(t) = 1
// at every instant. A boundary instant belongs to the segment that starts
// there. Switching is instantaneous.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mzi {

enum class Bs2State : std::uint8_t { In, Out };

[[nodiscard]] std::string_view to_string(Bs2State s) noexcept;

struct Segment {
    double t_start = 0.0;
    double t_end = 0.0;
    Bs2State state = Bs2State::In;

    [[nodiscard]] double duration() const noexcept { return t_end - t_start; }

    friend bool operator==(const Segment&, const Segment&) = default;
};

struct Schedule {
    std::vector<Segment> segments;
    double total_time = 0.0;

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Time-averaged |a|^2 and |b|^2. theta is derived from a_frac (A = sin^2 theta)
/// and is never set independently.
struct DutyFractions {
    double a_frac = 0.0;
    double b_frac = 0.0;
    double theta = 0.0;
};

class ScheduleError : public std::invalid_argument {
public:
    explicit ScheduleError(const std::string& what) : std::invalid_argument(what) {}
};
class EmptySchedule : public ScheduleError {
public:
    using ScheduleError::ScheduleError;
};
class OverlappingSegments : public ScheduleError {
public:
    using ScheduleError::ScheduleError;
};
class GapInCoverage : public ScheduleError {
public:
    using ScheduleError::ScheduleError;
};
class InvalidSegment : public ScheduleError {
public:
    using ScheduleError::ScheduleError;
};
class TimeOutOfRange : public std::out_of_range {
public:
    explicit TimeOutOfRange(const std::string& what) : std::out_of_range(what) {}
};
class InvalidDuty : public std::invalid_argument {
public:
    explicit InvalidDuty(const std::string& what) : std::invalid_argument(what) {}
};
class InvalidProbability : public std::invalid_argument {
public:
    explicit InvalidProbability(const std::string& what) : std::invalid_argument(what) {}
};
class NonIntegerPeriodCount : public std::invalid_argument {
public:
    explicit NonIntegerPeriodCount(const std::string& what) : std::invalid_argument(what) {}
};
class ScheduleParseError : public ScheduleError {
public:
    using ScheduleError::ScheduleError;
};

/// Returns s unchanged if it covers [0, T) contiguously with positive-length
/// segments. The exception message names the first offending boundary.
const Schedule& validate(const Schedule& s);

/// Indices of segments shorter than transit_time. The switching model assumes
/// transit through BS2 is much faster than any segment; a non-empty result
/// means that approximation is questionable. transit_time <= 0 disables the check.
[[nodiscard]] std::vector<std::size_t> short_segments(const Schedule& s, double transit_time);

/// State of the segment containing t. Requires 0 <= t < T.
[[nodiscard]] Bs2State state_at(const Schedule& s, double t);

/// For step functions the integrals reduce to duration sums.
[[nodiscard]] DutyFractions duty_fractions(const Schedule& s);

/// DutyFractions for a given A, with B = 1 - A and theta = asin(sqrt(A)).
[[nodiscard]] DutyFractions fractions_from_a(double a_frac);

/// Each period is In for duty*period then Out for the remainder. Adjacent
/// segments with equal state are merged, so duty 0 or 1 gives one segment.
[[nodiscard]] Schedule make_periodic(double duty, double period, double total);

/// Each dwell-length slot is independently In with probability p_in.
/// Deterministic for a fixed seed.
[[nodiscard]] Schedule make_random_telegraph(double p_in, double dwell, double total,
                                             std::uint64_t seed);

/// Text form: header "T=<total>", then one "t_start t_end IN|OUT" line per
/// segment. Numbers use shortest round-trip decimal, so read(write(s)) == s bit for bit.
void write_schedule(std::ostream& os, const Schedule& s);
[[nodiscard]] std::string to_text(const Schedule& s);

/// Parses and validates. Blank lines and lines starting with '#' are ignored.
[[nodiscard]] Schedule read_schedule(std::istream& is);
[[nodiscard]] Schedule parse_schedule(std::string_view text);
[[nodiscard]] Schedule load_schedule(const std::string& path);

}  // namespace mzi
