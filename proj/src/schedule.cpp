#include "mzi/schedule.hpp"

#include "mzi/format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace mzi {

namespace {

std::string num(double x) { return format_double(x); }

// Number of whole periods in total; throws unless total is a positive
// integer multiple of period (to 1e-9 relative).
std::size_t period_count(double period, double total) {
    if (!(period > 0.0) || !std::isfinite(period))
        throw std::invalid_argument("period must be positive and finite, got " + num(period));
    if (!(total > 0.0) || !std::isfinite(total))
        throw std::invalid_argument("total time must be positive and finite, got " + num(total));
    const double ratio = total / period;
    const double whole = std::round(ratio);
    if (whole < 1.0 || std::abs(ratio - whole) > 1e-9 * std::max(1.0, ratio)) {
        throw NonIntegerPeriodCount("total " + num(total) + " is not a positive integer multiple of " +
                                    num(period));
    }
    return static_cast<std::size_t>(whole);
}

// Appends [t0, t1) with state, extending the previous segment if it has the same state.
void push_merged(std::vector<Segment>& out, double t0, double t1, Bs2State state) {
    if (!(t1 > t0)) return;
    if (!out.empty() && out.back().state == state && out.back().t_end == t0) {
        out.back().t_end = t1;
        return;
    }
    out.push_back({t0, t1, state});
}

}  // namespace

std::string_view to_string(Bs2State s) noexcept { return s == Bs2State::In ? "IN" : "OUT"; }

const Schedule& validate(const Schedule& s) {
    if (!(s.total_time > 0.0) || !std::isfinite(s.total_time))
        throw EmptySchedule("schedule total time must be positive and finite, got T=" + num(s.total_time));
    if (s.segments.empty()) throw EmptySchedule("schedule has no segments");

    double cursor = 0.0;
    for (std::size_t i = 0; i < s.segments.size(); ++i) {
        const Segment& seg = s.segments[i];
        const std::string where = "segment " + std::to_string(i) + " [" + num(seg.t_start) + ", " +
                                  num(seg.t_end) + ")";
        if (!std::isfinite(seg.t_start) || !std::isfinite(seg.t_end))
            throw InvalidSegment(where + " has a non-finite boundary");
        if (!(seg.t_start < seg.t_end)) throw InvalidSegment(where + " has non-positive length");
        if (seg.t_start < cursor)
            throw OverlappingSegments(where + " starts at " + num(seg.t_start) + " before the previous end " +
                                      num(cursor));
        if (seg.t_start > cursor)
            throw GapInCoverage(where + ": nothing covers [" + num(cursor) + ", " + num(seg.t_start) + ")");
        cursor = seg.t_end;
    }
    if (cursor > s.total_time)
        throw OverlappingSegments("last segment ends at " + num(cursor) + ", beyond T=" + num(s.total_time));
    if (cursor < s.total_time)
        throw GapInCoverage("nothing covers [" + num(cursor) + ", " + num(s.total_time) + ")");
    return s;
}

std::vector<std::size_t> short_segments(const Schedule& s, double transit_time) {
    std::vector<std::size_t> out;
    if (!(transit_time > 0.0)) return out;
    for (std::size_t i = 0; i < s.segments.size(); ++i)
        if (s.segments[i].duration() < transit_time) out.push_back(i);
    return out;
}

Bs2State state_at(const Schedule& s, double t) {
    if (!(t >= 0.0 && t < s.total_time))
        throw TimeOutOfRange("t=" + num(t) + " outside [0, " + num(s.total_time) + ")");
    // First segment starting after t; the one before it contains t.
    const auto it = std::upper_bound(s.segments.begin(), s.segments.end(), t,
                                     [](double v, const Segment& seg) { return v < seg.t_start; });
    if (it == s.segments.begin()) throw TimeOutOfRange("t=" + num(t) + " precedes the first segment");
    return std::prev(it)->state;
}

DutyFractions fractions_from_a(double a_frac) {
    const double a = std::clamp(a_frac, 0.0, 1.0);
    return {a, 1.0 - a, std::asin(std::sqrt(a))};
}

DutyFractions duty_fractions(const Schedule& s) {
    double in_time = 0.0;
    for (const Segment& seg : s.segments)
        if (seg.state == Bs2State::In) in_time += seg.duration();
    return fractions_from_a(in_time / s.total_time);
}

Schedule make_periodic(double duty, double period, double total) {
    if (!(duty >= 0.0 && duty <= 1.0)) throw InvalidDuty("duty must lie in [0, 1], got " + num(duty));
    const std::size_t periods = period_count(period, total);

    Schedule s{{}, total};
    const double on = duty * period;
    for (std::size_t k = 0; k < periods; ++k) {
        const double start = static_cast<double>(k) * period;
        const double end = k + 1 == periods ? total : static_cast<double>(k + 1) * period;
        const double split = std::min(start + on, end);
        push_merged(s.segments, start, split, Bs2State::In);
        push_merged(s.segments, split, end, Bs2State::Out);
    }
    return validate(s);
}

Schedule make_random_telegraph(double p_in, double dwell, double total, std::uint64_t seed) {
    if (!(p_in >= 0.0 && p_in <= 1.0))
        throw InvalidProbability("p_in must lie in [0, 1], got " + num(p_in));
    const std::size_t slots = period_count(dwell, total);

    std::mt19937_64 rng(seed);
    Schedule s{{}, total};
    for (std::size_t k = 0; k < slots; ++k) {
        // 53-bit uniform in [0, 1), independent of the standard library's distributions.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double start = static_cast<double>(k) * dwell;
        const double end = k + 1 == slots ? total : static_cast<double>(k + 1) * dwell;
        push_merged(s.segments, start, end, u < p_in ? Bs2State::In : Bs2State::Out);
    }
    return validate(s);
}

void write_schedule(std::ostream& os, const Schedule& s) {
    os << "T=" << num(s.total_time) << '\n';
    for (const Segment& seg : s.segments)
        os << num(seg.t_start) << ' ' << num(seg.t_end) << ' ' << to_string(seg.state) << '\n';
}

std::string to_text(const Schedule& s) {
    std::ostringstream os;
    write_schedule(os, s);
    return os.str();
}

Schedule read_schedule(std::istream& is) {
    Schedule s;
    bool have_header = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const std::string where = "line " + std::to_string(lineno);

        if (!have_header) {
            const std::string_view body = std::string_view(line).substr(first);
            const auto total = body.starts_with("T=") ? parse_double(body.substr(2)) : std::nullopt;
            if (!total) throw ScheduleParseError(where + ": expected header 'T=<total>'");
            s.total_time = *total;
            have_header = true;
            continue;
        }

        std::istringstream fields(line);
        std::string a, b, state, extra;
        if (!(fields >> a >> b >> state) || (fields >> extra))
            throw ScheduleParseError(where + ": expected 't_start t_end IN|OUT'");
        const auto t0 = parse_double(a);
        const auto t1 = parse_double(b);
        if (!t0 || !t1) throw ScheduleParseError(where + ": malformed time value");
        Bs2State st;
        if (state == "IN") {
            st = Bs2State::In;
        } else if (state == "OUT") {
            st = Bs2State::Out;
        } else {
            throw ScheduleParseError(where + ": state must be IN or OUT, got '" + state + "'");
        }
        s.segments.push_back({*t0, *t1, st});
    }
    if (!have_header) throw ScheduleParseError("missing header 'T=<total>'");
    return validate(s);
}

Schedule parse_schedule(std::string_view text) {
    std::istringstream is{std::string(text)};
    return read_schedule(is);
}

Schedule load_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScheduleError("cannot open schedule file '" + path + "'");
    return read_schedule(in);
}

}  // namespace mzi
