#pragma once

// Single-particle event generation against a BS2 schedule.
//
// Every particle samples the schedule at its arrival instant and is then
// scattered by whichever stationary pipeline is in place at that moment, so
// each event is wholly "in" or wholly "out". Counting many events realizes
// the time-averaged signal A*P_in + B*P_out.
//
// Randomness: phase point k draws from its own mt19937_64 substream seeded by
// std::seed_seq{lo32(seed), hi32(seed), lo32(k), hi32(k)}. Phase points are
// therefore independent work units, and results are bitwise identical for any
// worker count.

#include "mzi/schedule.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mzi {

enum class Detector : std::uint8_t { X, Y };

[[nodiscard]] std::string_view to_string(Detector d) noexcept;

/// Arrival statistics. Uniform places arrival k at k/rate; Poisson uses
/// exponential inter-arrival gaps. Either stream wraps modulo T. A rate of 0
/// selects n_events / T, which for Uniform spaces the events evenly over one
/// window so each state is sampled in exact proportion to its duration.
struct ArrivalModel {
    enum class Kind : std::uint8_t { Uniform, Poisson };

    Kind kind = Kind::Uniform;
    double rate = 0.0;  ///< events per second; 0 means "n_events / T"

    static ArrivalModel uniform(double rate = 0.0) { return {Kind::Uniform, rate}; }
    static ArrivalModel poisson(double rate = 0.0) { return {Kind::Poisson, rate}; }
};

struct EventRecord {
    double time = 0.0;
    double phase = 0.0;
    Bs2State bs2_state = Bs2State::In;
    Detector detector = Detector::X;

    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct PhaseCounts {
    double phase = 0.0;
    std::uint64_t n_x_in = 0;
    std::uint64_t n_y_in = 0;
    std::uint64_t n_x_out = 0;
    std::uint64_t n_y_out = 0;

    [[nodiscard]] std::uint64_t n_x() const noexcept { return n_x_in + n_x_out; }
    [[nodiscard]] std::uint64_t n_y() const noexcept { return n_y_in + n_y_out; }
    [[nodiscard]] std::uint64_t n_in() const noexcept { return n_x_in + n_y_in; }
    [[nodiscard]] std::uint64_t n_out() const noexcept { return n_x_out + n_y_out; }
    [[nodiscard]] std::uint64_t total() const noexcept { return n_in() + n_out(); }

    void add(Detector d, Bs2State s) noexcept;

    friend bool operator==(const PhaseCounts&, const PhaseCounts&) = default;
};

/// Detection counts per phase point, partitioned by detector and BS2 state.
/// The in/out split is stored; per-detector totals are derived, so
/// n_x = n_x_in + n_x_out holds by construction.
struct CountTable {
    std::vector<PhaseCounts> rows;

    [[nodiscard]] std::uint64_t total() const noexcept;
    [[nodiscard]] std::uint64_t total_in() const noexcept;
    [[nodiscard]] std::uint64_t total_out() const noexcept;

    /// Element-wise sum. Both tables must share the same phase grid.
    [[nodiscard]] static CountTable merge(const CountTable& a, const CountTable& b);
    [[nodiscard]] static CountTable zeros(std::span<const double> phases);

    friend bool operator==(const CountTable&, const CountTable&) = default;
};

struct RunOptions {
    std::size_t workers = 1;
    bool keep_events = true;
};

struct RunResult {
    std::vector<EventRecord> events;  ///< empty unless RunOptions::keep_events
    CountTable table;
};

class EmptyPhaseGrid : public std::invalid_argument {
public:
    explicit EmptyPhaseGrid(const std::string& what) : std::invalid_argument(what) {}
};
class InvalidEventCount : public std::invalid_argument {
public:
    explicit InvalidEventCount(const std::string& what) : std::invalid_argument(what) {}
};
class UnknownPhase : public std::invalid_argument {
public:
    explicit UnknownPhase(const std::string& what) : std::invalid_argument(what) {}
};

struct DetectionProbs {
    double p_x = 0.0;
    double p_y = 0.0;
};

/// Normalized port probabilities of one stationary pipeline. p_x + p_y == 1 exactly.
[[nodiscard]] DetectionProbs detection_probs(double phi, Bs2State state);

[[nodiscard]] RunResult run(const Schedule& schedule, std::span<const double> phases,
                            std::uint64_t n_events_per_phase, const ArrivalModel& arrivals,
                            std::uint64_t seed, const RunOptions& options = {});

/// Recounts an event list onto a phase grid. Phases are matched exactly.
[[nodiscard]] CountTable accumulate(std::span<const EventRecord> events,
                                    std::span<const double> phases);

/// Header: time,phase,bs2_state,detector
void write_event_log_csv(std::ostream& os, std::span<const EventRecord> events);
/// Header: phase,n_x,n_y,n_x_in,n_y_in,n_x_out,n_y_out
void write_count_table_csv(std::ostream& os, const CountTable& table);

}  // namespace mzi
