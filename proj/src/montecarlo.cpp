#include "mzi/montecarlo.hpp"

#include "mzi/format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <thread>
#include <unordered_map>

namespace mzi {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(index), hi(index)};
    return std::mt19937_64(seq);
}

struct PhaseRun {
    PhaseCounts counts;
    std::vector<EventRecord> events;
};

PhaseRun run_phase(const Schedule& schedule, double phase, std::size_t phase_index,
                   std::uint64_t n_events, const ArrivalModel& arrivals, std::uint64_t seed,
                   bool keep_events) {
    const double total = schedule.total_time;
    const bool auto_rate = arrivals.rate == 0.0;
    const double rate = auto_rate ? static_cast<double>(n_events) / total : arrivals.rate;
    const DetectionProbs in_probs = detection_probs(phase, Bs2State::In);
    const DetectionProbs out_probs = detection_probs(phase, Bs2State::Out);

    std::mt19937_64 rng = substream(seed, phase_index);
    PhaseRun out;
    out.counts.phase = phase;
    if (keep_events) out.events.reserve(n_events);

    // Walk the schedule with a cursor while arrivals are increasing; fall back
    // to a binary search after a wrap.
    std::size_t seg = 0;
    double clock = 0.0;
    double last_time = -1.0;
    for (std::uint64_t i = 0; i < n_events; ++i) {
        double t;
        if (arrivals.kind == ArrivalModel::Kind::Uniform) {
            t = auto_rate ? static_cast<double>(i) * total / static_cast<double>(n_events)
                          : std::fmod(static_cast<double>(i) / rate, total);
        } else {
            clock += -std::log1p(-uniform01(rng)) / rate;
            t = std::fmod(clock, total);
        }

        if (t < last_time) seg = 0;
        last_time = t;
        while (t >= schedule.segments[seg].t_end) ++seg;
        const Bs2State state = schedule.segments[seg].state;

        const double p_x = state == Bs2State::In ? in_probs.p_x : out_probs.p_x;
        const Detector det = uniform01(rng) < p_x ? Detector::X : Detector::Y;
        out.counts.add(det, state);
        if (keep_events) out.events.push_back({t, phase, state, det});
    }
    return out;
}

}  // namespace

std::string_view to_string(Detector d) noexcept { return d == Detector::X ? "X" : "Y"; }

void PhaseCounts::add(Detector d, Bs2State s) noexcept {
    if (d == Detector::X) {
        ++(s == Bs2State::In ? n_x_in : n_x_out);
    } else {
        ++(s == Bs2State::In ? n_y_in : n_y_out);
    }
}

std::uint64_t CountTable::total() const noexcept { return total_in() + total_out(); }

std::uint64_t CountTable::total_in() const noexcept {
    std::uint64_t n = 0;
    for (const auto& r : rows) n += r.n_in();
    return n;
}

std::uint64_t CountTable::total_out() const noexcept {
    std::uint64_t n = 0;
    for (const auto& r : rows) n += r.n_out();
    return n;
}

CountTable CountTable::merge(const CountTable& a, const CountTable& b) {
    if (a.rows.size() != b.rows.size()) throw std::invalid_argument("merge: phase grids differ in size");
    CountTable out = a;
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        if (a.rows[i].phase != b.rows[i].phase)
            throw std::invalid_argument("merge: phase grids differ at row " + std::to_string(i));
        out.rows[i].n_x_in += b.rows[i].n_x_in;
        out.rows[i].n_y_in += b.rows[i].n_y_in;
        out.rows[i].n_x_out += b.rows[i].n_x_out;
        out.rows[i].n_y_out += b.rows[i].n_y_out;
    }
    return out;
}

CountTable CountTable::zeros(std::span<const double> phases) {
    CountTable t;
    t.rows.reserve(phases.size());
    for (double phi : phases) t.rows.push_back({phi});
    return t;
}

DetectionProbs detection_probs(double phi, Bs2State state) {
    if (!std::isfinite(phi)) throw std::invalid_argument("detection_probs: phase must be finite");
    if (state == Bs2State::Out) return {0.5, 0.5};
    const double p_x = (1.0 - std::cos(phi)) / 2.0;
    return {p_x, 1.0 - p_x};
}

RunResult run(const Schedule& schedule, std::span<const double> phases, std::uint64_t n_events_per_phase,
              const ArrivalModel& arrivals, std::uint64_t seed, const RunOptions& options) {
    validate(schedule);
    if (phases.empty()) throw EmptyPhaseGrid("phase grid is empty");
    if (n_events_per_phase < 1) throw InvalidEventCount("need at least one event per phase point");
    if (!(arrivals.rate >= 0.0) || !std::isfinite(arrivals.rate))
        throw std::invalid_argument("arrival rate must be positive (or 0 for n_events / T)");
    for (double phi : phases)
        if (!std::isfinite(phi)) throw std::invalid_argument("phase grid contains a non-finite value");

    std::vector<PhaseRun> per_phase(phases.size());
    const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, phases.size());
    const auto work = [&](std::size_t first) {
        for (std::size_t k = first; k < phases.size(); k += workers)
            per_phase[k] = run_phase(schedule, phases[k], k, n_events_per_phase, arrivals, seed,
                                     options.keep_events);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    RunResult result;
    result.table.rows.reserve(phases.size());
    if (options.keep_events) result.events.reserve(phases.size() * n_events_per_phase);
    for (PhaseRun& pr : per_phase) {
        result.table.rows.push_back(pr.counts);
        result.events.insert(result.events.end(), pr.events.begin(), pr.events.end());
    }
    return result;
}

CountTable accumulate(std::span<const EventRecord> events, std::span<const double> phases) {
    CountTable table = CountTable::zeros(phases);
    std::unordered_map<double, std::size_t> index;
    for (std::size_t i = 0; i < phases.size(); ++i) index.emplace(phases[i], i);
    for (const EventRecord& e : events) {
        const auto it = index.find(e.phase);
        if (it == index.end()) throw UnknownPhase("event phase " + format_double(e.phase) + " is not on the grid");
        table.rows[it->second].add(e.detector, e.bs2_state);
    }
    return table;
}

void write_event_log_csv(std::ostream& os, std::span<const EventRecord> events) {
    os << "time,phase,bs2_state,detector\n";
    for (const EventRecord& e : events) {
        os << format_double(e.time) << ',' << format_double(e.phase) << ',' << to_string(e.bs2_state) << ','
           << to_string(e.detector) << '\n';
    }
}

void write_count_table_csv(std::ostream& os, const CountTable& table) {
    os << "phase,n_x,n_y,n_x_in,n_y_in,n_x_out,n_y_out\n";
    for (const PhaseCounts& r : table.rows) {
        os << format_double(r.phase) << ',' << r.n_x() << ',' << r.n_y() << ',' << r.n_x_in << ',' << r.n_y_in
           << ',' << r.n_x_out << ',' << r.n_y_out << '\n';
    }
}

}  // namespace mzi
