// Acceptance gate: one line per criterion, non-zero exit if any fails.
//
//   ./acceptance            run every criterion
//   ./acceptance 5 9        run selected criteria

#include "cli.hpp"
#include "mzi/analysis.hpp"
#include "mzi/grid.hpp"
#include "mzi/interferometer.hpp"
#include "mzi/montecarlo.hpp"
#include "mzi/quantum_dc.hpp"
#include "mzi/schedule.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace mzi;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

const std::vector<double> kThetas{0.0, pi / 6, pi / 4, pi / 3, pi / 2};
constexpr std::uint64_t kEvents = 100000;
constexpr std::uint64_t kSeed = 20161;

// 1. In-config fringe: P_x / P0 = 1 - cos(phi) to 1e-12, under one second.
Outcome fringe_in() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double phi : half_open_grid(0.0, 2 * pi, 1000)) {
        const PortIntensities p = intensities(propagate({true, phi, 1.0}));
        worst = std::max(worst, std::abs(p.p_x / p.p0 - (1 - std::cos(phi))));
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-12 && dt < 1.0, fmt("max |P_x/P0 - (1 - cos phi)| = %.3g over 1000 points, %.3g s", worst, dt)};
}

// 2. Out-config: normalized x signal is 1/2 everywhere.
Outcome fringe_out() {
    double worst = 0.0;
    for (double phi : half_open_grid(0.0, 2 * pi, 1000)) {
        const PortIntensities p = intensities(propagate({false, phi, 1.0}));
        worst = std::max(worst, std::abs(p.p_x / (p.p_x + p.p_y) - 0.5));
    }
    return {worst <= 1e-12, fmt("max |P_x - 1/2| = %.3g", worst)};
}

// 3. Composed-pipeline amplitudes against the closed forms, entrywise.
Outcome amplitudes() {
    double worst = 0.0;
    for (ComplexAmp psi0 : {ComplexAmp{1.0}, ComplexAmp{0.6, -0.8}, ComplexAmp{0.0, 3.0}}) {
        for (double phi : half_open_grid(0.0, 2 * pi, 1000)) {
            const ComplexAmp e = std::polar(1.0, phi);
            const auto in = propagate({true, phi, psi0});
            const auto out = propagate({false, phi, psi0});
            worst = std::max({worst, std::abs(in.at_x - psi0 * (1.0 - e) / 2.0),
                              std::abs(in.at_y - psi0 * (1.0 + e) / 2.0),
                              std::abs(out.at_x - psi0 * e / std::sqrt(2.0)),
                              std::abs(out.at_y - psi0 / std::sqrt(2.0))});
        }
    }
    return {worst <= 1e-12, fmt("max entrywise |pipeline - closed form| = %.3g (Hadamard convention)", worst)};
}

// 4. Duty fractions: exact on the reference schedule, A + B = 1 on random ones.
Outcome duty() {
    const Schedule ref{{{0.0, 0.3, Bs2State::In}, {0.3, 1.0, Bs2State::Out}}, 1.0};
    const DutyFractions f = duty_fractions(validate(ref));
    const bool exact = f.a_frac == 0.3 && f.b_frac == 0.7;

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double total = 0.1 + 100.0 * u(rng);
        std::set<double> cuts;
        const int n = 1 + static_cast<int>(30 * u(rng));
        for (int i = 0; i < n; ++i) cuts.insert(total * u(rng));
        Schedule s{{}, total};
        double prev = 0.0;
        for (double c : cuts) {
            if (c <= prev) continue;
            s.segments.push_back({prev, c, u(rng) < 0.5 ? Bs2State::In : Bs2State::Out});
            prev = c;
        }
        s.segments.push_back({prev, total, u(rng) < 0.5 ? Bs2State::In : Bs2State::Out});
        const DutyFractions r = duty_fractions(validate(s));
        worst = std::max(worst, std::abs(r.a_frac + r.b_frac - 1.0));
    }
    return {exact && worst <= 1e-12,
            fmt("A = %.17g, B = %.17g; max |A + B - 1| over 100 random schedules = %.3g", f.a_frac, f.b_frac, worst)};
}

struct SweepPoint {
    double theta;
    CountTable table;
    DutyFractions fractions;
};

// Shared by criteria 5 and 6: periodic schedules with duty sin^2(theta).
const std::vector<SweepPoint>& sweep(double* elapsed = nullptr) {
    static double took = 0.0;
    static const std::vector<SweepPoint> points = [] {
        const auto t0 = Clock::now();
        const auto phases = linspace(0.0, 2 * pi, 21);
        std::vector<SweepPoint> out;
        for (double theta : kThetas) {
            const double a = std::sin(theta) * std::sin(theta);
            const Schedule s = make_periodic(a, 1.0, 10.0);
            out.push_back({theta, run(s, phases, kEvents, ArrivalModel::uniform(), kSeed, {1, false}).table,
                           duty_fractions(s)});
        }
        took = seconds_since(t0);
        return out;
    }();
    if (elapsed) *elapsed = took;
    return points;
}

// 5. Monte Carlo rates against (1 - sin^2(theta) cos(phi)) / 2.
Outcome monte_carlo() {
    double dt = 0.0;
    const auto& points = sweep(&dt);
    double worst = 0.0;
    for (const SweepPoint& p : points) {
        const double s2 = std::sin(p.theta) * std::sin(p.theta);
        for (const PhaseCounts& row : p.table.rows) {
            const double rate = static_cast<double>(row.n_x()) / static_cast<double>(row.total());
            worst = std::max(worst, std::abs(rate - (1 - s2 * std::cos(row.phase)) / 2));
        }
    }
    return {worst <= 0.008 && dt < 10.0,
            fmt("max |rate - prediction| = %.4g (bound 0.008) over 5 thetas x 21 phases x 1e5 events, %.3g s", worst,
                dt)};
}

// 6. Complementarity on exact model data and on the criterion-5 samples.
Outcome complementarity() {
    const auto phases = linspace(0.0, 2 * pi, 21);
    double exact_worst = 0.0;
    for (double theta : kThetas) {
        const Estimate v = estimate_visibility(model_scan(theta, phases));
        const double d = std::cos(theta) * std::cos(theta);
        exact_worst = std::max(exact_worst, complementarity_check(DualityMeasures::from(v, {d, 0.0})));
    }
    double mc_worst = 0.0;
    for (const SweepPoint& p : sweep()) {
        const DualityMeasures m = DualityMeasures::from(estimate_visibility(fringe_scan(p.table)),
                                                        estimate_distinguishability(p.table, p.fractions));
        mc_worst = std::max(mc_worst, m.residual);
    }
    return {exact_worst <= 1e-9 && mc_worst <= 0.02,
            fmt("max |V + D - 1|: exact %.3g (bound 1e-9), Monte Carlo %.4g (bound 0.02)", exact_worst, mc_worst)};
}

// 7. The cos^2(phi/2) form equals the y-port prediction P0 (1 + sin^2 cos phi).
Outcome half_angle_identity() {
    double worst = 0.0;
    for (double theta : linspace(0.0, pi / 2, 100))
        for (double phi : linspace(0.0, 2 * pi, 100)) worst = std::max(worst, verify_eq11_identity(theta, phi));
    return {worst <= 1e-12, fmt("max discrepancy %.3g on 100x100; the half-angle form is the y port "
                                "(x port under phi -> phi + pi)",
                                worst)};
}

// 8. Modulated prediction, mixture and ancilla marginal agree pairwise.
Outcome three_models() {
    const auto rows = compare_models(linspace(0.0, pi / 2, 100), linspace(0.0, 2 * pi, 100));
    double worst = 0.0;
    for (const ComparisonRow& r : rows) worst = std::max(worst, r.max_abs_diff);
    return {rows.size() == 10000 && worst <= 1e-12, fmt("max pairwise difference %.3g on 100x100", worst)};
}

// 9. Conditioning on the BS2 tag splits a duty-0.5 run into fringe and flat line.
Outcome event_signature() {
    const auto phases = linspace(0.0, 2 * pi, 21);
    const RunResult r = run(make_periodic(0.5, 1.0, 10.0), phases, kEvents, ArrivalModel::uniform(), kSeed, {1, true});
    const DiscriminatorReport rep = event_level_discriminator(r.events);
    if (rep.degenerate()) return {false, "degenerate partition: " + rep.note};
    const bool pass = rep.in->visibility.value >= 0.99 && rep.out->visibility.value <= 0.02 &&
                      rep.out->distinguishability.value == 1.0;
    return {pass, fmt("V(In) = %.5f (>= 0.99), V(Out) = %.5f (<= 0.02), D(Out) = %.17g", rep.in->visibility.value,
                      rep.out->visibility.value, rep.out->distinguishability.value)};
}

// 10. Same config and seed give byte-identical CSVs, for any worker count.
Outcome determinism() {
    const auto cli_out = [](std::vector<std::string> args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return std::to_string(code) + "\n" + out.str() + err.str();
    };
    bool pass = true;
    int comparisons = 0;
    for (const char* mode : {"modulate", "condition"}) {
        for (const char* arrivals : {"uniform", "poisson"}) {
            const std::vector<std::string> base{"--mode", mode, "--duty", "0.5", "--events", "50000",
                                                "--seed", "42", "--arrivals", arrivals};
            const std::string first = cli_out(base);
            const std::string again = cli_out(base);
            pass = pass && first == again;
            ++comparisons;
            for (const char* workers : {"2", "4", "21"}) {
                auto args = base;
                args.insert(args.end(), {"--workers", workers});
                pass = pass && cli_out(args) == first;
                ++comparisons;
            }
        }
    }
    const auto phases = linspace(0.0, 2 * pi, 21);
    const Schedule s = make_random_telegraph(0.4, 0.1, 10.0, 3);
    const RunResult a = run(s, phases, 20000, ArrivalModel::poisson(), 9, {1, true});
    const RunResult b = run(s, phases, 20000, ArrivalModel::poisson(), 9, {8, true});
    pass = pass && a.events == b.events && a.table == b.table;
    return {pass, std::to_string(comparisons + 1) + " byte-level comparisons across repeat runs and 1/2/4/8/21 workers"};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "in-config fringe P0(1 - cos phi)", fringe_in},
        {2, "out-config constant signal", fringe_out},
        {3, "pipeline amplitudes equal closed forms", amplitudes},
        {4, "duty fractions A, B", duty},
        {5, "Monte Carlo modulated rates", monte_carlo},
        {6, "complementarity V + D = 1", complementarity},
        {7, "half-angle form identity", half_angle_identity},
        {8, "three-model equivalence", three_models},
        {9, "event-level modulation signature", event_signature},
        {10, "determinism", determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const Criterion& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("[%s] %2d %-40s %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    }
    std::printf("%s: %d criteria failed\n", failed ? "FAILED" : "OK", failed);
    return failed ? 1 : 0;
}
