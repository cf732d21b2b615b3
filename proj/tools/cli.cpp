#include "cli.hpp"

#include "mzi/analysis.hpp"
#include "mzi/format.hpp"
#include "mzi/grid.hpp"
#include "mzi/interferometer.hpp"
#include "mzi/montecarlo.hpp"
#include "mzi/quantum_dc.hpp"
#include "mzi/schedule.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace mzi::cli {

namespace {

struct Options {
    std::string mode;
    std::string phases;
    std::string thetas = "0:pi/2:100";
    std::string theta;
    std::string schedule_path;
    std::optional<double> duty;
    double period = 1.0;
    std::size_t periods = 10;
    std::uint64_t events = 100000;
    std::uint64_t seed = 42;
    std::string arrivals = "uniform";
    double rate = 0.0;
    std::string out_path;
    std::string report_path;
    std::string events_log_path;
    std::optional<double> tolerance;
    std::size_t workers = 1;
    std::string bs2 = "in";
    double transit_time = 0.0;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Primary output goes to --out when given, otherwise to the caller's stream.
// Summaries go to the caller's stream when --out is a file, else to err.
class Sinks {
public:
    Sinks(const Options& o, std::ostream& out, std::ostream& err) : out_(out), err_(err) {
        if (!o.out_path.empty()) {
            file_.open(o.out_path);
            if (!file_) throw UsageError("cannot open output file '" + o.out_path + "'");
        }
    }
    std::ostream& data() { return file_.is_open() ? static_cast<std::ostream&>(file_) : out_; }
    std::ostream& summary() { return file_.is_open() ? out_ : err_; }
    std::ostream& diag() { return err_; }

private:
    std::ostream& out_;
    std::ostream& err_;
    std::ofstream file_;
};

std::vector<double> grid_points(const std::string& text, const char* what) {
    try {
        const GridSpec g = parse_grid(text);
        return linspace(g.start, g.stop, g.count);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(what) + ": " + e.what());
    }
}

ArrivalModel arrival_model(const Options& o) {
    if (o.rate < 0.0) throw UsageError("--rate must be >= 0");
    if (o.arrivals == "uniform") return ArrivalModel::uniform(o.rate);
    if (o.arrivals == "poisson") return ArrivalModel::poisson(o.rate);
    throw UsageError("--arrivals must be uniform or poisson");
}

// Exactly one of --theta, --duty, --schedule; default_duty applies when none is given.
Schedule build_schedule(const Options& o, std::optional<double> default_duty, std::ostream& diag) {
    const int given = !o.theta.empty() + o.duty.has_value() + !o.schedule_path.empty();
    if (given > 1) throw UsageError("give exactly one of --theta, --duty, --schedule");
    if (given == 0 && !default_duty) throw UsageError("missing schedule: give --theta, --duty or --schedule");

    Schedule s;
    if (!o.schedule_path.empty()) {
        try {
            s = load_schedule(o.schedule_path);
        } catch (const ScheduleError& e) {
            throw UsageError(std::string("invalid schedule: ") + e.what());
        }
    } else {
        double duty = default_duty.value_or(0.0);
        if (o.duty) duty = *o.duty;
        if (!o.theta.empty()) {
            const auto theta = parse_angle(o.theta);
            if (!theta || *theta < 0.0 || *theta > std::numbers::pi / 2)
                throw UsageError("--theta must be an angle in [0, pi/2]");
            duty = std::sin(*theta) * std::sin(*theta);
        }
        if (o.periods < 1) throw UsageError("--periods must be >= 1");
        try {
            s = make_periodic(duty, o.period, o.period * static_cast<double>(o.periods));
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("invalid schedule: ") + e.what());
        }
    }
    for (std::size_t i : short_segments(s, o.transit_time)) {
        diag << "warning: segment " << i << " [" << format_double(s.segments[i].t_start) << ", "
             << format_double(s.segments[i].t_end) << ") is shorter than the transit time "
             << format_double(o.transit_time) << '\n';
    }
    return s;
}

RunResult simulate(const Options& o, const Schedule& s, const std::vector<double>& phases, bool keep_events) {
    if (o.events < 1) throw UsageError("--events must be >= 1");
    if (o.workers < 1) throw UsageError("--workers must be >= 1");
    return run(s, phases, o.events, arrival_model(o), o.seed, {o.workers, keep_events});
}

void write_events_log(const Options& o, const RunResult& r) {
    if (o.events_log_path.empty()) return;
    std::ofstream log(o.events_log_path);
    if (!log) throw UsageError("cannot open event log '" + o.events_log_path + "'");
    write_event_log_csv(log, r.events);
}

int cmd_fringe(const Options& o, Sinks& io) {
    if (o.bs2 != "in" && o.bs2 != "out") throw UsageError("--bs2 must be in or out");
    const bool bs2_in = o.bs2 == "in";
    const auto phases = grid_points(o.phases.empty() ? "0:2pi:21" : o.phases, "--phases");

    std::ostream& os = io.data();
    os << "phase,p_x,p_y\n";
    for (double phi : phases) {
        const PortIntensities p = intensities(propagate({bs2_in, phi, 1.0}));
        os << format_double(phi) << ',' << format_double(p.p_x) << ',' << format_double(p.p_y) << '\n';
    }
    return kExitOk;
}

int cmd_modulate(const Options& o, Sinks& io) {
    const auto phases = grid_points(o.phases.empty() ? "0:2pi:21" : o.phases, "--phases");
    const Schedule s = build_schedule(o, std::nullopt, io.diag());
    const DutyFractions f = duty_fractions(s);
    const RunResult r = simulate(o, s, phases, !o.events_log_path.empty());
    write_events_log(o, r);

    const FringeScan scan = fringe_scan(r.table);
    const DualityMeasures m =
        DualityMeasures::from(estimate_visibility(scan), estimate_distinguishability(r.table, f));

    write_count_table_csv(io.data(), r.table);
    if (!o.report_path.empty()) {
        std::ofstream report(o.report_path);
        if (!report) throw UsageError("cannot open report file '" + o.report_path + "'");
        write_analysis_report(report, f.theta, scan, m);
    }
    io.summary() << "V=" << format_double(m.visibility) << " D=" << format_double(m.distinguishability)
                 << " residual=" << format_double(m.residual) << '\n';

    const double tol = o.tolerance.value_or(0.02);
    if (m.residual > tol) {
        io.diag() << "complementarity residual " << format_double(m.residual) << " exceeds tolerance "
                  << format_double(tol) << '\n';
        return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_compare(const Options& o, Sinks& io) {
    const auto thetas = grid_points(o.thetas, "--thetas");
    const auto phis = grid_points(o.phases.empty() ? "0:2pi:100" : o.phases, "--phases");
    for (double t : thetas)
        if (t < 0.0 || t > std::numbers::pi / 2) throw UsageError("--thetas must stay within [0, pi/2]");

    const auto rows = compare_models(thetas, phis);
    write_comparison_csv(io.data(), rows);

    double worst = 0.0, eq11 = 0.0;
    for (const ComparisonRow& r : rows) {
        worst = std::max(worst, r.max_abs_diff);
        eq11 = std::max(eq11, verify_eq11_identity(r.theta, r.phi));
    }
    io.summary() << "max_abs_diff=" << format_double(worst) << " half_angle_form_vs_y_port=" << format_double(eq11)
                 << '\n';
    const double tol = o.tolerance.value_or(1e-12);
    return worst <= tol && eq11 <= tol ? kExitOk : kExitCheckFailed;
}

int cmd_condition(const Options& o, Sinks& io) {
    const auto phases = grid_points(o.phases.empty() ? "0:2pi:21" : o.phases, "--phases");
    const Schedule s = build_schedule(o, 0.5, io.diag());
    const RunResult r = simulate(o, s, phases, true);
    write_events_log(o, r);
    const DiscriminatorReport rep = event_level_discriminator(r.events);

    std::ostream& os = io.data();
    os << "subset,events,visibility,visibility_err,distinguishability\n";
    const auto row = [&os](const char* name, const std::optional<SubsetReport>& sub) {
        if (!sub) return;
        os << name << ',' << sub->events << ',' << format_double(sub->visibility.value) << ','
           << format_double(sub->visibility.error) << ',' << format_double(sub->distinguishability.value) << '\n';
    };
    row("in", rep.in);
    row("out", rep.out);
    os << "all," << r.table.total() << ',' << format_double(rep.unconditioned_visibility.value) << ','
       << format_double(rep.unconditioned_visibility.error) << ','
       << format_double(static_cast<double>(r.table.total_out()) / static_cast<double>(r.table.total())) << '\n';

    if (rep.degenerate()) {
        io.diag() << rep.note << '\n';
        return kExitDegenerate;
    }
    io.summary() << "V_in=" << format_double(rep.in->visibility.value)
                 << " V_out=" << format_double(rep.out->visibility.value)
                 << " D_out=" << format_double(rep.out->distinguishability.value) << '\n';
    return rep.consistent_with_modulation() ? kExitOk : kExitCheckFailed;
}

}  // namespace

std::optional<double> parse_angle(std::string_view text) {
    const auto pos = text.find("pi");
    if (pos == std::string_view::npos) return parse_double(text);

    std::string_view coef = text.substr(0, pos);
    std::string_view rest = text.substr(pos + 2);
    if (!coef.empty() && coef.back() == '*') coef.remove_suffix(1);
    double c = 1.0;
    if (coef == "-") {
        c = -1.0;
    } else if (!coef.empty()) {
        const auto v = parse_double(coef);
        if (!v) return std::nullopt;
        c = *v;
    }
    double den = 1.0;
    if (!rest.empty()) {
        if (rest.front() != '/') return std::nullopt;
        const auto v = parse_double(rest.substr(1));
        if (!v || *v == 0.0) return std::nullopt;
        den = *v;
    }
    return c * std::numbers::pi / den;
}

GridSpec parse_grid(std::string_view text) {
    const auto a = text.find(':');
    const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
    if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos)
        throw std::invalid_argument("grid must be start:stop:count, got '" + std::string(text) + "'");
    const auto start = parse_angle(text.substr(0, a));
    const auto stop = parse_angle(text.substr(a + 1, b - a - 1));
    const auto count = parse_double(text.substr(b + 1));
    if (!start || !stop || !count || !std::isfinite(*start) || !std::isfinite(*stop))
        throw std::invalid_argument("malformed grid '" + std::string(text) + "'");
    if (*count != std::floor(*count) || *count < 2.0) throw std::invalid_argument("phase grid needs >= 2 points");
    return {*start, *stop, static_cast<std::size_t>(*count)};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Mach-Zehnder delayed-choice simulator"};
    app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");
    app.add_option("--mode", o.mode, "fringe | modulate | compare | condition")
        ->required()
        ->check(CLI::IsMember({"fringe", "modulate", "compare", "condition"}));
    app.add_option("--phases", o.phases, "Phase grid start:stop:count (angles accept pi multiples)");
    app.add_option("--thetas", o.thetas, "Theta grid for compare mode")->capture_default_str();
    app.add_option("--theta", o.theta, "Modulation angle; BS2 in-duty is sin^2(theta)");
    app.add_option("--schedule", o.schedule_path, "Schedule file (T=<total> header, 't0 t1 IN|OUT' lines)");
    app.add_option("--duty", o.duty, "BS2 in-duty in [0, 1]");
    app.add_option("--period", o.period, "Modulation period, seconds")->capture_default_str();
    app.add_option("--periods", o.periods, "Number of periods in the accumulation window")->capture_default_str();
    app.add_option("--events", o.events, "Events per phase point")->capture_default_str();
    app.add_option("--seed", o.seed, "Master RNG seed")->capture_default_str();
    app.add_option("--arrivals", o.arrivals, "uniform | poisson")->capture_default_str();
    app.add_option("--rate", o.rate, "Arrival rate per second; 0 = events / T")->capture_default_str();
    app.add_option("--out", o.out_path, "Output CSV path (default stdout)");
    app.add_option("--report", o.report_path, "Analysis report CSV path (modulate)");
    app.add_option("--events-log", o.events_log_path, "Write every detection event to this CSV");
    app.add_option("--tolerance", o.tolerance, "Acceptance tolerance (modulate 0.02, compare 1e-12)");
    app.add_option("--workers", o.workers, "Worker threads for phase points")->capture_default_str();
    app.add_option("--bs2", o.bs2, "BS2 state for fringe mode: in | out")->capture_default_str();
    app.add_option("--transit-time", o.transit_time, "Warn on schedule segments shorter than this")
        ->capture_default_str();

    std::vector<const char*> argv{"mzi_sim"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        Sinks io(o, out, err);
        if (o.mode == "fringe") return cmd_fringe(o, io);
        if (o.mode == "modulate") return cmd_modulate(o, io);
        if (o.mode == "compare") return cmd_compare(o, io);
        return cmd_condition(o, io);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDegenerate;
    }
}

}  // namespace mzi::cli
