#include "mzi/quantum_dc.hpp"

#include "mzi/format.hpp"
#include "mzi/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace mzi {

void MixtureModel::validate() const {
    if (!(a_weight >= 0.0 && a_weight <= 1.0 && b_weight >= 0.0 && b_weight <= 1.0))
        throw InvalidMixture("mixture weights must lie in [0, 1]");
    if (std::abs(a_weight + b_weight - 1.0) > 1e-12) throw InvalidMixture("mixture weights must sum to 1");
}

double AncillaState::norm2() const noexcept {
    double n = 0.0;
    for (const ComplexAmp& a : amps) n += std::norm(a);
    return n;
}

ModulatedIntensity mixture_intensity(const MixtureModel& m, double phi) {
    m.validate();
    const double p_x = m.a_weight * (1.0 - std::cos(phi)) / 2.0 + m.b_weight * 0.5;
    return {p_x, 1.0 - p_x};
}

AncillaState ancilla_evolve(double theta, double phi) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2))
        throw ThetaOutOfRange("theta must lie in [0, pi/2], got " + format_double(theta));
    const OutputAmplitudes particle = propagate({false, phi, 1.0});
    const OutputAmplitudes wave = propagate({true, phi, 1.0});
    const double a_p = std::cos(theta);
    const double a_w = std::sin(theta);

    AncillaState s;
    s.at(0, 0) = a_p * particle.at_x;
    s.at(1, 0) = a_p * particle.at_y;
    s.at(0, 1) = a_w * wave.at_x;
    s.at(1, 1) = a_w * wave.at_y;
    const double scale = 1.0 / std::sqrt(s.norm2());
    for (ComplexAmp& a : s.amps) a *= scale;
    return s;
}

ModulatedIntensity ancilla_marginal(const AncillaState& s) {
    const double n = s.norm2();
    if (!(std::abs(n - 1.0) <= 1e-12))
        throw NotNormalized("ancilla state has norm^2 " + format_double(n));
    const double p_x = (std::norm(s.at(0, 0)) + std::norm(s.at(0, 1))) / n;
    return {p_x, 1.0 - p_x};
}

bool DiscriminatorReport::consistent_with_modulation(double v_in_min, double v_out_max) const noexcept {
    return in && out && in->visibility.value >= v_in_min && out->visibility.value <= v_out_max;
}

DiscriminatorReport event_level_discriminator(std::span<const EventRecord> modulated_events) {
    if (modulated_events.empty()) throw EmptyTable("no events to discriminate");
    std::vector<double> phases;
    for (const EventRecord& e : modulated_events)
        if (std::find(phases.begin(), phases.end(), e.phase) == phases.end()) phases.push_back(e.phase);
    return event_level_discriminator(accumulate(modulated_events, phases));
}

DiscriminatorReport event_level_discriminator(const CountTable& table) {
    if (table.total() == 0) throw EmptyTable("no events to discriminate");
    DiscriminatorReport rep;
    rep.unconditioned_visibility = estimate_visibility(fringe_scan(table));

    // Within a subset every event shares one BS2 state, so the identified-path
    // fraction is exactly 0 (In) or 1 (Out).
    if (const std::uint64_t n = table.total_in(); n > 0)
        rep.in = SubsetReport{n, estimate_visibility(fringe_scan(table, Subset::In)), {0.0, 0.0}};
    if (const std::uint64_t n = table.total_out(); n > 0)
        rep.out = SubsetReport{n, estimate_visibility(fringe_scan(table, Subset::Out)), {1.0, 0.0}};

    if (!rep.in) rep.note = "In subset empty: BS2 was never in place";
    if (!rep.out) rep.note = "Out subset empty: BS2 was never removed";
    return rep;
}

std::vector<ComparisonRow> compare_models(std::span<const double> thetas, std::span<const double> phis) {
    std::vector<ComparisonRow> rows;
    rows.reserve(thetas.size() * phis.size());
    for (double theta : thetas) {
        const double a = std::sin(theta) * std::sin(theta);
        const MixtureModel mixture{a, 1.0 - a};
        for (double phi : phis) {
            const ModulatedIntensity mod = predicted_modulated_intensity(theta, phi);
            const ModulatedIntensity mix = mixture_intensity(mixture, phi);
            const ModulatedIntensity anc = ancilla_marginal(ancilla_evolve(theta, phi));
            const double diff = std::max({std::abs(mod.p_x - mix.p_x), std::abs(mod.p_x - anc.p_x),
                                          std::abs(mix.p_x - anc.p_x), std::abs(mod.p_y - mix.p_y),
                                          std::abs(mod.p_y - anc.p_y), std::abs(mix.p_y - anc.p_y)});
            rows.push_back({theta, phi, mod.p_x, mix.p_x, anc.p_x, diff});
        }
    }
    return rows;
}

void write_comparison_csv(std::ostream& os, std::span<const ComparisonRow> rows) {
    os << "theta,phi,p_modulated,p_mixture,p_ancilla,max_abs_diff\n";
    for (const ComparisonRow& r : rows) {
        os << format_double(r.theta) << ',' << format_double(r.phi) << ',' << format_double(r.p_modulated) << ','
           << format_double(r.p_mixture) << ',' << format_double(r.p_ancilla) << ','
           << format_double(r.max_abs_diff) << '\n';
    }
}

}  // namespace mzi
