#pragma once

// The stationary-superposition picture of the delayed-choice setup, kept
// alongside the time-modulated one for comparison.
//
// Two constructions reproduce the same averaged signal as a BS2 schedule
// with duty A = sin^2(theta):
//   * a classical mixture A*P_in + B*P_out;
//   * an ancilla-tagged state cos(theta) psi_particle|0> + sin(theta) psi_wave|1>
//     whose port marginal (ancilla traced out) is the detector signal.
// What differs is the event record: only the modulated run carries a BS2
// tag per event, and conditioning on that tag splits the data into a perfect
// fringe and a flat line.

#include "mzi/analysis.hpp"
#include "mzi/montecarlo.hpp"
#include "mzi/optics.hpp"
#include "mzi/schedule.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace mzi {

class NotNormalized : public std::domain_error {
public:
    explicit NotNormalized(const std::string& what) : std::domain_error(what) {}
};
class InvalidMixture : public std::invalid_argument {
public:
    explicit InvalidMixture(const std::string& what) : std::invalid_argument(what) {}
};

struct MixtureModel {
    double a_weight = 1.0;
    double b_weight = 0.0;

    void validate() const;
    [[nodiscard]] static MixtureModel from(const DutyFractions& f) { return {f.a_frac, f.b_frac}; }
};

/// Amplitudes indexed (port, ancilla): index = 2 * port + ancilla, with
/// port 0 = x, 1 = y.
struct AncillaState {
    std::array<ComplexAmp, 4> amps{};

    [[nodiscard]] ComplexAmp& at(int port, int ancilla) { return amps[2 * port + ancilla]; }
    [[nodiscard]] const ComplexAmp& at(int port, int ancilla) const { return amps[2 * port + ancilla]; }
    [[nodiscard]] double norm2() const noexcept;
};

[[nodiscard]] ModulatedIntensity mixture_intensity(const MixtureModel& m, double phi);

/// Ancilla 0 tags the particle branch (BS2 out), ancilla 1 the wave branch (BS2 in).
[[nodiscard]] AncillaState ancilla_evolve(double theta, double phi);

/// Port probabilities with the ancilla traced out. Throws NotNormalized if
/// |norm^2 - 1| > 1e-12.
[[nodiscard]] ModulatedIntensity ancilla_marginal(const AncillaState& s);

struct SubsetReport {
    std::uint64_t events = 0;
    Estimate visibility{};
    Estimate distinguishability{};  ///< fraction of subset events with identified path
};

struct DiscriminatorReport {
    std::optional<SubsetReport> in;   ///< nullopt when no event was recorded with BS2 in
    std::optional<SubsetReport> out;  ///< nullopt when no event was recorded with BS2 out
    Estimate unconditioned_visibility{};
    std::string note;  ///< names the empty subset, if any

    [[nodiscard]] bool degenerate() const noexcept { return !in || !out; }

    /// True when V(In) >= v_in_min and V(Out) <= v_out_max. Requires both subsets.
    [[nodiscard]] bool consistent_with_modulation(double v_in_min = 0.99,
                                                  double v_out_max = 0.02) const noexcept;
};

/// Conditional visibilities of a tagged event record. The phase grid is taken
/// from the events in order of first appearance.
[[nodiscard]] DiscriminatorReport event_level_discriminator(
    std::span<const EventRecord> modulated_events);

/// Same statistic computed from an already accumulated table.
[[nodiscard]] DiscriminatorReport event_level_discriminator(const CountTable& table);

struct ComparisonRow {
    double theta = 0.0;
    double phi = 0.0;
    double p_modulated = 0.0;
    double p_mixture = 0.0;
    double p_ancilla = 0.0;
    double max_abs_diff = 0.0;  ///< pairwise max over both ports
};

/// Evaluates the three models on the (theta, phi) grid, theta-major.
[[nodiscard]] std::vector<ComparisonRow> compare_models(std::span<const double> thetas,
                                                        std::span<const double> phis);

/// Header: theta,phi,p_modulated,p_mixture,p_ancilla,max_abs_diff (x-port values).
void write_comparison_csv(std::ostream& os, std::span<const ComparisonRow> rows);

}  // namespace mzi
