#pragma once

// Closed-form modulated-signal predictions and the visibility /
// which-path distinguishability estimators.
//
// All rates are normalized so the two ports sum to 1 (P0 = 1/2).

#include "mzi/montecarlo.hpp"
#include "mzi/schedule.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mzi {

class ThetaOutOfRange : public std::domain_error {
public:
    explicit ThetaOutOfRange(const std::string& what) : std::domain_error(what) {}
};
class InsufficientPhaseCoverage : public std::invalid_argument {
public:
    explicit InsufficientPhaseCoverage(const std::string& what) : std::invalid_argument(what) {}
};
class DegenerateFit : public std::runtime_error {
public:
    explicit DegenerateFit(const std::string& what) : std::runtime_error(what) {}
};
class EmptyTable : public std::invalid_argument {
public:
    explicit EmptyTable(const std::string& what) : std::invalid_argument(what) {}
};

struct FringeScan {
    std::vector<double> phases;
    std::vector<double> rates_x;
    std::vector<double> uncertainties;  ///< binomial standard errors; may be all zero
};

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

struct DualityMeasures {
    double visibility = 0.0;
    double visibility_err = 0.0;
    double distinguishability = 0.0;
    double distinguishability_err = 0.0;
    double residual = 0.0;  ///< |visibility + distinguishability - 1|

    [[nodiscard]] static DualityMeasures from(Estimate v, Estimate d);
};

struct ModulatedIntensity {
    double p_x = 0.0;
    double p_y = 0.0;
};

/// p_x = (1 - sin^2(theta) cos(phi)) / 2, p_y = 1 - p_x.
/// Throws ThetaOutOfRange outside [0, pi/2].
[[nodiscard]] ModulatedIntensity predicted_modulated_intensity(double theta, double phi);

/// |2 P0 [cos^2(phi/2) sin^2(theta) + cos^2(theta)/2] - P0 (1 + sin^2(theta) cos(phi))|.
/// The cos^2(phi/2) form is the y-port of the modulated signal (it equals the
/// x-port form under phi -> phi + pi); the discrepancy is zero up to rounding.
[[nodiscard]] double verify_eq11_identity(double theta, double phi);

/// Fringe scan of detector x from counts. Selecting a state restricts the scan
/// to events recorded under that BS2 state; phase points with no such events are dropped.
enum class Subset : std::uint8_t { All, In, Out };
[[nodiscard]] FringeScan fringe_scan(const CountTable& table, Subset subset = Subset::All);

/// Noise-free scan of the modulated prediction.
[[nodiscard]] FringeScan model_scan(double theta, std::span<const double> phases);

/// Least-squares fit rate = c0 + c1 cos(phi); v = |c1| / c0 clipped to [0, 1].
/// Needs at least 5 points spanning a full period. The error is propagated
/// from the fit covariance, using the scan's uncertainties when they are all
/// positive and the residual scatter otherwise.
[[nodiscard]] Estimate estimate_visibility(const FringeScan& scan);

/// (max - min) / (max + min) over the grid. Biased upward under noise.
[[nodiscard]] double visibility_minmax(const FringeScan& scan);

/// Fraction of events recorded with BS2 out, where the path is fully
/// identified; error is the binomial standard error. The expectation is
/// fractions.b_frac. Throws EmptyTable when the table has no events.
[[nodiscard]] Estimate estimate_distinguishability(const CountTable& table,
                                                   const DutyFractions& fractions);

[[nodiscard]] double complementarity_check(const DualityMeasures& m) noexcept;

/// Header: theta,phase,rate_pred,rate_obs,stderr, then a trailing
/// "V=<v> D=<d> residual=<r>" line.
void write_analysis_report(std::ostream& os, double theta, const FringeScan& observed,
                           const DualityMeasures& measures);

}  // namespace mzi
