#include "mzi/interferometer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mzi {

void PipelineConfig::validate() const {
    if (!std::isfinite(phase)) throw std::invalid_argument("pipeline phase must be finite");
    if (!(std::abs(source_amplitude) > 0.0) || !std::isfinite(std::abs(source_amplitude)))
        throw std::invalid_argument("source amplitude must be finite and non-zero");
}

Unitary2 beam_splitter() noexcept {
    constexpr double r = 1.0 / std::numbers::sqrt2;
    return {r, r, r, -r};
}

Unitary2 phase_plate(double phi) {
    if (!std::isfinite(phi)) throw std::invalid_argument("phase_plate: phi must be finite");
    if (phi == 0.0) return Unitary2::identity();
    return Unitary2::diagonal(1.0, std::polar(1.0, phi));
}

Unitary2 mirror_pair() noexcept { return Unitary2::identity(); }

Unitary2 pipeline(bool bs2_present, double phi) {
    Unitary2 u = compose(beam_splitter(), mirror_pair());
    u = compose(u, phase_plate(phi));
    if (bs2_present) u = compose(u, beam_splitter());
    return u;
}

OutputAmplitudes propagate(const PipelineConfig& cfg) {
    cfg.validate();
    const ModeState out = apply_element(pipeline(cfg.bs2_present, cfg.phase), {cfg.source_amplitude, {}});
    // Detector x sits on mode 1 (path Y when BS2 is out), detector y on mode 0.
    return {out.amp_y, out.amp_x};
}

PortIntensities intensities(const OutputAmplitudes& out) noexcept {
    const double px = std::norm(out.at_x);
    const double py = std::norm(out.at_y);
    return {px, py, (px + py) / 2.0};
}

}  // namespace mzi
