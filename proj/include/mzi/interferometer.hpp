#pragma once

// Stationary Mach-Zehnder pipelines: BS1 -> phase plate -> [BS2].
//
// Beam splitters use the real Hadamard convention (1/sqrt2)[[1, 1], [1, -1]]
// with the adjustable phase on path Y. Mirrors contribute equal phase on
// both arms and are modeled as the identity. Detector x reads mode index 1
// and detector y reads mode index 0, in both configurations:
//
//   BS2 in:  at_x = psi0 (1 - e^{i phi}) / 2,   at_y = psi0 (1 + e^{i phi}) / 2
//   BS2 out: at_x = psi0 e^{i phi} / sqrt2,     at_y = psi0 / sqrt2

#include "mzi/optics.hpp"

namespace mzi {

struct PipelineConfig {
    bool bs2_present = true;           ///< true = BS2 "in"
    double phase = 0.0;                ///< relative phase on path Y, radians
    ComplexAmp source_amplitude{1.0};  ///< psi0, must be non-zero

    void validate() const;
};

struct OutputAmplitudes {
    ComplexAmp at_x{};
    ComplexAmp at_y{};
};

struct PortIntensities {
    double p_x = 0.0;
    double p_y = 0.0;
    double p0 = 0.0;  ///< per-path intensity |psi0|^2 / 2
};

[[nodiscard]] Unitary2 beam_splitter() noexcept;
[[nodiscard]] Unitary2 phase_plate(double phi);
[[nodiscard]] Unitary2 mirror_pair() noexcept;

/// Composed transfer matrix of the whole interferometer for one configuration.
[[nodiscard]] Unitary2 pipeline(bool bs2_present, double phi);

/// Propagates (psi0, 0) through the pipeline and reads out both detectors.
[[nodiscard]] OutputAmplitudes propagate(const PipelineConfig& cfg);

[[nodiscard]] PortIntensities intensities(const OutputAmplitudes& out) noexcept;

}  // namespace mzi
