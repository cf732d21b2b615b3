#pragma once

// Two-mode linear optics: path/port amplitudes and 2x2 unitary elements.
//
// Amplitudes are kept as raw complex pairs (never polar) so destructive
// interference produces exact zeros where the algebra allows it. Global
// phases (stationary time factor, longitudinal plane-wave factor) cancel
// in every intensity and are not represented.

#include <complex>
#include <stdexcept>
#include <string>

namespace mzi {

using ComplexAmp = std::complex<double>;

/// Unitarity tolerance required of every element fed to apply_element/compose.
inline constexpr double kUnitaryTolerance = 1e-10;

class NonUnitaryElement : public std::invalid_argument {
public:
    explicit NonUnitaryElement(const std::string& what) : std::invalid_argument(what) {}
};

/// Amplitudes on the two interferometer modes. Index 0 is path/port X,
/// index 1 is path/port Y.
struct ModeState {
    ComplexAmp amp_x{};
    ComplexAmp amp_y{};

    [[nodiscard]] double norm2() const noexcept { return std::norm(amp_x) + std::norm(amp_y); }
    [[nodiscard]] bool is_finite() const noexcept;

    friend bool operator==(const ModeState&, const ModeState&) = default;
};

/// Row-major 2x2 complex matrix [[u00, u01], [u10, u11]] acting on
/// column vectors (amp_x, amp_y).
struct Unitary2 {
    ComplexAmp u00{1.0, 0.0};
    ComplexAmp u01{};
    ComplexAmp u10{};
    ComplexAmp u11{1.0, 0.0};

    static Unitary2 identity() noexcept { return {}; }
    static Unitary2 diagonal(ComplexAmp d0, ComplexAmp d1) noexcept { return {d0, {}, {}, d1}; }

    [[nodiscard]] Unitary2 adjoint() const noexcept;

    friend bool operator==(const Unitary2&, const Unitary2&) = default;
};

/// Plain matrix product a*b, no unitarity check.
[[nodiscard]] Unitary2 multiply(const Unitary2& a, const Unitary2& b) noexcept;

/// True iff max entrywise |U^dagger U - I| <= tol. Non-finite entries are never unitary.
[[nodiscard]] bool is_unitary(const Unitary2& u, double tol);

/// Largest entrywise deviation of U^dagger U from the identity.
[[nodiscard]] double unitarity_defect(const Unitary2& u) noexcept;

/// Applies one device to a state. Throws NonUnitaryElement if u fails
/// is_unitary at kUnitaryTolerance.
[[nodiscard]] ModeState apply_element(const Unitary2& u, const ModeState& s);

/// Chains two devices: u1 acts first, so the result is u2*u1.
/// Throws NonUnitaryElement if either input fails is_unitary.
[[nodiscard]] Unitary2 compose(const Unitary2& u1, const Unitary2& u2);

}  // namespace mzi
