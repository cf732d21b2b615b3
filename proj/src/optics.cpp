#include "mzi/optics.hpp"

#include <algorithm>
#include <cmath>

namespace mzi {

namespace {

bool finite(ComplexAmp z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_unitary(const Unitary2& u, const char* role) {
    if (!is_unitary(u, kUnitaryTolerance)) {
        throw NonUnitaryElement(std::string(role) + " is not unitary (max |U^dagger U - I| = " +
                                std::to_string(unitarity_defect(u)) + ")");
    }
}

}  // namespace

bool ModeState::is_finite() const noexcept { return finite(amp_x) && finite(amp_y); }

Unitary2 Unitary2::adjoint() const noexcept {
    return {std::conj(u00), std::conj(u10), std::conj(u01), std::conj(u11)};
}

Unitary2 multiply(const Unitary2& a, const Unitary2& b) noexcept {
    return {
        a.u00 * b.u00 + a.u01 * b.u10,
        a.u00 * b.u01 + a.u01 * b.u11,
        a.u10 * b.u00 + a.u11 * b.u10,
        a.u10 * b.u01 + a.u11 * b.u11,
    };
}

double unitarity_defect(const Unitary2& u) noexcept {
    const Unitary2 g = multiply(u.adjoint(), u);
    const double d = std::max({std::abs(g.u00 - 1.0), std::abs(g.u01), std::abs(g.u10),
                               std::abs(g.u11 - 1.0)});
    // NaN compares false everywhere; report it as an infinite defect.
    return std::isnan(d) ? INFINITY : d;
}

bool is_unitary(const Unitary2& u, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("is_unitary: tolerance must be positive");
    if (!finite(u.u00) || !finite(u.u01) || !finite(u.u10) || !finite(u.u11)) return false;
    return unitarity_defect(u) <= tol;
}

ModeState apply_element(const Unitary2& u, const ModeState& s) {
    require_unitary(u, "element");
    return {u.u00 * s.amp_x + u.u01 * s.amp_y, u.u10 * s.amp_x + u.u11 * s.amp_y};
}

Unitary2 compose(const Unitary2& u1, const Unitary2& u2) {
    require_unitary(u1, "first element");
    require_unitary(u2, "second element");
    return multiply(u2, u1);
}

}  // namespace mzi
