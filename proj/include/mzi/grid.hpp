#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mzi {

/// count evenly spaced points from start to stop inclusive. count >= 2.
[[nodiscard]] inline std::vector<double> linspace(double start, double stop, std::size_t count) {
    if (count < 2) throw std::invalid_argument("phase grid needs >= 2 points");
    std::vector<double> out(count);
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
    out.back() = stop;
    return out;
}

/// count points over [start, stop), the endpoint excluded. count >= 1.
[[nodiscard]] inline std::vector<double> half_open_grid(double start, double stop, std::size_t count) {
    if (count < 1) throw std::invalid_argument("grid needs >= 1 point");
    std::vector<double> out(count);
    const double step = (stop - start) / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
    return out;
}

}  // namespace mzi
