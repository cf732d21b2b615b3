#include "mzi/analysis.hpp"

#include "mzi/format.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace mzi {

namespace {

void require_theta(double theta) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2))
        throw ThetaOutOfRange("theta must lie in [0, pi/2], got " + format_double(theta));
}

double square(double x) { return x * x; }

}  // namespace

DualityMeasures DualityMeasures::from(Estimate v, Estimate d) {
    DualityMeasures m{v.value, v.error, d.value, d.error, 0.0};
    m.residual = complementarity_check(m);
    return m;
}

ModulatedIntensity predicted_modulated_intensity(double theta, double phi) {
    require_theta(theta);
    const double s2 = square(std::sin(theta));
    const double p_x = (1.0 - s2 * std::cos(phi)) / 2.0;
    return {p_x, 1.0 - p_x};
}

double verify_eq11_identity(double theta, double phi) {
    require_theta(theta);
    constexpr double p0 = 0.5;
    const double s2 = square(std::sin(theta));
    const double c2 = square(std::cos(theta));
    const double half_angle_form = 2.0 * p0 * (square(std::cos(phi / 2.0)) * s2 + 0.5 * c2);
    const double y_port = p0 * (1.0 + s2 * std::cos(phi));
    return std::abs(half_angle_form - y_port);
}

FringeScan fringe_scan(const CountTable& table, Subset subset) {
    FringeScan scan;
    for (const PhaseCounts& row : table.rows) {
        std::uint64_t nx = row.n_x();
        std::uint64_t n = row.total();
        if (subset == Subset::In) {
            nx = row.n_x_in;
            n = row.n_in();
        } else if (subset == Subset::Out) {
            nx = row.n_x_out;
            n = row.n_out();
        }
        if (n == 0) continue;
        const double rate = static_cast<double>(nx) / static_cast<double>(n);
        scan.phases.push_back(row.phase);
        scan.rates_x.push_back(rate);
        scan.uncertainties.push_back(std::sqrt(rate * (1.0 - rate) / static_cast<double>(n)));
    }
    return scan;
}

FringeScan model_scan(double theta, std::span<const double> phases) {
    FringeScan scan;
    for (double phi : phases) {
        scan.phases.push_back(phi);
        scan.rates_x.push_back(predicted_modulated_intensity(theta, phi).p_x);
        scan.uncertainties.push_back(0.0);
    }
    return scan;
}

Estimate estimate_visibility(const FringeScan& scan) {
    const std::size_t n = scan.phases.size();
    if (scan.rates_x.size() != n || scan.uncertainties.size() != n)
        throw std::invalid_argument("fringe scan columns differ in length");
    if (n < 5) throw InsufficientPhaseCoverage("visibility fit needs >= 5 phase points, got " + std::to_string(n));
    const auto [lo, hi] = std::minmax_element(scan.phases.begin(), scan.phases.end());
    const double needed = 2.0 * std::numbers::pi * (1.0 - 1.0 / static_cast<double>(n));
    if (*hi - *lo < needed - 1e-9)
        throw InsufficientPhaseCoverage("phase grid spans " + format_double(*hi - *lo) + " rad, less than one period");

    // rate = c0 + c1 cos(phi), fitted in centered form.
    const double nd = static_cast<double>(n);
    std::vector<double> c(n);
    double c_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = std::cos(scan.phases[i]);
        c_mean += c[i];
        y_mean += scan.rates_x[i];
    }
    c_mean /= nd;
    y_mean /= nd;
    double scc = 0.0, scy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        scc += square(c[i] - c_mean);
        scy += (c[i] - c_mean) * (scan.rates_x[i] - y_mean);
    }
    if (!(scc > 1e-12 * nd)) throw DegenerateFit("cos(phi) is constant over the grid");
    const double c1 = scy / scc;
    const double c0 = y_mean - c1 * c_mean;
    if (!(c0 > 0.0)) throw DegenerateFit("fitted mean rate is not positive");

    // (X^T X)^-1 for X = [1, cos phi].
    double s1 = 0.0, s2 = 0.0;
    for (double ci : c) {
        s1 += ci;
        s2 += ci * ci;
    }
    const double det = nd * s2 - s1 * s1;
    const double inv00 = s2 / det, inv01 = -s1 / det, inv11 = nd / det;

    double var00, var01, var11;
    const bool weighted = std::all_of(scan.uncertainties.begin(), scan.uncertainties.end(),
                                      [](double u) { return u > 0.0; });
    if (weighted) {
        // Sandwich: inv * (sum sigma_i^2 x_i x_i^T) * inv.
        double m00 = 0.0, m01 = 0.0, m11 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = square(scan.uncertainties[i]);
            m00 += w;
            m01 += w * c[i];
            m11 += w * c[i] * c[i];
        }
        const double a00 = inv00 * m00 + inv01 * m01, a01 = inv00 * m01 + inv01 * m11;
        const double a10 = inv01 * m00 + inv11 * m01, a11 = inv01 * m01 + inv11 * m11;
        var00 = a00 * inv00 + a01 * inv01;
        var01 = a00 * inv01 + a01 * inv11;
        var11 = a10 * inv01 + a11 * inv11;
    } else {
        double ssr = 0.0;
        for (std::size_t i = 0; i < n; ++i) ssr += square(scan.rates_x[i] - c0 - c1 * c[i]);
        const double sigma2 = ssr / (nd - 2.0);
        var00 = sigma2 * inv00;
        var01 = sigma2 * inv01;
        var11 = sigma2 * inv11;
    }

    const double v = std::abs(c1) / c0;
    const double g0 = -std::abs(c1) / (c0 * c0);
    const double g1 = (c1 < 0.0 ? -1.0 : 1.0) / c0;
    const double var = g0 * g0 * var00 + 2.0 * g0 * g1 * var01 + g1 * g1 * var11;
    return {std::clamp(v, 0.0, 1.0), std::sqrt(std::max(var, 0.0))};
}

double visibility_minmax(const FringeScan& scan) {
    if (scan.rates_x.empty()) throw InsufficientPhaseCoverage("empty fringe scan");
    const auto [lo, hi] = std::minmax_element(scan.rates_x.begin(), scan.rates_x.end());
    if (!(*hi + *lo > 0.0)) throw DegenerateFit("all rates are zero");
    return (*hi - *lo) / (*hi + *lo);
}

Estimate estimate_distinguishability(const CountTable& table, const DutyFractions& fractions) {
    if (!(fractions.a_frac >= 0.0 && fractions.b_frac >= 0.0) ||
        std::abs(fractions.a_frac + fractions.b_frac - 1.0) > 1e-12)
        throw std::invalid_argument("duty fractions must be non-negative and sum to 1");
    const std::uint64_t total = table.total();
    if (total == 0) throw EmptyTable("count table holds no events");
    const double n = static_cast<double>(total);
    const double d = static_cast<double>(table.total_out()) / n;
    return {d, std::sqrt(d * (1.0 - d) / n)};
}

double complementarity_check(const DualityMeasures& m) noexcept {
    return std::abs(m.visibility + m.distinguishability - 1.0);
}

void write_analysis_report(std::ostream& os, double theta, const FringeScan& observed,
                           const DualityMeasures& measures) {
    os << "theta,phase,rate_pred,rate_obs,stderr\n";
    for (std::size_t i = 0; i < observed.phases.size(); ++i) {
        const double phi = observed.phases[i];
        os << format_double(theta) << ',' << format_double(phi) << ','
           << format_double(predicted_modulated_intensity(theta, phi).p_x) << ','
           << format_double(observed.rates_x[i]) << ',' << format_double(observed.uncertainties[i]) << '\n';
    }
    os << "V=" << format_double(measures.visibility) << " D=" << format_double(measures.distinguishability)
       << " residual=" << format_double(measures.residual) << '\n';
}

}  // namespace mzi
