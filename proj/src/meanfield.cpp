#include "meanfield.hpp"

#include <cmath>
#include <functional>

namespace corr1d {

void SlabMedium::validate() const {
    params.validate();
    if (!(rho >= 0.0)) throw InvalidParams("SlabMedium: rho must be >= 0");
    if (!(length > 0.0)) throw InvalidParams("SlabMedium: length must be > 0");
}

Complex susceptibility(const SlabMedium& m, double delta) {
    return polarizability(m.params, delta) * m.rho;
}

Complex refractive_index(const SlabMedium& m, double delta) {
    Complex chi = susceptibility(m, delta);
    // Physical chi has Im >= 0; land -0.0 imaginary parts on the upper rim
    // of the branch cut so sqrt picks the damped wave.
    if (chi.imag() == 0.0) chi = Complex(chi.real(), 0.0);
    const Complex n = std::sqrt(1.0 + chi);
    return (n.imag() < 0.0) ? -n : n;
}

ScatterResult slab_transmission(const SlabMedium& m, double delta) {
    m.validate();
    const double k = m.params.k;
    const double L = m.length;
    const Complex n = refractive_index(m, delta);
    const Complex beta = std::exp(kI * (n * k * L));  // phase across the slab
    const Complex beta2 = beta * beta;
    const Complex plus = (1.0 + n) * (1.0 + n);
    const Complex minus = (1.0 - n) * (1.0 - n);
    const Complex denom = plus - minus * beta2;

    ScatterResult s;
    s.t = 4.0 * n * beta * std::exp(-kI * (k * L)) / denom;
    s.r = (n * n - 1.0) * (beta2 - 1.0) / denom;
    return s;
}

double cls_shift(const SlabMedium& m) {
    const double x = 2.0 * m.length * m.params.k;
    const double prefactor = m.params.gamma_w * m.rho / (2.0 * m.params.k);
    if (std::abs(x) < 1e-6) return prefactor * x * x / 6.0;  // 1 - sinc -> x^2/6
    return prefactor * (1.0 - std::sin(x) / x);
}

double mft_width(const SlabMedium& m) {
    const double gt = m.params.gamma_t();
    const double x = 2.0 * m.length * m.params.k;
    const double etalon = (1.0 + 0.5 * x * x - std::cos(x)) / x;
    return gt * std::sqrt(1.0 + (m.params.gamma_w * m.rho / (gt * m.params.k)) * etalon);
}

double mft_width_thin(const SlabMedium& m) {
    const double gt = m.params.gamma_t();
    const double x = 2.0 * m.length * m.params.k;
    const double etalon = (1.0 + 0.5 * x * x - std::cos(x)) / (2.0 * x);
    return gt + (m.params.gamma_w * m.rho / m.params.k) * etalon;
}

PeakFit extract_peak_shift(std::span<const double> grid, std::span<const double> values,
                           std::span<const double> stderrs) {
    const std::size_t n = grid.size();
    if (n < 5 || values.size() != n || stderrs.size() != n) {
        throw InvalidParams("extract_peak_shift: need >= 5 points with matching errors");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(grid[i] > grid[i - 1])) throw InvalidParams("extract_peak_shift: grid not increasing");
    }

    std::size_t peak = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (values[i] > values[peak]) peak = i;
    }
    if (peak == 0 || peak == n - 1) {
        throw PeakAtBoundary("extract_peak_shift: maximum on the grid edge; widen the grid");
    }

    const double x0 = grid[peak - 1], x1 = grid[peak], x2 = grid[peak + 1];
    const double y0 = values[peak - 1], y1 = values[peak], y2 = values[peak + 1];
    const double h01 = x1 - x0, h12 = x2 - x1, span = x2 - x0;
    const double f01 = (y1 - y0) / h01;
    const double f12 = (y2 - y1) / h12;
    const double curvature = (f12 - f01) / span;
    if (curvature == 0.0) {
        // Flat triple: cannot refine beyond the grid point.
        return {x1, 0.5 * span};
    }

    PeakFit fit;
    fit.shift = 0.5 * (x0 + x1) - f01 / (2.0 * curvature);

    // First-order propagation of the three ordinate errors through the vertex.
    const double df01[3] = {-1.0 / h01, 1.0 / h01, 0.0};
    const double df12[3] = {0.0, -1.0 / h12, 1.0 / h12};
    const double sigma[3] = {stderrs[peak - 1], stderrs[peak], stderrs[peak + 1]};
    double var = 0.0;
    for (int j = 0; j < 3; ++j) {
        const double dcurv = (df12[j] - df01[j]) / span;
        const double dshift = -(df01[j] * curvature - f01 * dcurv) / (2.0 * curvature * curvature);
        var += dshift * dshift * sigma[j] * sigma[j];
    }
    fit.uncertainty = std::sqrt(var);
    return fit;
}

PeakFit extract_peak_shift(const std::vector<SpectrumPoint>& spectrum) {
    std::vector<double> grid, extinction, errs;
    grid.reserve(spectrum.size());
    for (const SpectrumPoint& pt : spectrum) {
        grid.push_back(pt.delta);
        extinction.push_back(1.0 - pt.mean_T);
        errs.push_back(pt.stderr_T);
    }
    return extract_peak_shift(grid, extinction, errs);
}

namespace {

struct Crossing {
    double x;
    double var;
};

// Half-level crossing between samples i and i+1 by linear interpolation.
Crossing interpolate_crossing(std::span<const double> grid, std::span<const double> values,
                              std::span<const double> stderrs, std::size_t i, double level,
                              double level_var) {
    const double dx = grid[i + 1] - grid[i];
    const double dy = values[i + 1] - values[i];
    const double x = grid[i] + (level - values[i]) * dx / dy;
    const double d_level = dx / dy;
    const double d_yi = dx * (level - values[i + 1]) / (dy * dy);
    const double d_yi1 = -dx * (level - values[i]) / (dy * dy);
    const double var = d_level * d_level * level_var + d_yi * d_yi * stderrs[i] * stderrs[i] +
                       d_yi1 * d_yi1 * stderrs[i + 1] * stderrs[i + 1];
    return {x, var};
}

}  // namespace

WidthEstimate fwhm(std::span<const double> grid, std::span<const double> values,
                   std::span<const double> stderrs) {
    const std::size_t n = grid.size();
    if (n < 5 || values.size() != n || stderrs.size() != n) {
        throw InvalidParams("fwhm: need >= 5 points with matching errors");
    }
    std::size_t peak = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (values[i] > values[peak]) peak = i;
    }
    const double level = 0.5 * values[peak];
    const double level_var = 0.25 * stderrs[peak] * stderrs[peak];

    std::size_t left = peak;
    while (left > 0 && values[left] > level) --left;
    std::size_t right = peak;
    while (right + 1 < n && values[right] > level) ++right;
    if (values[left] > level || values[right] > level) {
        throw PeakAtBoundary("fwhm: curve does not drop to half maximum inside the grid");
    }

    const Crossing lc = interpolate_crossing(grid, values, stderrs, left, level, level_var);
    const Crossing rc = interpolate_crossing(grid, values, stderrs, right - 1, level, level_var);
    return {rc.x - lc.x, std::sqrt(lc.var + rc.var)};
}

WidthEstimate extinction_fwhm(const std::vector<SpectrumPoint>& spectrum) {
    std::vector<double> grid, extinction, errs;
    for (const SpectrumPoint& pt : spectrum) {
        grid.push_back(pt.delta);
        extinction.push_back(1.0 - pt.mean_T);
        errs.push_back(pt.stderr_T);
    }
    return fwhm(grid, extinction, errs);
}

double locate_smooth_peak(const std::function<double(double)>& f, double lo, double hi,
                          double step) {
    if (!(step > 0.0) || !(hi > lo)) throw InvalidParams("locate_smooth_peak: bad bracket or step");
    const double coarse = maximize_scalar(f, lo, hi, step);
    auto slope = [&](double x) { return f(x + step) - f(x - step); };

    // Expand around the coarse maximum until the slope changes sign.
    double a = coarse - 2.0 * step;
    double b = coarse + 2.0 * step;
    for (int i = 0; i < 60 && slope(a) <= 0.0; ++i) a -= (coarse - a);
    for (int i = 0; i < 60 && slope(b) >= 0.0; ++i) b += (b - coarse);
    double fa = slope(a), fb = slope(b);
    if (!(fa > 0.0 && fb < 0.0)) {
        return coarse;  // slope lost in rounding noise; the coarse value stands
    }
    for (int i = 0; i < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(a)); ++i) {
        const double mid = 0.5 * (a + b);
        const double fm = slope(mid);
        if (fm > 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

double maximize_scalar(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace corr1d
