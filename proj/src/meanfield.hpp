#pragma once

#include <functional>
#include <span>
#include <vector>

#include "core.hpp"
#include "ensembles.hpp"

namespace corr1d {

// Uniform effective medium of line density rho filling [0, L]: the closed
// equation for the polarization after the decorrelation (mean-field)
// truncation of the correlation hierarchy.
struct SlabMedium {
    double rho = 0.0;
    double length = 1.0;
    WaveguideParams params;

    void validate() const;
};

// Susceptibility chi = n^2 - 1 = alpha rho; exactly linear in rho (no
// Lorentz-Lorenz local-field correction in 1D).
Complex susceptibility(const SlabMedium& m, double delta);

// n = sqrt(1 + alpha rho), branch fixed by Im(n k) >= 0 (damped propagation).
Complex refractive_index(const SlabMedium& m, double delta);

// Transmission/reflection of the uniform slab from two-interface matching
// (continuity of the field and its derivative at x = 0 and x = L), in the
// same phase convention as the exact solvers.
ScatterResult slab_transmission(const SlabMedium& m, double delta);

// Cooperative Lamb shift of the transmission resonance, leading order in
// density:  (gamma_w rho / 2k) (1 - sin(2Lk) / 2Lk).
double cls_shift(const SlabMedium& m);

// Resonance HWHM of the effective-medium model, same order in density:
//   gamma_t sqrt(1 + (gamma_w rho / gamma_t k) (1 + 2L^2k^2 - cos 2Lk)/(2Lk)).
double mft_width(const SlabMedium& m);

// Thin-sample expansion of mft_width (square root linearized).
double mft_width_thin(const SlabMedium& m);

struct PeakFit {
    double shift = 0.0;        // abscissa of the curve maximum
    double uncertainty = 0.0;  // propagated from the per-point errors
};

// Location of the maximum of a sampled curve: argmax on the grid refined by
// a parabola through the three bracketing points, with the per-point
// standard errors propagated through the fit.  The grid must be strictly
// monotone with at least 5 points and must not peak at either boundary
// (PeakAtBoundary otherwise: widen the grid).
PeakFit extract_peak_shift(std::span<const double> grid, std::span<const double> values,
                           std::span<const double> stderrs);

// Same on ensemble output; the curve is the extinction 1 - <T>, whose
// maximum is the transmission resonance.
PeakFit extract_peak_shift(const std::vector<SpectrumPoint>& spectrum);

struct WidthEstimate {
    double fwhm = 0.0;
    double uncertainty = 0.0;
};

// Full width at half maximum of a single-peaked sampled curve, from linear
// interpolation of the two half-height crossings; uncertainty propagated
// from the per-point errors through the local slopes.
WidthEstimate fwhm(std::span<const double> grid, std::span<const double> values,
                   std::span<const double> stderrs);

// FWHM of the extinction curve 1 - <T> of a spectrum.
WidthEstimate extinction_fwhm(const std::vector<SpectrumPoint>& spectrum);

// Argmax of f on [lo, hi] by golden-section search refined to `tol`;
// used for noise-free model curves (e.g. the slab resonance position).
double maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                       double tol = 1e-12);

// Argmax of a smooth noise-free curve whose peak is too shallow for direct
// maximization (rounding flattens f near the top): brackets with
// golden-section, then bisects the central-difference slope
// f(x + step) - f(x - step), which keeps a usable signal-to-noise ratio
// down to curvatures ~1e-13.  `step` should sit well below the curve's
// variation scale; it biases the result by O(step^2 f'''/f'').
double locate_smooth_peak(const std::function<double(double)>& f, double lo, double hi,
                          double step);

}  // namespace corr1d
