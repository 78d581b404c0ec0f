#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <utility>

#include "errors.hpp"

namespace corr1d {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/*
 * Conventions used throughout the library:
 *
 * A two-level atom coupled to a single-mode 1D waveguide decays into the
 * guided mode at rate gamma_w and out of the waveguide at rate gamma_l;
 * the total linewidth is gamma_t = gamma_w + gamma_l.  The incident drive
 * is a right-propagating plane wave d0 * exp(ikx) detuned by delta from
 * the atomic resonance.
 *
 * Internal units are k = 1 and gamma_t = 1: lengths are quoted as k*x and
 * rates as fractions of gamma_t.  All formulas are invariant under a
 * simultaneous rescaling of (delta, gamma_w, gamma_t), so nothing depends
 * on this choice.
 *
 * Amplitudes are phase-referenced to the incident wave: the transmission
 * amplitude t is the coefficient of exp(ikx) past the sample and the
 * reflection amplitude r the coefficient of exp(-ikx) before it, both
 * normalized so an empty waveguide has t = 1, r = 0.
 */
struct WaveguideParams {
    double k = 1.0;        // wavenumber of resonant light
    double gamma_w = 1.0;  // decay rate into the waveguide
    double gamma_l = 0.0;  // loss rate out of the waveguide
    Complex d0{1.0, 0.0};  // incident field amplitude

    double gamma_t() const { return gamma_w + gamma_l; }
    bool lossless() const { return gamma_l == 0.0; }

    // gamma_t = 1, k = 1 with the requested branching ratio gamma_w/gamma_t.
    static WaveguideParams from_ratio(double gamma_w_over_gamma_t, double k = 1.0);

    // Throws InvalidParams unless k > 0, gamma_w >= 0, gamma_l >= 0 and
    // gamma_t > 0, all finite.
    void validate() const;
};

// Complex transmission/reflection amplitudes of a scatterer (single atom,
// composite chain, or slab), in the phase convention above.
struct ScatterResult {
    Complex t{1.0, 0.0};
    Complex r{0.0, 0.0};

    double T() const { return std::norm(t); }
    double R() const { return std::norm(r); }

    // Optical thickness D = -ln T; +infinity (never NaN) at T = 0.
    double optical_thickness() const {
        const double transmission = T();
        if (transmission <= 0.0) return std::numeric_limits<double>::infinity();
        return -std::log(transmission);
    }
};

// Single-atom polarizability alpha = -2 gamma_w / [k (delta + i gamma_t)].
Complex polarizability(const WaveguideParams& p, double delta);

// Coupling constant eta_delta = gamma_w / (i delta - gamma_t) = i alpha k / 2.
// Equals the single-atom reflection amplitude r^(1).
Complex eta_delta(const WaveguideParams& p, double delta);

// t^(1) = [(gamma_w - gamma_t) + i delta] / (i delta - gamma_t),
// r^(1) = gamma_w / (i delta - gamma_t);  t^(1) = 1 + r^(1) identically.
ScatterResult single_atom_scatter(const WaveguideParams& p, double delta);

// Closed-form power coefficients
// T^(1) = [(gamma_t - gamma_w)^2 + delta^2] / (gamma_t^2 + delta^2),
// R^(1) = gamma_w^2 / (gamma_t^2 + delta^2).
std::pair<double, double> single_atom_power(const WaveguideParams& p, double delta);

// Phase phi of the reflection decomposition eta_delta = sqrt(R^(1)) e^{i phi},
// taken as the two-argument arctangent of eta_delta so the decomposition is
// exact.  Differs from arctan(delta/gamma_t) by a constant pi; only the sum
// phi_1 + phi_2 + 2 k x_12 enters any observable.
double reflection_phase(const WaveguideParams& p, double delta);

}  // namespace corr1d
