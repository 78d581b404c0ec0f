#pragma once

#include "configuration.hpp"
#include "core.hpp"

namespace corr1d {

// 2x2 complex matrix relating (right-, left-propagating) field amplitude
// pairs across a scatterer or free-propagation segment.  Composites multiply
// in order of traversal; every physical factor has unit determinant.
struct TransferMatrix {
    Complex m11{1.0, 0.0}, m12{0.0, 0.0};
    Complex m21{0.0, 0.0}, m22{1.0, 0.0};

    Complex det() const { return m11 * m22 - m12 * m21; }

    TransferMatrix operator*(const TransferMatrix& rhs) const {
        return {m11 * rhs.m11 + m12 * rhs.m21, m11 * rhs.m12 + m12 * rhs.m22,
                m21 * rhs.m11 + m22 * rhs.m21, m21 * rhs.m12 + m22 * rhs.m22};
    }

    static TransferMatrix identity() { return {}; }
};

// Single-atom transfer matrix
//   [ (2 eta + 1)/(eta + 1)   eta/(eta + 1) ]
//   [      -eta/(eta + 1)       1/(eta + 1) ]
// with eta = eta_delta.  Throws SingularAtomMatrix when |eta + 1| < 1e-12,
// i.e. for the lossless resonant atom whose t^(1) = 0; use the dipole
// solver there, or offset delta by at least 1e-9 gamma_t.
TransferMatrix atom_matrix(const WaveguideParams& p, double delta);

// Free propagation from x_from to x_to: diag(e^{ik dx}, e^{-ik dx}).
TransferMatrix propagation_matrix(const WaveguideParams& p, double x_from, double x_to);

// Ordered product of atom and propagation matrices spanning
// [x_left, x_right]; requires x_left < all positions < x_right.
TransferMatrix composite(const WaveguideParams& p, const Configuration& c, double x_left,
                         double x_right);

// Transmission/reflection of the system [E_t; 0] = m [E_i; E_r]:
// t = m11 - m12 m21 / m22, r = -m21 / m22.
// Throws NoTransmissionSolution when |m22| < 1e-14.
ScatterResult extract_scatter(const TransferMatrix& m);

// Composite scattering amplitudes of a configuration, phase-referenced to
// the incident plane wave (empty system gives t = 1, r = 0; the trivial
// propagation phase across the bracket is divided out).  Identical
// convention to dipole_solver fields().
ScatterResult composite_scatter(const WaveguideParams& p, const Configuration& c);

// Closed-form two-atom transmission amplitude
//   t12 = t2 t1 / (1 - eta1 eta2 e^{2 i k x12}),
// the sum over all repeated photon exchanges between the pair.  Throws
// ResonantDivergence when the denominator magnitude drops below 1e-14.
Complex two_atom_amplitude(const WaveguideParams& p, double delta1, double delta2, double x12);

// Truncation of the same amplitude after `terms` terms of the geometric
// series; each term past the first adds one recurrent scattering event.
// terms = 1 is the mean-field product t2 t1.
Complex two_atom_series(const WaveguideParams& p, double delta1, double delta2, double x12,
                        int terms);

// Ensemble average of t12 over the nearest-neighbor separation of a uniform
// gas of line density rho (exponentially distributed with rate rho):
//   <t12> = (t^(1))^2 2F1(1, i rho/2k; 1 + i rho/2k; eta_delta^2).
// The hypergeometric factor is summed as a power series for |z| <= 0.9 and
// evaluated by adaptive quadrature of the defining phase integral otherwise.
Complex two_atom_average_analytic(const WaveguideParams& p, double delta, double rho);

// 2F1(1, b; 1+b; z) = sum_m b/(b+m) z^m.  Exposed for tests; the two
// evaluation routes must agree.
Complex hyp2f1_one_b_series(Complex b, Complex z);
Complex hyp2f1_one_b_quadrature(Complex b, Complex z);

// Average of t12 over independent Gaussian detunings of the two atoms
// (quasi-static Doppler broadening): mean delta_mean, standard deviation
// delta_width, fixed separation x12.  delta_width = 0 reduces to
// two_atom_amplitude.  Relative accuracy 1e-6.
Complex two_atom_average_doppler(const WaveguideParams& p, double delta_mean, double delta_width,
                                 double x12);

// r = |exact - mft| / |mft|; throws MftVanishes when |mft| <= 1e-14.
double relative_deviation(Complex exact, Complex mft);

// Mean-field optical thickness averaged over a Poisson-distributed atom
// number:  D(nbar) = (2 gamma_t - gamma_w) nbar gamma_w / (gamma_t^2 + delta^2).
double poisson_mft_thickness(const WaveguideParams& p, double delta, double nbar);

}  // namespace corr1d
