#pragma once

#include <span>
#include <vector>

#include "configuration.hpp"
#include "core.hpp"

namespace corr1d {

// Excitation dipole amplitudes, one per atom of a Configuration.
using DipoleAmplitudes = std::vector<Complex>;

// Steady state of the coupled point-dipole equations for one realization:
//   P_j = alpha_j d0 e^{i k x_j} + eta_j sum_{l != j} e^{i k |x_j - x_l|} P_l.
// Solved as the dense linear system (I - M) P = alpha .* drive by LU with
// partial pivoting; a Born/geometric iteration diverges near resonance at
// high density, exactly where the physics lives.
// Throws SingularSystem if the solve fails the residual check
// ||(I - M) P - rhs|| <= 1e-10 ||rhs||.
DipoleAmplitudes solve_dipoles(const WaveguideParams& p, const Configuration& c);

// Scattering amplitudes from the solved dipoles:
//   t = 1 + (ik / 2 d0) sum_l e^{-i k x_l} P_l   (forward,  x > max x_j)
//   r =     (ik / 2 d0) sum_l e^{+i k x_l} P_l   (backward, x < min x_j)
// referenced to the incident plane wave.
ScatterResult fields(const WaveguideParams& p, const Configuration& c,
                     const DipoleAmplitudes& amps);

// Total field (incident + scattered) / d0 on a coordinate grid, for
// diagnostics and plots.  Grid points must stay at least the minimum atom
// separation away from every atom; throws GridTooClose otherwise.
std::vector<Complex> field_profile(const WaveguideParams& p, const Configuration& c,
                                   const DipoleAmplitudes& amps, std::span<const double> xs);

// Convenience: solve + fields in one call.
ScatterResult dipole_scatter(const WaveguideParams& p, const Configuration& c);

}  // namespace corr1d
