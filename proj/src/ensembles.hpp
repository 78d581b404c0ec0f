#pragma once

#include <cstdint>
#include <vector>

#include "configuration.hpp"
#include "core.hpp"
#include "rng.hpp"

namespace corr1d {

enum class EnsembleKind { ClassicalUniform, Fermionic };

enum class SolverBackend { Dipole, Transfer };

// Description of a stochastic ensemble of atomic configurations.
struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::ClassicalUniform;
    int n_atoms = 1;             // fixed atom number
    double poisson_nbar = -1.0;  // >= 0: draw N ~ Poisson(nbar) per realization (classical only)
    double box_length = 1.0;     // atoms occupy [0, L)
    double doppler_width = 0.0;  // Gaussian detuning spread per atom (quasi-static Doppler)
    double base_detuning = 0.0;
    int n_realizations = 1;
    std::uint64_t seed = 0;

    // A fixed Fermi sea has a fixed atom number, so poisson_nbar is
    // incompatible with the fermionic kind.  Throws InvalidParams.
    void validate() const;
};

// N i.i.d. positions uniform on [0, L), sorted; per-atom detunings
// base_detuning + Gaussian(0, doppler_width).
Configuration sample_uniform(const EnsembleSpec& spec, Rng& rng);

// Positions distributed as the absolute square of the filled-shell
// free-fermion wave function with periodic orbitals on [0, L),
//   |Psi|^2  ~  prod_{i<j} sin^2(pi (x_i - x_j) / L),
// which has exactly uniform single-particle density.  Sampled by a
// Metropolis chain over single-particle moves.
Configuration sample_fermionic(const EnsembleSpec& spec, Rng& rng);

// Metropolis chain for the fermionic position distribution.  Burn-in runs
// 100 N sweeps (one sweep = N single-particle Gaussian proposals with
// periodic wrap); the step size adapts toward 40% acceptance during burn-in
// and then freezes.  Emissions are separated by 10 thinning sweeps.
// Throws ChainNotEquilibrated if the post-adaptation acceptance rate leaves
// [0.1, 0.9].
class FermionicChain {
public:
    FermionicChain(int n_atoms, double box_length, std::uint64_t seed);
    FermionicChain(int n_atoms, double box_length, Rng rng);

    // Advances 10 thinning sweeps and returns the sorted snapshot.
    std::vector<double> emit_positions();

    double acceptance_rate() const;
    double step_size() const { return step_; }

private:
    void sweep();
    double log_weight_delta(std::size_t i, double x_new) const;
    void burn_in();

    int n_;
    double box_;
    double step_;
    Rng rng_;
    std::vector<double> x_;
    std::uint64_t proposals_ = 0;
    std::uint64_t accepts_ = 0;
};

// Per-grid-point ensemble statistics of the exact transmission.
struct SpectrumPoint {
    double delta = 0.0;
    Complex mean_t{0.0, 0.0};
    double mean_T = 0.0;
    double mean_lnT = 0.0;
    double stderr_T = 0.0;
    double stderr_lnT = 0.0;
    long n_used = 0;      // realizations entering <ln T>
    long n_diverged = 0;  // solver failures plus T < T_floor realizations
};

// Realizations with T below this floor are counted as diverged and left out
// of <ln T> only; their actual T still enters <T>.
inline constexpr double kTransmissionFloor = 1e-300;

// Ensemble-averaged transmission on a detuning grid.  Atomic positions and
// Doppler offsets are drawn once per realization (indexed seeding, see
// rng.hpp) and scanned across the grid, as for a fixed sample under a swept
// drive.  Per-realization results are identical for either solver backend;
// output is bitwise independent of the thread count.  threads = 0 uses the
// available hardware parallelism.
std::vector<SpectrumPoint> average_transmission(const WaveguideParams& p, const EnsembleSpec& spec,
                                                const std::vector<double>& delta_grid,
                                                SolverBackend backend, int threads = 0);

// Mean-field transmission amplitude of n atoms, <t^(1)>^n; for
// doppler_width > 0 the single-atom amplitude is averaged over the Gaussian
// detuning distribution first.
Complex mft_product(const WaveguideParams& p, double delta, double doppler_width, long n);

// Doppler-averaged single-atom amplitude <t^(1)> (the base of mft_product).
Complex mft_single_atom(const WaveguideParams& p, double delta, double doppler_width);

}  // namespace corr1d
