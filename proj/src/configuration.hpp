#pragma once

#include <vector>

#include "core.hpp"

namespace corr1d {

// One stochastic realization of the atomic medium: sorted atom positions
// and the per-atom detunings of the drive from each atom's resonance.
class Configuration {
public:
    // Minimum allowed separation, in units of 1/k.  Coincident atoms keep
    // the scattering kernel finite but are physically degenerate, so they
    // are rejected at construction.
    static constexpr double kMinSeparation = 1e-9;

    Configuration() = default;

    // Positions must be sorted ascending with gaps >= kMinSeparation/k;
    // detunings must match positions in length and be finite.
    // Throws InvalidParams otherwise.
    Configuration(std::vector<double> positions, std::vector<double> detunings, double k = 1.0);

    // All atoms share one detuning.
    static Configuration uniform_detuning(std::vector<double> positions, double delta, double k = 1.0);

    std::size_t size() const { return positions_.size(); }
    bool empty() const { return positions_.empty(); }

    const std::vector<double>& positions() const { return positions_; }
    const std::vector<double>& detunings() const { return detunings_; }

    double position(std::size_t j) const { return positions_[j]; }
    double detuning(std::size_t j) const { return detunings_[j]; }

    // Same positions, all detunings shifted by ddelta.
    Configuration shifted_detunings(double ddelta) const;

    // Sample mirrored through the origin (propagation direction reversed).
    Configuration mirrored() const;

private:
    std::vector<double> positions_;
    std::vector<double> detunings_;
};

}  // namespace corr1d
