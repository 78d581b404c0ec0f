#include "configuration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace corr1d {

Configuration::Configuration(std::vector<double> positions, std::vector<double> detunings, double k)
    : positions_(std::move(positions)), detunings_(std::move(detunings)) {
    if (!(k > 0.0)) throw InvalidParams("Configuration: k must be > 0");
    if (positions_.size() != detunings_.size()) {
        throw InvalidParams("Configuration: positions and detunings differ in length");
    }
    const double min_gap = kMinSeparation / k;
    for (std::size_t j = 0; j < positions_.size(); ++j) {
        if (!std::isfinite(positions_[j])) throw InvalidParams("Configuration: non-finite position");
        if (!std::isfinite(detunings_[j])) throw InvalidParams("Configuration: non-finite detuning");
        if (j > 0 && !(positions_[j] - positions_[j - 1] >= min_gap)) {
            throw InvalidParams("Configuration: positions must be sorted ascending with gaps >= " +
                                std::to_string(min_gap) + " (atoms " + std::to_string(j - 1) + ", " +
                                std::to_string(j) + ")");
        }
    }
}

Configuration Configuration::uniform_detuning(std::vector<double> positions, double delta, double k) {
    std::vector<double> detunings(positions.size(), delta);
    return Configuration(std::move(positions), std::move(detunings), k);
}

Configuration Configuration::shifted_detunings(double ddelta) const {
    Configuration c(*this);
    for (double& d : c.detunings_) d += ddelta;
    return c;
}

Configuration Configuration::mirrored() const {
    Configuration c;
    c.positions_.assign(positions_.rbegin(), positions_.rend());
    for (double& x : c.positions_) x = -x;
    c.detunings_.assign(detunings_.rbegin(), detunings_.rend());
    return c;
}

}  // namespace corr1d
