#include "dipole.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace corr1d {

DipoleAmplitudes solve_dipoles(const WaveguideParams& p, const Configuration& c) {
    const std::size_t n = c.size();
    if (n == 0) return {};

    Eigen::MatrixXcd system(n, n);
    Eigen::VectorXcd rhs(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Complex eta_j = eta_delta(p, c.detuning(j));
        for (std::size_t l = 0; l < n; ++l) {
            if (l == j) {
                system(j, j) = 1.0;
            } else {
                system(j, l) = -eta_j * std::exp(kI * (p.k * std::abs(c.position(j) - c.position(l))));
            }
        }
        rhs(j) = polarizability(p, c.detuning(j)) * p.d0 * std::exp(kI * (p.k * c.position(j)));
    }

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
    Eigen::VectorXcd solution = lu.solve(rhs);

    const double residual = (system * solution - rhs).norm();
    const double rcond = lu.rcond();
    if (!(residual <= 1e-10 * rhs.norm()) || !solution.allFinite() || rcond < 1e-14) {
        throw SingularSystem("solve_dipoles: residual " + std::to_string(residual) +
                             ", reciprocal condition estimate " + std::to_string(rcond) +
                             "; unphysical configuration");
    }
    return DipoleAmplitudes(solution.data(), solution.data() + n);
}

ScatterResult fields(const WaveguideParams& p, const Configuration& c,
                     const DipoleAmplitudes& amps) {
    if (amps.size() != c.size()) throw InvalidParams("fields: amplitude/configuration size mismatch");
    Complex forward{0.0, 0.0};
    Complex backward{0.0, 0.0};
    for (std::size_t l = 0; l < c.size(); ++l) {
        const Complex phase = std::exp(kI * (p.k * c.position(l)));
        forward += amps[l] / phase;
        backward += amps[l] * phase;
    }
    const Complex prefactor = kI * p.k / (2.0 * p.d0);
    ScatterResult s;
    s.t = 1.0 + prefactor * forward;
    s.r = prefactor * backward;
    return s;
}

std::vector<Complex> field_profile(const WaveguideParams& p, const Configuration& c,
                                   const DipoleAmplitudes& amps, std::span<const double> xs) {
    if (amps.size() != c.size()) {
        throw InvalidParams("field_profile: amplitude/configuration size mismatch");
    }
    const double min_gap = Configuration::kMinSeparation / p.k;
    const Complex prefactor = kI * p.k / (2.0 * p.d0);

    std::vector<Complex> profile;
    profile.reserve(xs.size());
    for (double x : xs) {
        Complex scattered{0.0, 0.0};
        for (std::size_t l = 0; l < c.size(); ++l) {
            const double distance = std::abs(x - c.position(l));
            if (distance < min_gap) {
                throw GridTooClose("field_profile: grid point " + std::to_string(x) +
                                   " within minimum separation of atom " + std::to_string(l));
            }
            scattered += std::exp(kI * (p.k * distance)) * amps[l];
        }
        profile.push_back(std::exp(kI * (p.k * x)) + prefactor * scattered);
    }
    return profile;
}

ScatterResult dipole_scatter(const WaveguideParams& p, const Configuration& c) {
    return fields(p, c, solve_dipoles(p, c));
}

}  // namespace corr1d
