#include "transfer.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "quadrature.hpp"

namespace corr1d {

namespace {

void verify_unit_det(const TransferMatrix& m, const char* what) {
    // Error scale of the det computation grows with the entry magnitudes
    // (near-singular atom matrices have large entries).
    const double scale =
        std::max(1.0, std::abs(m.m11) * std::abs(m.m22) + std::abs(m.m12) * std::abs(m.m21));
    if (std::abs(m.det() - 1.0) > 1e-12 * scale) {
        throw Error(std::string(what) + ": transfer matrix determinant deviates from 1");
    }
}

}  // namespace

TransferMatrix atom_matrix(const WaveguideParams& p, double delta) {
    const Complex eta = eta_delta(p, delta);
    const Complex denom = eta + 1.0;
    if (std::abs(denom) < 1e-12) {
        throw SingularAtomMatrix("atom_matrix: lossless resonant atom (t = 0) has no finite "
                                 "transfer matrix; offset delta or use the dipole solver");
    }
    TransferMatrix m{(2.0 * eta + 1.0) / denom, eta / denom, -eta / denom, 1.0 / denom};
    verify_unit_det(m, "atom_matrix");
    return m;
}

TransferMatrix propagation_matrix(const WaveguideParams& p, double x_from, double x_to) {
    const Complex phase = std::exp(kI * (p.k * (x_to - x_from)));
    TransferMatrix m{phase, 0.0, 0.0, 1.0 / phase};
    verify_unit_det(m, "propagation_matrix");
    return m;
}

TransferMatrix composite(const WaveguideParams& p, const Configuration& c, double x_left,
                         double x_right) {
    if (!c.empty() && !(x_left < c.positions().front() && x_right > c.positions().back())) {
        throw InvalidParams("composite: bracket [x_left, x_right] must enclose all atoms");
    }
    if (c.empty()) return propagation_matrix(p, x_left, x_right);

    TransferMatrix m = propagation_matrix(p, x_left, c.position(0));
    for (std::size_t j = 0; j < c.size(); ++j) {
        m = atom_matrix(p, c.detuning(j)) * m;
        const double next = (j + 1 < c.size()) ? c.position(j + 1) : x_right;
        m = propagation_matrix(p, c.position(j), next) * m;
    }
    return m;
}

ScatterResult extract_scatter(const TransferMatrix& m) {
    if (std::abs(m.m22) < 1e-14) {
        throw NoTransmissionSolution("extract_scatter: m22 vanishes");
    }
    ScatterResult s;
    s.t = m.m11 - m.m12 * m.m21 / m.m22;
    s.r = -m.m21 / m.m22;
    return s;
}

ScatterResult composite_scatter(const WaveguideParams& p, const Configuration& c) {
    // Conjugating the raw composite with propagation to the x = 0 phase
    // reference divides out the trivial bracket phase and yields amplitudes
    // in the incident-wave convention of the dipole solver.
    TransferMatrix m = TransferMatrix::identity();
    if (!c.empty()) {
        m = propagation_matrix(p, 0.0, c.position(0));
        for (std::size_t j = 0; j < c.size(); ++j) {
            m = atom_matrix(p, c.detuning(j)) * m;
            const double next = (j + 1 < c.size()) ? c.position(j + 1) : 0.0;
            m = propagation_matrix(p, c.position(j), next) * m;
        }
    }
    return extract_scatter(m);
}

Complex two_atom_amplitude(const WaveguideParams& p, double delta1, double delta2, double x12) {
    const Complex t1 = single_atom_scatter(p, delta1).t;
    const Complex t2 = single_atom_scatter(p, delta2).t;
    const Complex loop =
        eta_delta(p, delta1) * eta_delta(p, delta2) * std::exp(kI * (2.0 * p.k * x12));
    const Complex denom = 1.0 - loop;
    if (std::abs(denom) < 1e-14) {
        throw ResonantDivergence("two_atom_amplitude: recurrent-scattering loop closes at this "
                                 "separation and detuning");
    }
    return t2 * t1 / denom;
}

Complex two_atom_series(const WaveguideParams& p, double delta1, double delta2, double x12,
                        int terms) {
    if (terms < 1) throw InvalidParams("two_atom_series: need at least one term");
    const Complex t1 = single_atom_scatter(p, delta1).t;
    const Complex t2 = single_atom_scatter(p, delta2).t;
    const Complex loop =
        eta_delta(p, delta1) * eta_delta(p, delta2) * std::exp(kI * (2.0 * p.k * x12));
    Complex sum{0.0, 0.0};
    Complex term{1.0, 0.0};
    for (int m = 0; m < terms; ++m) {
        sum += term;
        term *= loop;
    }
    return t2 * t1 * sum;
}

Complex hyp2f1_one_b_series(Complex b, Complex z) {
    if (b == Complex{0.0, 0.0}) return {1.0, 0.0};
    Complex sum{1.0, 0.0};
    Complex zm{1.0, 0.0};
    for (int m = 1; m <= 100000; ++m) {
        zm *= z;
        const Complex term = b / (b + static_cast<double>(m)) * zm;
        sum += term;
        if (std::abs(term) <= 1e-12 * std::abs(sum)) return sum;
    }
    throw NonconvergentSeries("hyp2f1_one_b_series: no convergence, |z| = " +
                              std::to_string(std::abs(z)));
}

Complex hyp2f1_one_b_quadrature(Complex b, Complex z) {
    // The series is the moment expansion of the phase integral
    //   int_0^{2pi} g(phi) / (1 - z e^{i phi}) dphi,
    // g(phi) = lambda e^{-lambda phi} / (1 - e^{-2 pi lambda}),  b = i lambda.
    const Complex lambda = -kI * b;
    const Complex norm = lambda / (1.0 - std::exp(-2.0 * std::numbers::pi * lambda));
    auto integrand = [&](double phi) {
        return norm * std::exp(-lambda * phi) / (1.0 - z * std::exp(kI * phi));
    };
    return integrate_gk(integrand, 0.0, 2.0 * std::numbers::pi, 1e-12, 1e-9, 4000);
}

Complex two_atom_average_analytic(const WaveguideParams& p, double delta, double rho) {
    if (!(rho > 0.0)) throw InvalidParams("two_atom_average_analytic: rho must be > 0");
    const Complex t1 = single_atom_scatter(p, delta).t;
    if (std::abs(t1) < 1e-15) return {0.0, 0.0};  // lossless resonance: numerator kills the average

    const Complex eta = eta_delta(p, delta);
    const Complex z = eta * eta;
    const Complex b = kI * (rho / (2.0 * p.k));
    Complex factor;
    if (std::abs(z) <= 0.9) {
        try {
            factor = hyp2f1_one_b_series(b, z);
        } catch (const NonconvergentSeries&) {
            factor = hyp2f1_one_b_quadrature(b, z);
        }
    } else {
        factor = hyp2f1_one_b_quadrature(b, z);
    }
    return t1 * t1 * factor;
}

Complex two_atom_average_doppler(const WaveguideParams& p, double delta_mean, double delta_width,
                                 double x12) {
    if (delta_width < 0.0) throw InvalidParams("two_atom_average_doppler: width must be >= 0");
    if (delta_width == 0.0) return two_atom_amplitude(p, delta_mean, delta_mean, x12);

    const Complex xi = std::exp(kI * (2.0 * p.k * x12));
    auto integrand = [&](double d1, double d2) -> Complex {
        const Complex t1 = single_atom_scatter(p, d1).t;
        const Complex t2 = single_atom_scatter(p, d2).t;
        const Complex denom = 1.0 - eta_delta(p, d1) * eta_delta(p, d2) * xi;
        if (std::abs(denom) < 1e-14) {
            // Isolated singular point (lossless resonant pair); the numerator
            // vanishes there too, so it carries no weight.
            if (std::abs(t2 * t1) < 1e-14) return {0.0, 0.0};
            throw ResonantDivergence("two_atom_average_doppler: divergent integrand");
        }
        return t2 * t1 / denom;
    };
    return gaussian_average_2d(integrand, delta_mean, delta_width, 1e-6);
}

double relative_deviation(Complex exact, Complex mft) {
    const double scale = std::abs(mft);
    if (scale <= 1e-14) {
        throw MftVanishes("relative_deviation: undefined at total mean-field extinction");
    }
    return std::abs(exact - mft) / scale;
}

double poisson_mft_thickness(const WaveguideParams& p, double delta, double nbar) {
    if (!(nbar >= 0.0)) throw InvalidParams("poisson_mft_thickness: nbar must be >= 0");
    const double gt = p.gamma_t();
    return (2.0 * gt - p.gamma_w) * nbar * p.gamma_w / (gt * gt + delta * delta);
}

}  // namespace corr1d
