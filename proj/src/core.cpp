#include "core.hpp"

#include <cmath>

namespace corr1d {

WaveguideParams WaveguideParams::from_ratio(double gamma_w_over_gamma_t, double k) {
    if (!(gamma_w_over_gamma_t >= 0.0 && gamma_w_over_gamma_t <= 1.0)) {
        throw InvalidParams("gamma_w/gamma_t must lie in [0, 1], got " +
                            std::to_string(gamma_w_over_gamma_t));
    }
    WaveguideParams p;
    p.k = k;
    p.gamma_w = gamma_w_over_gamma_t;
    p.gamma_l = 1.0 - gamma_w_over_gamma_t;
    return p;
}

void WaveguideParams::validate() const {
    if (!(k > 0.0) || !std::isfinite(k)) throw InvalidParams("wavenumber k must be finite and > 0");
    if (!(gamma_w >= 0.0) || !std::isfinite(gamma_w)) throw InvalidParams("gamma_w must be finite and >= 0");
    if (!(gamma_l >= 0.0) || !std::isfinite(gamma_l)) throw InvalidParams("gamma_l must be finite and >= 0");
    if (!(gamma_t() > 0.0)) throw InvalidParams("gamma_t = gamma_w + gamma_l must be > 0");
    if (!std::isfinite(std::abs(d0)) || std::abs(d0) == 0.0) throw InvalidParams("d0 must be finite and nonzero");
}

Complex polarizability(const WaveguideParams& p, double delta) {
    return -2.0 * p.gamma_w / (p.k * (delta + kI * p.gamma_t()));
}

Complex eta_delta(const WaveguideParams& p, double delta) {
    return p.gamma_w / (kI * delta - p.gamma_t());
}

ScatterResult single_atom_scatter(const WaveguideParams& p, double delta) {
    const Complex denom = kI * delta - p.gamma_t();
    ScatterResult s;
    s.t = ((p.gamma_w - p.gamma_t()) + kI * delta) / denom;
    s.r = p.gamma_w / denom;
    return s;
}

std::pair<double, double> single_atom_power(const WaveguideParams& p, double delta) {
    const double gt = p.gamma_t();
    const double denom = gt * gt + delta * delta;
    const double T = ((gt - p.gamma_w) * (gt - p.gamma_w) + delta * delta) / denom;
    const double R = p.gamma_w * p.gamma_w / denom;
    return {T, R};
}

double reflection_phase(const WaveguideParams& p, double delta) {
    const Complex eta = eta_delta(p, delta);
    return std::atan2(eta.imag(), eta.real());
}

}  // namespace corr1d
