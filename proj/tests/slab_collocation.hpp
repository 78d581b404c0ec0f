#pragma once

// Test-only oracle for the uniform-slab transmission: direct collocation of
// the closed polarization equation
//   P(x) = alpha rho e^{ikx} + eta rho \int_0^L e^{ik|x-x'|} P(x') dx'
// on a uniform grid, independent of the plane-wave matching used by the
// library.  The kernel integral is discretized by product integration:
// P is interpolated by sliding cubics and the moments of e^{+-ikx'} against
// the local basis are integrated exactly, so the kink of the kernel (always
// on a node) costs no accuracy and the scheme converges like h^4.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"
#include "meanfield.hpp"

namespace corr1d::testutil {

class SlabCollocation {
public:
    SlabCollocation(double k, double length, int n_intervals) : k_(k), length_(length), n_(n_intervals) {
        build_weights();
    }

    // Scattering amplitudes for the medium (rho, params) at detuning delta.
    ScatterResult scatter(const SlabMedium& m, double delta) const {
        const int nodes = n_ + 1;
        const Complex s = eta_delta(m.params, delta) * m.rho;
        const Complex drive = polarizability(m.params, delta) * m.rho;

        Eigen::MatrixXcd system = Eigen::MatrixXcd::Identity(nodes, nodes);
        for (int i = 0; i < nodes; ++i) {
            const double xi = x(i);
            const Complex forward = std::exp(kI * (k_ * xi));
            for (int j = 0; j < nodes; ++j) {
                system(i, j) -= s * (forward * prefix_(i, j) + std::conj(forward) * suffix_(i, j));
            }
        }
        Eigen::VectorXcd rhs(nodes);
        for (int i = 0; i < nodes; ++i) rhs(i) = drive * std::exp(kI * (k_ * x(i)));

        const Eigen::VectorXcd polarization = system.partialPivLu().solve(rhs);

        // t = 1 + (ik/2) int e^{-ikx'} P,  r = (ik/2) int e^{+ikx'} P
        Complex minus{0.0, 0.0}, plus{0.0, 0.0};
        for (int j = 0; j < nodes; ++j) {
            minus += prefix_(n_, j) * polarization(j);   // full-range e^{-ikx'} weights
            plus += suffix_(0, j) * polarization(j);     // full-range e^{+ikx'} weights
        }
        ScatterResult out;
        out.t = 1.0 + kI * k_ / 2.0 * minus;
        out.r = kI * k_ / 2.0 * plus;
        return out;
    }

private:
    double x(int i) const { return length_ * i / n_; }

    // prefix_(i, j): weight of node j in \int_0^{x_i} e^{-ikx'} P(x') dx'
    // suffix_(i, j): weight of node j in \int_{x_i}^L e^{+ikx'} P(x') dx'
    void build_weights() {
        const int nodes = n_ + 1;
        const double h = length_ / n_;

        // exact moments M_m = int_0^1 e^{i theta t} t^m dt by integration by parts
        auto moments = [](Complex theta) {
            std::array<Complex, 4> m;
            const Complex e = std::exp(kI * theta);
            const Complex it = kI * theta;
            m[0] = (e - 1.0) / it;
            for (int p = 1; p < 4; ++p) m[p] = (e - static_cast<double>(p) * m[p - 1]) / it;
            return m;
        };
        const auto m_minus = moments(Complex(-k_ * h, 0.0));
        const auto m_plus = moments(Complex(k_ * h, 0.0));

        // per-segment contributions accumulated into node weights
        Eigen::MatrixXcd seg_minus = Eigen::MatrixXcd::Zero(n_, nodes);
        Eigen::MatrixXcd seg_plus = Eigen::MatrixXcd::Zero(n_, nodes);
        for (int j = 0; j < n_; ++j) {
            int base = j - 1;                      // stencil nodes base..base+3
            if (base < 0) base = 0;
            if (base + 3 > n_) base = n_ - 3;
            // re-derive the basis for the shifted stencil: nodes at
            // (base + q - j) in t units, q = 0..3
            for (int q = 0; q < 4; ++q) {
                // Lagrange polynomial through t-nodes tq = base + q - j
                double tq[4];
                for (int u = 0; u < 4; ++u) tq[u] = base + u - j;
                // expand l_q(t) = prod_{u != q} (t - tq[u]) / (tq[q] - tq[u]) in powers of t
                double coeff[4] = {1.0, 0.0, 0.0, 0.0};
                double denom = 1.0;
                for (int u = 0; u < 4; ++u) {
                    if (u == q) continue;
                    denom *= tq[q] - tq[u];
                    double next[4] = {0.0, 0.0, 0.0, 0.0};
                    for (int p = 0; p < 3; ++p) {
                        next[p + 1] += coeff[p];
                        next[p] -= coeff[p] * tq[u];
                    }
                    for (int p = 0; p < 4; ++p) coeff[p] = next[p];
                }
                Complex wm{0.0, 0.0}, wp{0.0, 0.0};
                for (int p = 0; p < 4; ++p) {
                    wm += coeff[p] / denom * m_minus[p];
                    wp += coeff[p] / denom * m_plus[p];
                }
                const double xj = x(j);
                seg_minus(j, base + q) += h * std::exp(-kI * (k_ * xj)) * wm;
                seg_plus(j, base + q) += h * std::exp(kI * (k_ * xj)) * wp;
            }
        }

        prefix_ = Eigen::MatrixXcd::Zero(nodes, nodes);
        suffix_ = Eigen::MatrixXcd::Zero(nodes, nodes);
        for (int i = 1; i < nodes; ++i) prefix_.row(i) = prefix_.row(i - 1) + seg_minus.row(i - 1);
        for (int i = nodes - 2; i >= 0; --i) suffix_.row(i) = suffix_.row(i + 1) + seg_plus.row(i);
    }

    double k_;
    double length_;
    int n_;
    Eigen::MatrixXcd prefix_;
    Eigen::MatrixXcd suffix_;
};

}  // namespace corr1d::testutil
