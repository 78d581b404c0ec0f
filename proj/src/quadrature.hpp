#pragma once

#include <functional>
#include <vector>

#include "core.hpp"

namespace corr1d {

// Gauss-Hermite rule for the weight exp(-x^2) on (-inf, inf).
// Nodes and weights are computed by the Golub-Welsch eigenvalue method and
// cached per order; sum of weights = sqrt(pi).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    static const GaussHermiteRule& of_order(int n);
};

// Adaptive Gauss-Kronrod 7-15 integration of a complex integrand on [a, b].
// Bisects the interval with the largest error estimate until
// total_error <= max(abs_tol, rel_tol * |integral|).
// Throws QuadratureFailure if the budget of subintervals is exhausted.
Complex integrate_gk(const std::function<Complex(double)>& f, double a, double b,
                     double abs_tol = 1e-12, double rel_tol = 1e-9,
                     int max_intervals = 2000);

// Average of f over a normal distribution N(mean, sigma^2).
// sigma = 0 degenerates to f(mean).  Uses Gauss-Hermite with order
// escalation (64, 128, 256, 512); if the escalation has not converged to
// rel_tol -- which happens when sigma is much wider than the scale on which
// f varies -- falls back to adaptive integration over mean +- 10 sigma.
Complex gaussian_average(const std::function<Complex(double)>& f, double mean, double sigma,
                         double rel_tol = 1e-7);

// Same for a product of two independent normals (tensorized rules; the
// adaptive fallback nests one adaptive integral inside the other).
Complex gaussian_average_2d(const std::function<Complex(double, double)>& f, double mean,
                            double sigma, double rel_tol = 1e-6);

}  // namespace corr1d
