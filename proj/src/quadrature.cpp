#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <Eigen/Dense>

namespace corr1d {

namespace {

// QUADPACK 15-point Kronrod / 7-point Gauss pair on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GkEstimate {
    Complex integral;
    double error;
};

GkEstimate gk15(const std::function<Complex(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const Complex f_center = f(center);
    Complex result_gauss = kWg[3] * f_center;
    Complex result_kronrod = kWgk[7] * f_center;

    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const Complex f_sum = f(center - dx) + f(center + dx);
        result_kronrod += kWgk[j] * f_sum;
        if (j % 2 == 1) result_gauss += kWg[j / 2] * f_sum;
    }
    result_gauss *= half;
    result_kronrod *= half;
    return {result_kronrod, std::abs(result_kronrod - result_gauss)};
}

}  // namespace

const GaussHermiteRule& GaussHermiteRule::of_order(int n) {
    static std::mutex mutex;
    static std::map<int, GaussHermiteRule> cache;

    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    // Jacobi matrix of the Hermite recurrence: off-diagonal beta_j = sqrt(j/2).
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int j = 1; j < n; ++j) {
        const double beta = std::sqrt(0.5 * j);
        jacobi(j, j - 1) = beta;
        jacobi(j - 1, j) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);

    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mu0 = std::sqrt(std::numbers::pi);
    for (int j = 0; j < n; ++j) {
        rule.nodes[j] = solver.eigenvalues()(j);
        const double v0 = solver.eigenvectors()(0, j);
        rule.weights[j] = mu0 * v0 * v0;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

Complex integrate_gk(const std::function<Complex(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_intervals) {
    struct Interval {
        double a, b;
        GkEstimate est;
    };

    std::vector<Interval> intervals;
    intervals.push_back({a, b, gk15(f, a, b)});

    for (;;) {
        Complex total{0.0, 0.0};
        double total_error = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            total += intervals[i].est.integral;
            total_error += intervals[i].est.error;
            if (intervals[i].est.error > intervals[worst].est.error) worst = i;
        }
        if (total_error <= std::max(abs_tol, rel_tol * std::abs(total))) return total;
        if (static_cast<int>(intervals.size()) >= max_intervals) {
            throw QuadratureFailure("integrate_gk: interval budget exhausted, error estimate " +
                                    std::to_string(total_error));
        }
        const Interval split = intervals[worst];
        const double mid = 0.5 * (split.a + split.b);
        if (!(mid > split.a && mid < split.b)) {
            throw QuadratureFailure("integrate_gk: interval collapsed without convergence");
        }
        intervals[worst] = {split.a, mid, gk15(f, split.a, mid)};
        intervals.push_back({mid, split.b, gk15(f, mid, split.b)});
    }
}

Complex gaussian_average(const std::function<Complex(double)>& f, double mean, double sigma,
                         double rel_tol) {
    if (sigma == 0.0) return f(mean);
    if (!(sigma > 0.0)) throw InvalidParams("gaussian_average: sigma must be >= 0");

    const double scale = std::sqrt(2.0) * sigma;
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    auto gh_average = [&](int order) {
        const GaussHermiteRule& rule = GaussHermiteRule::of_order(order);
        Complex sum{0.0, 0.0};
        for (int j = 0; j < order; ++j) sum += rule.weights[j] * f(mean + scale * rule.nodes[j]);
        return inv_sqrt_pi * sum;
    };

    Complex previous = gh_average(64);
    for (int order : {128, 256, 512}) {
        const Complex current = gh_average(order);
        if (std::abs(current - previous) <= rel_tol * std::abs(current) + 1e-14) return current;
        previous = current;
    }

    // Wide distribution: the integrand structure is narrower than the node
    // spacing, so switch to adaptive integration with the explicit weight.
    const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
    auto weighted = [&](double x) {
        const double u = (x - mean) / sigma;
        return norm * std::exp(-0.5 * u * u) * f(x);
    };
    return integrate_gk(weighted, mean - 10.0 * sigma, mean + 10.0 * sigma, 1e-13, rel_tol, 4000);
}

Complex gaussian_average_2d(const std::function<Complex(double, double)>& f, double mean,
                            double sigma, double rel_tol) {
    if (sigma == 0.0) return f(mean, mean);
    if (!(sigma > 0.0)) throw InvalidParams("gaussian_average_2d: sigma must be >= 0");

    const double scale = std::sqrt(2.0) * sigma;
    const double inv_pi = 1.0 / std::numbers::pi;
    auto gh_average = [&](int order) {
        const GaussHermiteRule& rule = GaussHermiteRule::of_order(order);
        Complex sum{0.0, 0.0};
        for (int j = 0; j < order; ++j) {
            const double x = mean + scale * rule.nodes[j];
            Complex row{0.0, 0.0};
            for (int l = 0; l < order; ++l) {
                row += rule.weights[l] * f(x, mean + scale * rule.nodes[l]);
            }
            sum += rule.weights[j] * row;
        }
        return inv_pi * sum;
    };

    Complex previous = gh_average(64);
    for (int order : {128, 256}) {
        const Complex current = gh_average(order);
        if (std::abs(current - previous) <= rel_tol * std::abs(current) + 1e-14) return current;
        previous = current;
    }

    const double lo = mean - 10.0 * sigma;
    const double hi = mean + 10.0 * sigma;
    const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
    auto weight = [&](double x) {
        const double u = (x - mean) / sigma;
        return norm * std::exp(-0.5 * u * u);
    };
    auto outer = [&](double x1) {
        auto inner = [&](double x2) { return weight(x2) * f(x1, x2); };
        return weight(x1) * integrate_gk(inner, lo, hi, 1e-13, 0.1 * rel_tol, 4000);
    };
    return integrate_gk(outer, lo, hi, 1e-13, rel_tol, 4000);
}

}  // namespace corr1d
