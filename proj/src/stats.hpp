#pragma once

#include <cmath>
#include <cstddef>

#include "core.hpp"

namespace corr1d {

// Streaming mean and standard error of the mean (Welford's update, which
// keeps the variance meaningful even when the spread is tiny next to the
// mean).
class MeanAccumulator {
public:
    void add(double x) {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }

    double variance() const {
        if (n_ < 2) return 0.0;
        const double var = m2_ / static_cast<double>(n_ - 1);
        return var > 0.0 ? var : 0.0;
    }

    double stderr_mean() const {
        return n_ ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

class ComplexMeanAccumulator {
public:
    void add(Complex z) {
        re_.add(z.real());
        im_.add(z.imag());
    }

    std::size_t count() const { return re_.count(); }
    Complex mean() const { return {re_.mean(), im_.mean()}; }

    // Combined standard error sqrt(se_re^2 + se_im^2).
    double stderr_mean() const {
        const double sr = re_.stderr_mean();
        const double si = im_.stderr_mean();
        return std::sqrt(sr * sr + si * si);
    }

private:
    MeanAccumulator re_;
    MeanAccumulator im_;
};

}  // namespace corr1d
