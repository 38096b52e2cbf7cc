#pragma once

#include <cmath>
#include <cstddef>

namespace smellprop {

// Welford accumulator. Constant input yields that constant as the mean and
// zero variance exactly, with no rounding from a running sum.
class RunningMoments {
public:
    void add(double x) noexcept {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    std::size_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    // Divides by n.
    double population_variance() const noexcept {
        return n_ == 0 ? 0.0 : (m2_ > 0.0 ? m2_ / static_cast<double>(n_) : 0.0);
    }
    double population_stddev() const noexcept { return std::sqrt(population_variance()); }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace smellprop
