#pragma once

#include <vector>

namespace pmuobs {

// Piecewise-constant time signal sampled left-continuously: the value listed
// at a knot takes effect strictly after the knot time, so f(t_k) still reads
// the preceding segment. A single knot at t = 0 is a plain constant.
class PiecewiseConstant {
public:
    PiecewiseConstant() = default;
    explicit PiecewiseConstant(double constant) : times_{0.0}, values_{constant} {}
    PiecewiseConstant(std::vector<double> times, std::vector<double> values)
        : times_(std::move(times)), values_(std::move(values)) {}

    double operator()(double t) const {
        std::size_t k = 0;
        while (k + 1 < times_.size() && times_[k + 1] < t) ++k;
        return values_[k];
    }

    bool empty() const { return values_.empty(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

}  // namespace pmuobs
