#pragma once

#include <vector>

namespace gaspower {

// Piecewise-linear function of time with constant extrapolation beyond the
// first and last breakpoints.
class TimeSeries {
public:
    TimeSeries() = default;
    TimeSeries(std::vector<double> times, std::vector<double> values);

    static TimeSeries constant(double value);
    // value0 up to t0, linear to value1 at t1, value1 afterwards.
    static TimeSeries ramp(double t0, double value0, double t1, double value1);

    double operator()(double t) const;
    bool empty() const noexcept { return times_.empty(); }
    bool is_constant() const noexcept;

    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<double>& values() const noexcept { return values_; }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

}  // namespace gaspower
