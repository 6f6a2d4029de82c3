#include "gaspower/time_series.hpp"

#include "gaspower/error.hpp"

#include <algorithm>
#include <cmath>

namespace gaspower {

TimeSeries::TimeSeries(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size()) throw Error(ErrorCategory::domain, "time series needs one value per time");
    if (times_.empty()) throw Error(ErrorCategory::domain, "time series needs at least one breakpoint");
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!std::isfinite(times_[i]) || !std::isfinite(values_[i])) {
            throw Error(ErrorCategory::domain, "time series entries must be finite");
        }
        if (i > 0 && !(times_[i] > times_[i - 1])) {
            throw Error(ErrorCategory::domain, "time series breakpoints must be strictly increasing");
        }
    }
}

TimeSeries TimeSeries::constant(double value) { return TimeSeries({0.0}, {value}); }

TimeSeries TimeSeries::ramp(double t0, double value0, double t1, double value1) {
    return TimeSeries({t0, t1}, {value0, value1});
}

double TimeSeries::operator()(double t) const {
    if (times_.empty()) return 0.0;
    if (t <= times_.front()) return values_.front();
    if (t >= times_.back()) return values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times_.begin());
    const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
    return values_[i - 1] + w * (values_[i] - values_[i - 1]);
}

bool TimeSeries::is_constant() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_.front(); });
}

}  // namespace gaspower
