#include "flowcap/traffic_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flowcap/errors.hpp"

namespace flowcap {

FlowRecord FlowRecord::make(double arrival_time, double size, double duration,
                            RateProfile profile) {
    if (!(std::isfinite(arrival_time) && arrival_time >= 0.0))
        throw InvalidParameters("flow arrival_time must be >= 0");
    if (!(std::isfinite(size) && size > 0.0))
        throw InvalidParameters("flow size must be > 0");
    if (!(std::isfinite(duration) && duration > 0.0))
        throw InvalidParameters("flow duration must be > 0");
    return FlowRecord{arrival_time, size, duration, profile};
}

double FlowRecord::bits_between(double from, double to) const noexcept {
    const double lo = std::max(from, arrival_time);
    const double hi = std::min(to, end_time());
    if (hi <= lo)
        return 0.0;
    if (lo == arrival_time && hi == end_time())
        return size;
    return size * ((hi - lo) / duration);
}

void TrafficModel::validate() const {
    if (!(std::isfinite(lambda) && lambda >= 0.0))
        throw InvalidParameters("lambda must be a finite value >= 0, got " + std::to_string(lambda));
}

double mean_rate(const TrafficModel& model) {
    model.validate();
    if (model.lambda == 0.0)
        return 0.0;
    return model.lambda * model.size_dist.raw_moment(1.0);
}

double rate_variance(const TrafficModel& model) {
    model.validate();
    if (model.lambda == 0.0)
        return 0.0;
    const double size_second = model.size_dist.raw_moment(2.0);
    const double inverse_duration = model.duration_dist.raw_moment(-1.0);
    return model.lambda * size_second * inverse_duration;
}

double mean_active_flows(const TrafficModel& model) {
    model.validate();
    if (model.lambda == 0.0)
        return 0.0;
    return model.lambda * model.duration_dist.raw_moment(1.0);
}

TheoreticalMoments theoretical_moments(const TrafficModel& model) {
    return {mean_rate(model), rate_variance(model), mean_active_flows(model)};
}

} // namespace flowcap
