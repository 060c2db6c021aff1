#pragma once

#include <cmath>
#include <cstdint>

#include "resgas/errors.hpp"

namespace resgas {

// Exponential interpolation initial*(final/initial)^(t/T) over T iterations.
// A constant schedule (initial == final) may sit at any value >= 0, which
// covers the lambda == 0 regime; non-constant endpoints must be positive.
class Schedule {
public:
    Schedule(double initial, double final_value, std::int64_t total_iters);

    double value(std::int64_t t) const;

    double initial() const { return initial_; }
    double final_value() const { return final_; }
    std::int64_t total_iters() const { return total_iters_; }

    static Schedule constant(double v, std::int64_t total_iters) {
        return Schedule(v, v, total_iters);
    }

private:
    double initial_;
    double final_;
    std::int64_t total_iters_;
};

inline Schedule::Schedule(double initial, double final_value, std::int64_t total_iters)
    : initial_(initial), final_(final_value), total_iters_(total_iters) {
    if (total_iters < 0) throw DataError("Schedule: total_iters must be >= 0");
    if (initial == final_value) {
        if (initial < 0.0) throw DataError("Schedule: constant value must be >= 0");
    } else if (initial <= 0.0 || final_value <= 0.0) {
        throw DataError("Schedule: initial and final must be > 0");
    }
}

inline double Schedule::value(std::int64_t t) const {
    if (t < 0 || t > total_iters_) throw DataError("Schedule: t outside [0, T]");
    if (t == 0 || initial_ == final_) return initial_;
    if (t == total_iters_) return final_;
    const double frac = static_cast<double>(t) / static_cast<double>(total_iters_);
    return initial_ * std::pow(final_ / initial_, frac);
}

}  // namespace resgas
