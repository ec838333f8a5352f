#pragma once

#include <compare>
#include <limits>

namespace relregion {

/// Nonnegative path cost with an explicit +inf sentinel.
/// Addition saturates at infinity, so comparisons against an unsolved
/// incumbent (c_cur = +inf) are always well-defined.
class Cost {
public:
    constexpr Cost() = default;
    constexpr explicit Cost(double v) : value_(v) {}

    static constexpr Cost infinity() {
        return Cost(std::numeric_limits<double>::infinity());
    }
    static constexpr Cost zero() { return Cost(0.0); }

    [[nodiscard]] constexpr double value() const { return value_; }
    [[nodiscard]] constexpr bool is_finite() const {
        return value_ < std::numeric_limits<double>::infinity();
    }

    constexpr Cost operator+(Cost o) const { return Cost(value_ + o.value_); }
    Cost& operator+=(Cost o) {
        value_ += o.value_;
        return *this;
    }

    constexpr auto operator<=>(const Cost&) const = default;

private:
    double value_ = 0.0;
};

}  // namespace relregion
