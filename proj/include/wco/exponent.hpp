#pragma once

#include <cmath>
#include <string>

#include "wco/errors.hpp"

namespace wco {

/// An exponent p with 1 <= p <= infinity.  Infinity is a distinguished
/// state, never a floating-point infinity fed into arithmetic.
class Exponent {
public:
    static Exponent finite(double v) {
        if (!(v >= 1.0) || !std::isfinite(v))
            throw ValidationError("exponent must satisfy 1 <= p < inf, got " +
                                  std::to_string(v));
        Exponent e;
        e.value_ = v;
        return e;
    }

    static Exponent infinity() {
        Exponent e;
        e.infinite_ = true;
        return e;
    }

    bool is_infinite() const { return infinite_; }

    /// Finite value; throws if infinite.
    double value() const {
        if (infinite_)
            throw ValidationError("finite exponent required");
        return value_;
    }

    bool operator==(const Exponent& o) const {
        return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
    }
    bool operator!=(const Exponent& o) const { return !(*this == o); }

    std::string str() const {
        if (infinite_) return "inf";
        // integral exponents print without a trailing ".000000"
        if (value_ == static_cast<double>(static_cast<long long>(value_)))
            return std::to_string(static_cast<long long>(value_));
        return std::to_string(value_);
    }

private:
    Exponent() = default;
    double value_ = 1.0;
    bool infinite_ = false;
};

} // namespace wco
