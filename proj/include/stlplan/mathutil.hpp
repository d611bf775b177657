#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace stlplan {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * kPi);
    if (r <= -kPi) {
        r += 2.0 * kPi;
    }
    return r;
}

// max(x, 0)
inline double hinge(double x) {
    return x > 0.0 ? x : 0.0;
}

// Overflow-safe log(1 + e^x).
inline double softplus(double x) {
    if (x > 0.0) {
        return x + std::log1p(std::exp(-x));
    }
    return std::log1p(std::exp(x));
}

// Formats a double with enough digits to round-trip exactly. Used for all
// file output so identical runs produce identical bytes.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

}  // namespace stlplan
