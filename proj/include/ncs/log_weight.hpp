#pragma once

#include <cmath>
#include <limits>

namespace ncs {

// sign * exp(log_mag). sign == 0 encodes an exact zero.
struct LogWeight {
    int sign = 1;
    double log_mag = 0.0;

    static LogWeight one() { return {1, 0.0}; }
    static LogWeight zero() { return {0, -std::numeric_limits<double>::infinity()}; }

    static LogWeight from_value(double v) {
        if (v == 0.0) return zero();
        return {v > 0 ? 1 : -1, std::log(std::fabs(v))};
    }

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }
    bool finite_as_double() const { return sign == 0 || log_mag < 709.78; }

    LogWeight& operator*=(const LogWeight& o) {
        sign *= o.sign;
        log_mag = sign == 0 ? -std::numeric_limits<double>::infinity() : log_mag + o.log_mag;
        return *this;
    }
    LogWeight& operator/=(const LogWeight& o) {
        sign *= o.sign;  // division by zero is the caller's problem
        log_mag -= o.log_mag;
        return *this;
    }
    friend LogWeight operator*(LogWeight a, const LogWeight& b) { return a *= b; }
    friend LogWeight operator/(LogWeight a, const LogWeight& b) { return a /= b; }

    LogWeight inverse() const { return {sign, -log_mag}; }
    LogWeight squared() const { return {sign == 0 ? 0 : 1, 2.0 * log_mag}; }
};

}  // namespace ncs
