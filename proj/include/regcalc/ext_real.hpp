#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>

#include "regcalc/errors.hpp"

namespace regcalc {

// Extended real number: a finite double or one of the two infinities.
// NaN is never representable; constructing from NaN throws. Arithmetic that
// would produce an indeterminate form (inf - inf, 0 * inf, inf / inf, x / 0)
// throws ExtRealError instead of silently yielding NaN.
class ExtReal {
public:
    ExtReal() : v_(0.0) {}

    ExtReal(double v) : v_(v) {
        if (std::isnan(v)) throw ExtRealError("NaN is not an extended real");
    }

    static ExtReal pos_inf() { return ExtReal(std::numeric_limits<double>::infinity(), tag{}); }
    static ExtReal neg_inf() { return ExtReal(-std::numeric_limits<double>::infinity(), tag{}); }

    bool is_finite() const { return std::isfinite(v_); }
    bool is_pos_inf() const { return std::isinf(v_) && v_ > 0; }
    bool is_neg_inf() const { return std::isinf(v_) && v_ < 0; }

    // Raw value; +-inf comes back as the IEEE infinity.
    double raw() const { return v_; }

    // Value with finiteness enforced.
    double finite() const {
        if (!is_finite()) throw ExtRealError("expected a finite value, got " + str());
        return v_;
    }

    int sign() const { return v_ > 0 ? 1 : v_ < 0 ? -1 : 0; }

    friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
    friend bool operator!=(ExtReal a, ExtReal b) { return a.v_ != b.v_; }
    friend bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
    friend bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
    friend bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
    friend bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }

    friend ExtReal operator-(ExtReal a) { return ExtReal(-a.v_, tag{}); }

    friend ExtReal operator+(ExtReal a, ExtReal b) {
        if (a.is_finite() || b.is_finite() || a.sign() == b.sign())
            return checked(a.v_ + b.v_, "+", a, b);
        throw ExtRealError("indeterminate sum " + a.str() + " + " + b.str());
    }

    friend ExtReal operator-(ExtReal a, ExtReal b) { return a + (-b); }

    friend ExtReal operator*(ExtReal a, ExtReal b) {
        if ((a.v_ == 0 && !b.is_finite()) || (b.v_ == 0 && !a.is_finite()))
            throw ExtRealError("indeterminate product " + a.str() + " * " + b.str());
        return checked(a.v_ * b.v_, "*", a, b);
    }

    friend ExtReal operator/(ExtReal a, ExtReal b) {
        if (!a.is_finite() && !b.is_finite())
            throw ExtRealError("indeterminate quotient " + a.str() + " / " + b.str());
        if (b.v_ == 0)
            throw ExtRealError("division by zero: " + a.str() + " / 0");
        return checked(a.v_ / b.v_, "/", a, b);
    }

    std::string str() const {
        if (is_pos_inf()) return "+inf";
        if (is_neg_inf()) return "-inf";
        char buf[32];
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v_);
        return std::string(buf, p);
    }

private:
    struct tag {};
    ExtReal(double v, tag) : v_(v) {}

    static ExtReal checked(double v, const char* op, ExtReal a, ExtReal b) {
        if (std::isnan(v))
            throw ExtRealError(std::string("indeterminate '") + op + "' on " + a.str() +
                               ", " + b.str());
        return ExtReal(v, tag{});
    }

    double v_;
};

// Shortest round-trip decimal form of a finite double.
inline std::string double_str(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

// Parses "+inf" / "-inf" / "inf" / a decimal literal. Returns false on junk.
inline bool parse_ext_real(std::string_view s, ExtReal& out) {
    if (s == "inf" || s == "+inf") { out = ExtReal::pos_inf(); return true; }
    if (s == "-inf") { out = ExtReal::neg_inf(); return true; }
    double v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last || std::isnan(v)) return false;
    out = ExtReal(v);
    return true;
}

}  // namespace regcalc
