#pragma once

#include <cmath>
#include <limits>

namespace geocanvas {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kE = 2.718281828459045235360287471352662498;

/// A double that carries an explicit "undefined" state. Non-finite inputs
/// are folded into undefined so NaN never crosses an operation boundary.
class Scalar {
public:
    Scalar() : value_(0.0), defined_(false) {}
    Scalar(double v) : value_(v), defined_(std::isfinite(v)) {}

    static Scalar undefined() { return Scalar(); }

    bool is_defined() const { return defined_; }
    double value() const { return value_; }

    /// Value if defined, NaN otherwise (callers that want a sentinel).
    double value_or_nan() const {
        return defined_ ? value_ : std::numeric_limits<double>::quiet_NaN();
    }

private:
    double value_;
    bool defined_;
};

/// Two-sided tolerance: |a-b| <= abs_tol OR |a-b| <= rel_tol * max(|a|,|b|).
struct TolerancePolicy {
    double abs_tol = 4e-7;
    double rel_tol = 1e-3;

    bool pass(double a, double b) const {
        if (!std::isfinite(a) || !std::isfinite(b)) return false;
        const double diff = std::fabs(a - b);
        return diff <= abs_tol || diff <= rel_tol * std::fmax(std::fabs(a), std::fabs(b));
    }

    bool pass(const Scalar& a, const Scalar& b) const {
        if (!a.is_defined() || !b.is_defined()) return false;
        return pass(a.value(), b.value());
    }

    /// Residual-against-zero form used by geometric predicates, where the
    /// caller supplies the natural scale of the quantity.
    bool residual_pass(double residual, double scale) const {
        if (!std::isfinite(residual)) return false;
        residual = std::fabs(residual);
        return residual <= abs_tol || residual <= rel_tol * std::fabs(scale);
    }
};

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Normalize an angle in radians to [0, 2*pi).
inline double wrap_angle_2pi(double rad) {
    double a = std::fmod(rad, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    if (a >= 2.0 * kPi) a = 0.0;
    return a;
}

}  // namespace geocanvas
