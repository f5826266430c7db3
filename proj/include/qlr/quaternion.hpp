#pragma once

#include <cmath>
#include <ostream>

#include "qlr/errors.hpp"

namespace qlr {

/// A real quaternion q = r + i·i + j·j + k·k with Hamilton multiplication
/// (i² = j² = k² = ijk = -1). Non-commutative: p*q != q*p in general.
struct Quaternion {
    double r = 0.0;
    double i = 0.0;
    double j = 0.0;
    double k = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double r_, double i_, double j_, double k_) : r{r_}, i{i_}, j{j_}, k{k_} {}
    constexpr explicit Quaternion(double real) : r{real} {}

    /// Checked construction; rejects NaN and infinite components.
    static Quaternion checked(double r_, double i_, double j_, double k_) {
        if (!std::isfinite(r_) || !std::isfinite(i_) || !std::isfinite(j_) || !std::isfinite(k_)) {
            throw ValidationError("quaternion components must be finite");
        }
        return {r_, i_, j_, k_};
    }

    constexpr bool operator==(const Quaternion&) const = default;

    constexpr Quaternion operator-() const { return {-r, -i, -j, -k}; }
    constexpr Quaternion& operator+=(const Quaternion& o) {
        r += o.r; i += o.i; j += o.j; k += o.k;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        r -= o.r; i -= o.i; j -= o.j; k -= o.k;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        r *= s; i *= s; j *= s; k *= s;
        return *this;
    }

    constexpr bool is_pure() const { return r == 0.0; }
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }

/// Hamilton product.
constexpr Quaternion hamilton_mul(const Quaternion& p, const Quaternion& q) {
    return {
        p.r * q.r - p.i * q.i - p.j * q.j - p.k * q.k,
        p.r * q.i + p.i * q.r + p.j * q.k - p.k * q.j,
        p.r * q.j - p.i * q.k + p.j * q.r + p.k * q.i,
        p.r * q.k + p.i * q.j - p.j * q.i + p.k * q.r,
    };
}

constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) { return hamilton_mul(p, q); }

constexpr Quaternion conj(const Quaternion& q) { return {q.r, -q.i, -q.j, -q.k}; }

constexpr double norm_sq(const Quaternion& q) { return q.r * q.r + q.i * q.i + q.j * q.j + q.k * q.k; }

inline double modulus(const Quaternion& q) { return std::sqrt(norm_sq(q)); }

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << q.r << (q.i < 0 ? " - " : " + ") << std::abs(q.i) << "i"
              << (q.j < 0 ? " - " : " + ") << std::abs(q.j) << "j"
              << (q.k < 0 ? " - " : " + ") << std::abs(q.k) << "k";
}

}  // namespace qlr
