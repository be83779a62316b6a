#pragma once

#include <Eigen/Core>

namespace fowthil {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

// Generalized force on the [surge, pitch] coordinates.
struct GenForce {
    double fx{0.0};  // N
    double my{0.0};  // N m

    static GenForce from(const Vec2& v) { return {v(0), v(1)}; }
    Vec2 vec() const { return {fx, my}; }

    GenForce& operator+=(const GenForce& o) {
        fx += o.fx;
        my += o.my;
        return *this;
    }
    friend GenForce operator+(GenForce a, const GenForce& b) { return a += b; }
    friend GenForce operator-(const GenForce& a, const GenForce& b) { return {a.fx - b.fx, a.my - b.my}; }
    friend bool operator==(const GenForce&, const GenForce&) = default;
};

inline constexpr double kGravity = 9.81;

}  // namespace fowthil
