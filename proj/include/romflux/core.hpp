#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace romflux {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

/// Validation failure on user-supplied input (config values, shapes).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical failure at run time (solver divergence, NaN in a field).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

}  // namespace romflux
