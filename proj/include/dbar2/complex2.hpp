#pragma once
// Points of C^2 and small helpers shared by every module.
#include <complex>
#include <cmath>

namespace dbar2 {

using C = std::complex<double>;

struct ComplexPoint {
    C z1{0.0, 0.0};
    C z2{0.0, 0.0};
};

inline ComplexPoint operator+(const ComplexPoint& a, const ComplexPoint& b) {
    return {a.z1 + b.z1, a.z2 + b.z2};
}
inline ComplexPoint operator-(const ComplexPoint& a, const ComplexPoint& b) {
    return {a.z1 - b.z1, a.z2 - b.z2};
}
inline ComplexPoint operator*(double s, const ComplexPoint& a) {
    return {s * a.z1, s * a.z2};
}

// |z|^2 in the R^4 metric; exact, no sqrt.
inline double abs2(const ComplexPoint& z) {
    return std::norm(z.z1) + std::norm(z.z2);
}
inline double dist(const ComplexPoint& a, const ComplexPoint& b) {
    return std::sqrt(abs2(a - b));
}

inline bool finite(const ComplexPoint& z) {
    return std::isfinite(z.z1.real()) && std::isfinite(z.z1.imag()) &&
           std::isfinite(z.z2.real()) && std::isfinite(z.z2.imag());
}

constexpr double PI = 3.141592653589793238462643383279502884;

} // namespace dbar2
