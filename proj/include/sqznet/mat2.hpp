#pragma once

#include <complex>

namespace sqznet {

using cplx = std::complex<double>;

// 2x2 complex matrix acting on one noise source's (amplitude, phase)
// quadrature pair. Row 0 is the amplitude-quadrature response of the field,
// row 1 the phase-quadrature response.
struct Mat2 {
    cplx a{}, b{}; // row 0
    cplx c{}, d{}; // row 1

    static Mat2 zero() { return {}; }
    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diagonal(cplx plus, cplx minus) { return {plus, 0.0, 0.0, minus}; }

    // Quadrature rotation [[cos, -sin], [sin, cos]].
    static Mat2 rotation(double theta) {
        const double ct = std::cos(theta), st = std::sin(theta);
        return {ct, -st, st, ct};
    }

    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }

    friend Mat2 operator*(cplx s, const Mat2& m) {
        return {s * m.a, s * m.b, s * m.c, s * m.d};
    }

    double frobenius_sq() const {
        return std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
    }
};

} // namespace sqznet
