#pragma once

#include <array>
#include <complex>
#include <utility>

#include "hybridspin/vec3.hpp"

namespace hybridspin {

using complexd = std::complex<double>;

// 2x2 Hermitian operator stored in Pauli coordinates: A = a0*I + a.sigma.
// Hermiticity is structural; trace = 2*a0; eigenvalues = a0 +/- |a|.
struct HermitianOp2 {
    double a0 = 0.0;
    Vec3 a;

    constexpr HermitianOp2() = default;
    constexpr HermitianOp2(double s, const Vec3& v) : a0(s), a(v) {}

    HermitianOp2 operator+(const HermitianOp2& o) const { return {a0 + o.a0, a + o.a}; }
    HermitianOp2 operator-(const HermitianOp2& o) const { return {a0 - o.a0, a - o.a}; }
    HermitianOp2 operator*(double s) const { return {a0 * s, a * s}; }
    HermitianOp2& operator+=(const HermitianOp2& o) { a0 += o.a0; a += o.a; return *this; }
};

inline HermitianOp2 operator*(double s, const HermitianOp2& A) { return A * s; }

inline HermitianOp2 pauli_compose(double a0, const Vec3& a) { return {a0, a}; }
inline std::pair<double, Vec3> pauli_decompose(const HermitianOp2& A) { return {A.a0, A.a}; }

inline const HermitianOp2 kIdentityOp{1.0, {0, 0, 0}};
inline const HermitianOp2 kSigmaX{0.0, {1, 0, 0}};
inline const HermitianOp2 kSigmaY{0.0, {0, 1, 0}};
inline const HermitianOp2 kSigmaZ{0.0, {0, 0, 1}};

inline double op_trace(const HermitianOp2& A) { return 2.0 * A.a0; }

// i[A,B] is Hermitian for Hermitian A, B: scalar part 0, vector part -2 (a x b).
inline HermitianOp2 commutator_i(const HermitianOp2& A, const HermitianOp2& B) {
    return {0.0, -2.0 * cross(A.a, B.a)};
}

// Tr(A B) = 2 (a0 b0 + a.b)
inline double trace_product(const HermitianOp2& A, const HermitianOp2& B) {
    return 2.0 * (A.a0 * B.a0 + dot(A.a, B.a));
}

// eigenvalues a0 +/- |a|, descending
inline std::pair<double, double> hermitian_eigenvalues(const HermitianOp2& A) {
    const double r = norm(A.a);
    return {A.a0 + r, A.a0 - r};
}

// conjugation U A U^dag for a spin-space rotation given by its SO(3) matrix
inline HermitianOp2 conjugate(const HermitianOp2& A, const Mat3& rot) {
    return {A.a0, rot.apply(A.a)};
}

struct Spinor2 {
    complexd c0{0.0, 0.0}, c1{0.0, 0.0};

    Spinor2() = default;
    Spinor2(complexd a, complexd b) : c0(a), c1(b) {}

    Spinor2 operator+(const Spinor2& o) const { return {c0 + o.c0, c1 + o.c1}; }
    Spinor2 operator-(const Spinor2& o) const { return {c0 - o.c0, c1 - o.c1}; }
    Spinor2 operator*(complexd s) const { return {c0 * s, c1 * s}; }
    Spinor2 operator*(double s) const { return {c0 * s, c1 * s}; }
    Spinor2& operator+=(const Spinor2& o) { c0 += o.c0; c1 += o.c1; return *this; }
};

inline Spinor2 operator*(double s, const Spinor2& p) { return p * s; }
inline Spinor2 operator*(complexd s, const Spinor2& p) { return p * s; }

inline double norm2(const Spinor2& p) { return std::norm(p.c0) + std::norm(p.c1); }

inline complexd inner(const Spinor2& a, const Spinor2& b) {
    return std::conj(a.c0) * b.c0 + std::conj(a.c1) * b.c1;
}

// (a0 I + a.sigma) psi
inline Spinor2 apply(const HermitianOp2& A, const Spinor2& p) {
    const complexd i{0.0, 1.0};
    return {(A.a0 + A.a.z) * p.c0 + (A.a.x - i * A.a.y) * p.c1,
            (A.a.x + i * A.a.y) * p.c0 + (A.a0 - A.a.z) * p.c1};
}

inline double expectation(const Spinor2& p, const HermitianOp2& A) {
    return std::real(inner(p, apply(A, p)));
}

// psi psi^dag = (|psi|^2 I + s.sigma)/2 with s the Bloch vector of psi
inline HermitianOp2 projector(const Spinor2& p) {
    const double sx = 2.0 * std::real(std::conj(p.c0) * p.c1);
    const double sy = 2.0 * std::imag(std::conj(p.c0) * p.c1);
    const double sz = std::norm(p.c0) - std::norm(p.c1);
    return {0.5 * norm2(p), {0.5 * sx, 0.5 * sy, 0.5 * sz}};
}

inline Vec3 bloch_vector(const Spinor2& p) {
    return {2.0 * std::real(std::conj(p.c0) * p.c1),
            2.0 * std::imag(std::conj(p.c0) * p.c1),
            std::norm(p.c0) - std::norm(p.c1)};
}

// dense 2x2 complex matrix, used as a validation intermediate only
struct ComplexOp2 {
    // row-major entries m[row][col]
    complexd m[2][2] = {{{0, 0}, {0, 0}}, {{0, 0}, {0, 0}}};

    static ComplexOp2 from(const HermitianOp2& A) {
        const complexd i{0.0, 1.0};
        ComplexOp2 d;
        d.m[0][0] = A.a0 + A.a.z;
        d.m[0][1] = A.a.x - i * A.a.y;
        d.m[1][0] = A.a.x + i * A.a.y;
        d.m[1][1] = A.a0 - A.a.z;
        return d;
    }

    ComplexOp2 operator*(const ComplexOp2& o) const {
        ComplexOp2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
        return r;
    }

    ComplexOp2 operator-(const ComplexOp2& o) const {
        ComplexOp2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
        return r;
    }

    ComplexOp2 operator*(complexd s) const {
        ComplexOp2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] * s;
        return r;
    }
};

// Conversion back to Pauli coordinates; throws if not Hermitian within tau_herm.
// tau_herm is absolute on the max entry deviation: a failure here is an algebra bug.
HermitianOp2 to_hermitian(const ComplexOp2& A, double tau_herm = 1e-12);

}  // namespace hybridspin
