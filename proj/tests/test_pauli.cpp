#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hybridspin/errors.hpp"
#include "hybridspin/pauli.hpp"

using namespace hybridspin;

TEST_CASE("compose/decompose round trip") {
    const HermitianOp2 A = pauli_compose(0.7, {0.1, -2.0, 3.5});
    const auto [a0, a] = pauli_decompose(A);
    CHECK(a0 == 0.7);
    CHECK(a.x == 0.1);
    CHECK(a.y == -2.0);
    CHECK(a.z == 3.5);

    // basis element and identity
    const HermitianOp2 sx = pauli_compose(0.0, {1, 0, 0});
    CHECK(sx.a0 == 0.0);
    CHECK(sx.a.x == 1.0);
    const auto [i0, iv] = pauli_decompose(kIdentityOp);
    CHECK(i0 == 1.0);
    CHECK(norm(iv) == 0.0);
}

TEST_CASE("eigenvalues a0 +/- |a|") {
    // compose(2,(0,0,3)) has eigenvalues {5, -1}; cross-checked against the
    // characteristic polynomial of the dense matrix
    const HermitianOp2 A = pauli_compose(2.0, {0, 0, 3});
    const auto [lp, lm] = hermitian_eigenvalues(A);
    CHECK(lp == doctest::Approx(5.0));
    CHECK(lm == doctest::Approx(-1.0));
    const ComplexOp2 d = ComplexOp2::from(A);
    const double tr = std::real(d.m[0][0] + d.m[1][1]);
    const double det = std::real(d.m[0][0] * d.m[1][1] - d.m[0][1] * d.m[1][0]);
    CHECK(lp * lp - tr * lp + det == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(lm * lm - tr * lm + det == doctest::Approx(0.0).epsilon(1e-14));

    CHECK(hermitian_eigenvalues(kSigmaZ).first == 1.0);
    CHECK(hermitian_eigenvalues(kSigmaZ).second == -1.0);
    CHECK(hermitian_eigenvalues(kIdentityOp).first == 1.0);
    CHECK(hermitian_eigenvalues(kIdentityOp).second == 1.0);
}

TEST_CASE("commutator in Pauli coordinates") {
    // i[sx, sy] = -2 sz
    const HermitianOp2 c = commutator_i(kSigmaX, kSigmaY);
    CHECK(c.a0 == 0.0);
    CHECK(c.a.x == 0.0);
    CHECK(c.a.y == 0.0);
    CHECK(c.a.z == -2.0);
    // self-commutator and identity
    const HermitianOp2 A = pauli_compose(0.3, {1.0, 2.0, -0.5});
    const HermitianOp2 z1 = commutator_i(A, A);
    CHECK(norm(z1.a) == 0.0);
    const HermitianOp2 z2 = commutator_i(kIdentityOp, A);
    CHECK(norm(z2.a) == 0.0);
    // antisymmetry and tracelessness
    const HermitianOp2 B = pauli_compose(-1.0, {0.2, 0.4, 0.8});
    const HermitianOp2 ab = commutator_i(A, B), ba = commutator_i(B, A);
    CHECK(op_trace(ab) == 0.0);
    CHECK(norm(ab.a + ba.a) == 0.0);
}

TEST_CASE("commutator law vs dense matrix arithmetic on random pairs") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const complexd i{0.0, 1.0};
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const HermitianOp2 A = pauli_compose(u(rng), {u(rng), u(rng), u(rng)});
        const HermitianOp2 B = pauli_compose(u(rng), {u(rng), u(rng), u(rng)});
        const HermitianOp2 fast = commutator_i(A, B);
        const ComplexOp2 da = ComplexOp2::from(A), db = ComplexOp2::from(B);
        const ComplexOp2 comm = (da * db - db * da) * i;
        const HermitianOp2 dense = to_hermitian(comm);
        double scale = std::max(1.0, norm(fast.a));
        worst = std::max(worst, std::abs(fast.a0 - dense.a0) / scale);
        worst = std::max(worst, norm(fast.a - dense.a) / scale);
    }
    CHECK(worst <= 1e-14);
}

TEST_CASE("expectation and projector") {
    const Spinor2 up{1.0, 0.0};
    CHECK(expectation(up, kSigmaZ) == doctest::Approx(1.0));
    const Spinor2 plus{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    CHECK(expectation(plus, kSigmaX) == doctest::Approx(1.0));
    CHECK(expectation(plus, kIdentityOp) == doctest::Approx(1.0));

    // projector((1,0)) = (1 + sz)/2
    const HermitianOp2 p = projector(up);
    CHECK(p.a0 == doctest::Approx(0.5));
    CHECK(p.a.z == doctest::Approx(0.5));
    CHECK(p.a.x == doctest::Approx(0.0));
    CHECK(op_trace(p) == doctest::Approx(norm2(up)));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const Spinor2 psi{complexd{u(rng), u(rng)}, complexd{u(rng), u(rng)}};
        const auto [lp, lm] = hermitian_eigenvalues(projector(psi));
        CHECK(lp == doctest::Approx(norm2(psi)).epsilon(1e-14));
        CHECK(lm == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(expectation(psi, kIdentityOp) == doctest::Approx(norm2(psi)).epsilon(1e-14));
    }
}

TEST_CASE("dense conversion enforces hermiticity") {
    ComplexOp2 bad;
    bad.m[0][1] = {0.5, 0.0};
    bad.m[1][0] = {0.4, 0.0};
    CHECK_THROWS_AS(to_hermitian(bad), ContractViolation);
}

TEST_CASE("spin-space conjugation is an SO(3) rotation of the Pauli vector") {
    const Mat3 r = rotation_about({1, 0, 0}, M_PI / 3.0);
    const HermitianOp2 A = pauli_compose(0.2, {0, 1, 0});
    const HermitianOp2 B = conjugate(A, r);
    CHECK(B.a0 == 0.2);
    CHECK(norm(B.a) == doctest::Approx(1.0));
    // rotating sigma_y by pi/2 about x gives sigma_z
    const Mat3 q = rotation_about({1, 0, 0}, M_PI / 2.0);
    const HermitianOp2 C = conjugate(kSigmaY, q);
    CHECK(C.a.z == doctest::Approx(1.0));
    CHECK(std::abs(C.a.y) < 1e-15);
}
