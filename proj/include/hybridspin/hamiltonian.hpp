#pragma once

#include <array>
#include <string>

#include "hybridspin/grid.hpp"
#include "hybridspin/pauli.hpp"
#include "hybridspin/vec3.hpp"

namespace hybridspin {

// Polynomial in the ambient coordinates up to degree 2:
// p(n) = c0 + lin.n + n^T quad n, with quad symmetric.
// The ambient gradient and the radial action n.grad(p) are exact.
struct PolyComponent {
    double c0 = 0.0;
    Vec3 lin;
    Mat3 quad;

    bool is_zero() const;
    bool is_constant() const;

    double eval(const Vec3& n) const {
        return c0 + dot(lin, n) + dot(n, quad.apply(n));
    }
    Vec3 grad(const Vec3& n) const { return lin + 2.0 * quad.apply(n); }
    // Euler identity: n.grad p = 0*c0 + 1*(lin.n) + 2*(n^T quad n)
    double radial_action(const Vec3& n) const {
        return dot(lin, n) + 2.0 * dot(n, quad.apply(n));
    }
    // n.grad p - p; vanishes structurally for purely linear components
    double phase_term(const Vec3& n) const { return dot(n, quad.apply(n)) - c0; }
    bool phase_term_is_zero() const;
};

// Operator-valued Hamiltonian H(n) = h[0](n) I + sum_a h[a](n) sigma_a.
class HybridHamiltonian {
  public:
    HybridHamiltonian() = default;
    HybridHamiltonian(std::string name, std::array<PolyComponent, 4> comps)
        : name_(std::move(name)), h_(comps) {}

    // --- built-in families ---
    static HybridHamiltonian zeeman(const Vec3& B);
    static HybridHamiltonian quantum_larmor(const Vec3& omega);
    static HybridHamiltonian anisotropy(const Mat3& A);
    // H0 given as a polynomial scalar part; interaction alpha*(axis.n) on sigma_x plus gamma sigma_z
    static HybridHamiltonian coupled(const PolyComponent& h0, double alpha, const Vec3& axis,
                                     double gamma);
    static HybridHamiltonian polynomial(std::array<PolyComponent, 4> comps);

    const std::string& name() const { return name_; }
    const PolyComponent& component(int c) const { return h_[c]; }

    HermitianOp2 eval(const Vec3& n) const {
        return {h_[0].eval(n), {h_[1].eval(n), h_[2].eval(n), h_[3].eval(n)}};
    }
    // exact ambient gradient per component
    std::array<Vec3, 4> ambient_gradient(const Vec3& n) const {
        return {h_[0].grad(n), h_[1].grad(n), h_[2].grad(n), h_[3].grad(n)};
    }
    // n.grad(H) with the full ambient gradient
    HermitianOp2 radial_action(const Vec3& n) const {
        return {h_[0].radial_action(n),
                {h_[1].radial_action(n), h_[2].radial_action(n), h_[3].radial_action(n)}};
    }
    // n.grad(H) - H, the KvH phase operator; structurally zero per linear component
    HermitianOp2 phase_term(const Vec3& n) const {
        return {h_[0].phase_term(n),
                {h_[1].phase_term(n), h_[2].phase_term(n), h_[3].phase_term(n)}};
    }
    bool phase_term_is_zero() const;

    // true iff the Pauli-vector components are constant (no interaction gradient)
    bool is_decoupled() const;
    bool is_scalar() const;  // vector components identically zero

    // per-component evaluation over a grid
    RealField eval_field(const SphereGrid& g, int component) const;
    OpField eval_field(const SphereGrid& g) const;
    // analytic ambient gradient projected tangent, per component
    VecField tangential_gradient_field(const SphereGrid& g, int component) const;

    // conjugation by a spin-space rotation (mixes the Pauli-vector components)
    HybridHamiltonian conjugate(const Mat3& spin_rotation) const;

  private:
    std::string name_ = "zero";
    std::array<PolyComponent, 4> h_{};
};

}  // namespace hybridspin
