#pragma once

#include <array>
#include <memory>
#include <optional>

#include "hybridspin/grid.hpp"
#include "hybridspin/hamiltonian.hpp"
#include "hybridspin/state.hpp"

namespace hybridspin {

// Auxiliary fields produced by the hybrid evaluators, exposed for diagnostics.
struct RhsAux {
    VecField X;                    // phase-space velocity transporting the density
    OpField Heff;                  // effective generator of the conditional quantum state
    std::array<OpField, 3> Xi;     // Xi^k = (i[P, DP] x u)^k per ambient component
    bool has_xi = false;
};

// Right-hand sides of the six dynamical systems, sharing one set of
// precomputed Hamiltonian fields on a fixed grid. The Hamiltonian vector
// fields use the analytic ambient gradient restricted to the sphere; state
// fields are differentiated with the grid stencils.
class Models {
  public:
    Models(const SphereGrid& g, const HybridHamiltonian& H, double hbar = 1.0,
           double rho_floor = 1e-10, double degenerate_fraction = 0.01);

    const SphereGrid& grid() const { return *g_; }
    const HybridHamiltonian& hamiltonian() const { return H_; }
    double hbar() const { return hbar_; }

    RealField liouville_rhs(const RealField& rho) const;
    ComplexField kvn_rhs(const ComplexField& chi) const;
    ComplexField kvh_rhs(const ComplexField& chi) const;
    SpinorField hybrid_kvh_rhs(const SpinorField& ups) const;
    void ehrenfest_rhs(const RealField& rho, const SpinorField& psi, RealField& drho,
                       SpinorField& dpsi, RhsAux* aux = nullptr) const;
    OpField nonlinear_rhs(const OpField& P, RhsAux* aux = nullptr) const;

    // dispatcher used by the integrator; the kind selects kvn vs kvh
    ModelState rhs(ModelKind kind, const ModelState& s) const;

    // velocity magnitude estimate for the CFL advisory
    double max_velocity_estimate(const ModelState& s) const;

    // pointwise norm tolerance for factored states
    static constexpr double tau_norm = 1e-6;

    // per-channel Hamiltonian fields (0 = scalar part, 1..3 = Pauli vector)
    const RealField& ham_field(int c) const { return hf_[c]; }
    const VecField& ham_gradient(int c) const { return dh_[c]; }
    const VecField& ham_vector_field(int c) const { return X_[c]; }

  private:
    void bracket_with_channel(int c, const RealField& f, RealField& out) const;
    void bracket_with_channel(int c, const ComplexField& f, ComplexField& out) const;

    const SphereGrid* g_;
    HybridHamiltonian H_;
    double hbar_;
    double rho_floor_;
    double degenerate_fraction_;
    bool phase_zero_;
    bool scalar_warned_ = false;

    RealField hf_[4];          // evaluated components
    VecField dh_[4];           // analytic tangential gradients
    RealField hth_[4], hph_[4];  // gradient components in the local frame
    VecField X_[4];            // X_c = Dh_c x u, projected tangent
    RealField xth_[4], xph_[4];  // X_c in the local frame
    VecField dX_[4][3];        // tangential gradient of each ambient component of X_c
    RealField phase_[4];       // n.grad H - H per channel (empty when structurally zero)
};

}  // namespace hybridspin
