#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hybridspin/models.hpp"

namespace hybridspin {

// One CSV row; column order is fixed and covered by a golden test.
struct DiagnosticRecord {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double purity = 0.0;
    HermitianOp2 rho_q;       // 4 columns: rhoq_0, rhoq_x, rhoq_y, rhoq_z
    Vec3 mean_n;              // 3 columns
    double casimir_x = 0.0;
    double casimir_x2 = 0.0;
    double casimir_entropy = 0.0;
    double omega_casimir = 0.0;
    double rho_min = 0.0;
    double rho_max = 0.0;
    double min_eig_P = 0.0;       // over the grid, relative to max eigenvalue
    double min_eig_rho_q = 0.0;
    double psi_norm_drift = 0.0;  // max ||psi|^2 - 1| for factored states
    double tangency_residual = 0.0;

    static const char* csv_header();
    std::string csv_row() const;
};

enum class CasimirPhi { identity_x, square_x, neg_x_log_x, log_x };

// Analytic matrix function applied by 2x2 spectral calculus.
struct CasimirSpec {
    CasimirPhi phi = CasimirPhi::identity_x;
    std::vector<double> poly;  // optional polynomial coefficients, low order first
    bool use_poly = false;

    double eval(double x) const;
};

// Observable A(n) for the bracket oracle: the linear functional
// f(P) = Tr int A P w  has functional derivative A exactly.
// Reuses the operator-valued polynomial container.
using ObservableSpec = HybridHamiltonian;

class Diagnostics {
  public:
    Diagnostics(const Models& m, double tau_pos = 1e-8);

    const Models& models() const { return *m_; }

    DiagnosticRecord record(ModelKind kind, const ModelState& s, double t) const;

    // --- energies (per model family) ---
    // hybHam2 route; also evaluates the hamfun1 route from the same stencil
    // inputs and returns both for the cross-check
    std::pair<double, double> energy_pair(const OpField& P) const;
    double energy(const OpField& P) const { return energy_pair(P).first; }
    double energy_factored(const RealField& rho, const SpinorField& psi) const;  // Ehrenfest
    double energy_koopman(const ComplexField& chi, bool with_phase) const;
    double energy_hybrid_koopman(const SpinorField& ups) const;
    double energy_classical(const RealField& rho) const;

    // --- marginals ---
    HermitianOp2 quantum_density_matrix(const OpField& P) const;
    RealField classical_density(const OpField& P) const;
    static double purity(const HermitianOp2& rho_q);

    // --- hybrid von Neumann operator D = P + (hbar/2) n.curl(rho J) ---
    OpField d_operator(const OpField& P) const;

    // --- invariants ---
    double casimir(const OpField& P, const CasimirSpec& phi) const;
    double omega_casimir(const RealField& rho, const SpinorField& psi, const CasimirSpec& phi) const;
    // smooth-gauge factorization + omega casimir for a density-operator state
    double omega_casimir(const OpField& P, const CasimirSpec& phi) const;

    // --- bracket oracle ---
    // {{f,h}}(P) for f(P) = Tr int A P w and h the model Hamiltonian functional
    double bracket_eval(const ObservableSpec& A, const OpField& P) const;
    // {{h,h}}(P); zero by antisymmetry, evaluated through the same code path
    double bracket_hh(const OpField& P) const;
    // general bilinear form given the two functional derivatives
    double bracket_pair(const OpField& df, const OpField& dh, const OpField& P) const;
    double observable_value(const ObservableSpec& A, const OpField& P) const;
    OpField functional_derivative_h(const OpField& P) const;

    // --- section 3.3 identity ---
    // residual of the material-derivative identity for <sigma_x> under a
    // coupled Hamiltonian H0 + H_I sigma_x + gamma sigma_z
    RealField ehrenfest_identity_residual(const OpField& P) const;

    // --- Berry connection <psi, -i hbar D psi> ---
    VecField berry_connection(const SpinorField& psi) const;

    double tau_pos() const { return tau_pos_; }

  private:
    const Models* m_;
    double tau_pos_;
};

}  // namespace hybridspin
