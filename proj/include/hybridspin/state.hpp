#pragma once

#include <variant>

#include "hybridspin/grid.hpp"

namespace hybridspin {

enum class ModelKind { liouville, kvn, kvh, hybrid_kvh, ehrenfest, nonlinear };

const char* to_string(ModelKind m);
ModelKind model_from_string(const std::string& s);

struct ClassicalDensityState {
    RealField rho;
};

struct KoopmanState {
    ComplexField chi;
};

struct HybridSpinorState {
    SpinorField upsilon;
};

struct FactoredState {
    RealField rho;
    SpinorField psi;
};

struct HybridDensityState {
    OpField P;  // the density-valued operator; trace is the classical density
};

using ModelState =
    std::variant<ClassicalDensityState, KoopmanState, HybridSpinorState, FactoredState,
                 HybridDensityState>;

// y + c*k, elementwise over whichever family the state carries
ModelState state_axpy(const ModelState& y, double c, const ModelState& k);
// a*y1 + ... linear combination used by the integrator stages
ModelState state_combine(const ModelState& y, std::initializer_list<std::pair<double, const ModelState*>> terms);

// throws NumericalFailure naming the first offending node
void check_state_finite(const ModelState& s);

// max |y - z| over nodes and components
double state_max_abs_diff(const ModelState& a, const ModelState& b);

// --- factorization (rank-1) <-> density-operator form ---

// P = rho psi psi^dag pointwise; rho >= 0 and |psi| = 1 expected
HybridDensityState density_from_factored(const RealField& rho, const SpinorField& psi);

// Pointwise rank-1 factorization; the smaller eigenvalue must not exceed
// tau_rank times the larger one. The phase convention makes the
// larger-magnitude spinor component real positive.
FactoredState factored_from_density(const OpField& P, double tau_rank = 1e-6);

}  // namespace hybridspin
