#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hybridspin/hamiltonian.hpp"
#include "hybridspin/integrator.hpp"
#include "hybridspin/state.hpp"

namespace hybridspin {

struct VmfComponent {
    Vec3 mu{0, 0, 1};
    double kappa = 5.0;
    double weight = 1.0;
};

struct DensitySpec {
    enum class Kind { uniform, vmf, mixture } kind = Kind::uniform;
    VmfComponent vmf;                     // for kind == vmf
    std::vector<VmfComponent> components; // for kind == mixture
    double uniform_weight = 0.0;          // mixture background
};

struct SpinorSpec {
    enum class Kind { constant, texture_radial } kind = Kind::constant;
    complexd c0{1.0, 0.0}, c1{0.0, 0.0};  // normalized on construction
};

struct KoopmanPhaseSpec {
    enum class Kind { zero, linear_nz } kind = Kind::zero;
    double slope = 0.0;
};

struct InitialConditionSpec {
    DensitySpec density;
    SpinorSpec spinor;
    KoopmanPhaseSpec phase;
};

struct OutputSpec {
    std::string directory = ".";
    std::string prefix = "run";
};

struct RunConfig {
    ModelKind model = ModelKind::nonlinear;
    int n_theta = 32;
    int n_phi = 64;
    double hbar = 1.0;
    HybridHamiltonian hamiltonian = HybridHamiltonian::zeeman({0, 0, 1});
    InitialConditionSpec initial;
    IntegratorConfig integrator;
    OutputSpec output;
    long seed = 0;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

// grid, hbar, Hamiltonian and initial condition all agree (models may differ)
bool same_physics(const RunConfig& a, const RunConfig& b);

// constructs the model state for cfg.model on the given grid
ModelState build_initial_state(const RunConfig& cfg, const SphereGrid& g);

RealField build_density(const DensitySpec& spec, const SphereGrid& g);
SpinorField build_spinor(const SpinorSpec& spec, const SphereGrid& g);

}  // namespace hybridspin
