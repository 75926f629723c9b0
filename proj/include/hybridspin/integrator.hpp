#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hybridspin/diagnostics.hpp"
#include "hybridspin/models.hpp"
#include "hybridspin/state.hpp"

namespace hybridspin {

enum class Scheme { rk4, heun };

Scheme scheme_from_string(const std::string& s);
const char* to_string(Scheme s);

struct IntegratorConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    Scheme scheme = Scheme::rk4;
    bool symmetrize = true;        // no-op in Pauli storage; kept for config compatibility
    bool renormalize_psi = false;  // pointwise renormalization of factored states
    int snapshot_stride = 0;       // 0 = no snapshots
    int diagnostic_stride = 10;
};

struct Trajectory {
    std::vector<double> times;                  // diagnostic sample times
    std::vector<DiagnosticRecord> records;
    std::vector<double> snapshot_times;
    std::vector<ModelState> snapshots;
    ModelState final_state;
    double completed_time = 0.0;
};

// one explicit step of the chosen scheme
ModelState step(const Models& m, ModelKind kind, const ModelState& s, double dt, Scheme scheme,
                bool renormalize_psi = false);

// CFL advisory bound 0.5 * dtheta_min / max|X|; exceeding it warns on stderr
double dt_advisory(const Models& m, const ModelState& s0);

using SampleHook = std::function<void(double t, const ModelState&, const DiagnosticRecord&)>;

Trajectory run(const Models& m, ModelKind kind, ModelState s0, const IntegratorConfig& cfg,
               Diagnostics& diag, bool quiet = false, const SampleHook& hook = nullptr);

}  // namespace hybridspin
