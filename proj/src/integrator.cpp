#include "hybridspin/integrator.hpp"

#include <cmath>
#include <iostream>

namespace hybridspin {

Scheme scheme_from_string(const std::string& s) {
    if (s == "rk4") return Scheme::rk4;
    if (s == "heun") return Scheme::heun;
    throw ConfigError("unknown scheme '" + s + "' (expected rk4 or heun)");
}

const char* to_string(Scheme s) { return s == Scheme::rk4 ? "rk4" : "heun"; }

namespace {

void renormalize(ModelState& s) {
    if (auto* f = std::get_if<FactoredState>(&s)) {
        for (auto& p : f->psi.v) {
            const double n = std::sqrt(norm2(p));
            if (n > 0.0) p = (1.0 / n) * p;
        }
    }
}

}  // namespace

ModelState step(const Models& m, ModelKind kind, const ModelState& s, double dt, Scheme scheme,
                bool renormalize_psi) {
    ModelState out = s;
    if (scheme == Scheme::rk4) {
        const ModelState k1 = m.rhs(kind, s);
        const ModelState y2 = state_axpy(s, 0.5 * dt, k1);
        const ModelState k2 = m.rhs(kind, y2);
        const ModelState y3 = state_axpy(s, 0.5 * dt, k2);
        const ModelState k3 = m.rhs(kind, y3);
        const ModelState y4 = state_axpy(s, dt, k3);
        const ModelState k4 = m.rhs(kind, y4);
        out = state_axpy(out, dt / 6.0, k1);
        out = state_axpy(out, dt / 3.0, k2);
        out = state_axpy(out, dt / 3.0, k3);
        out = state_axpy(out, dt / 6.0, k4);
    } else {
        const ModelState k1 = m.rhs(kind, s);
        const ModelState y2 = state_axpy(s, dt, k1);
        const ModelState k2 = m.rhs(kind, y2);
        out = state_axpy(out, 0.5 * dt, k1);
        out = state_axpy(out, 0.5 * dt, k2);
    }
    if (renormalize_psi) renormalize(out);
    check_state_finite(out);
    return out;
}

double dt_advisory(const Models& m, const ModelState& s0) {
    const double vmax = m.max_velocity_estimate(s0);
    const double dmin = m.grid().d_theta();
    if (vmax <= 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 * dmin / vmax;
}

Trajectory run(const Models& m, ModelKind kind, ModelState s0, const IntegratorConfig& cfg,
               Diagnostics& diag, bool quiet, const SampleHook& hook) {
    if (cfg.dt == 0.0) throw ConfigError("dt must be nonzero");
    const double adv = dt_advisory(m, s0);
    if (!quiet && std::abs(cfg.dt) > adv)
        std::cerr << "warning: dt = " << cfg.dt << " exceeds the advisory bound " << adv
                  << " (c_cfl * dtheta / max|X|)\n";

    Trajectory tr;
    const long nsteps = std::lround(cfg.t_end / cfg.dt);
    auto sample = [&](double t, const ModelState& s) {
        DiagnosticRecord r = diag.record(kind, s, t);
        tr.times.push_back(t);
        tr.records.push_back(r);
        if (hook) hook(t, s, r);
    };
    sample(0.0, s0);
    if (cfg.snapshot_stride > 0) {
        tr.snapshot_times.push_back(0.0);
        tr.snapshots.push_back(s0);
    }
    ModelState s = std::move(s0);
    for (long n = 1; n <= nsteps; ++n) {
        s = step(m, kind, s, cfg.dt, cfg.scheme, cfg.renormalize_psi);
        const double t = static_cast<double>(n) * cfg.dt;
        tr.completed_time = t;
        if (cfg.diagnostic_stride > 0 && (n % cfg.diagnostic_stride == 0 || n == nsteps))
            sample(t, s);
        if (cfg.snapshot_stride > 0 && (n % cfg.snapshot_stride == 0 || n == nsteps)) {
            tr.snapshot_times.push_back(t);
            tr.snapshots.push_back(s);
        }
    }
    tr.final_state = std::move(s);
    return tr;
}

}  // namespace hybridspin
