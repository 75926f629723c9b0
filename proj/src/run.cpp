#include "hybridspin/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

#include "hybridspin/field_io.hpp"

namespace hybridspin {

namespace fs = std::filesystem;

int worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("HYBRID_SPIN_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return static_cast<int>(n);
}

RunResult execute_run(const RunConfig& cfg, const std::string& output_dir, bool quiet,
                      int snapshot_override) {
    SphereGrid g(cfg.n_theta, cfg.n_phi);
    Models m(g, cfg.hamiltonian, cfg.hbar);
    Diagnostics diag(m);
    ModelState s0 = build_initial_state(cfg, g);

    IntegratorConfig icfg = cfg.integrator;
    if (snapshot_override > 0) icfg.snapshot_stride = snapshot_override;
    if (snapshot_override < 0) icfg.snapshot_stride = 0;

    const fs::path dir = output_dir.empty() ? fs::path(cfg.output.directory) : fs::path(output_dir);
    fs::create_directories(dir);
    const fs::path csv = dir / (cfg.output.prefix + "_diagnostics.csv");
    std::ofstream os(csv);
    if (!os) throw ConfigError("cannot open '" + csv.string() + "' for writing");
    os << DiagnosticRecord::csv_header() << "\n";
    os.precision(17);

    auto hook = [&](double, const ModelState&, const DiagnosticRecord& r) {
        os << r.csv_row() << "\n";
    };
    RunResult out;
    out.trajectory = run(m, cfg.model, std::move(s0), icfg, diag, quiet, hook);
    out.csv_path = csv.string();

    for (std::size_t k = 0; k < out.trajectory.snapshots.size(); ++k) {
        std::ostringstream name;
        name << cfg.output.prefix << "_snapshot_" << k << ".csv";
        write_snapshot((dir / name.str()).string(), out.trajectory.snapshots[k]);
    }
    if (!quiet)
        std::cerr << "run complete: t = " << out.trajectory.completed_time << ", "
                  << out.trajectory.records.size() << " diagnostic rows -> " << csv.string()
                  << "\n";
    return out;
}

namespace {

// <sigma_x> field for states that carry a quantum sector; empty otherwise
std::optional<RealField> sx_field(const SphereGrid& g, const ModelState& s) {
    if (const auto* f = std::get_if<FactoredState>(&s)) {
        RealField sx(g);
        for (std::size_t k = 0; k < f->psi.v.size(); ++k) sx.v[k] = bloch_vector(f->psi.v[k]).x;
        return sx;
    }
    if (const auto* h = std::get_if<HybridDensityState>(&s)) {
        RealField sx(g);
        for (std::size_t k = 0; k < h->P.v.size(); ++k)
            sx.v[k] = 2.0 * h->P.v[k].a.x / op_trace(h->P.v[k]);
        return sx;
    }
    if (const auto* u = std::get_if<HybridSpinorState>(&s)) {
        RealField sx(g);
        for (std::size_t k = 0; k < u->upsilon.v.size(); ++k) {
            const double n2 = norm2(u->upsilon.v[k]);
            sx.v[k] = n2 > 0 ? bloch_vector(u->upsilon.v[k]).x / n2 : 0.0;
        }
        return sx;
    }
    return std::nullopt;
}

}  // namespace

CompareResult execute_compare(const RunConfig& a, const RunConfig& b,
                              const std::string& output_dir, bool quiet) {
    if (a.n_theta != b.n_theta || a.n_phi != b.n_phi)
        throw ConfigError("compare requires matching grids");
    if (!same_physics(a, b))
        throw ConfigError("compare requires matching grid, hbar, Hamiltonian and initial condition");

    SphereGrid g(a.n_theta, a.n_phi);
    Models ma(g, a.hamiltonian, a.hbar), mb(g, b.hamiltonian, b.hbar);
    Diagnostics da(ma), db(mb);
    ModelState sa = build_initial_state(a, g);
    ModelState sb = build_initial_state(b, g);

    const double dt = a.integrator.dt;
    if (b.integrator.dt != dt || b.integrator.t_end != a.integrator.t_end)
        throw ConfigError("compare requires matching integrator dt and t_end");
    const long nsteps = std::lround(a.integrator.t_end / dt);
    const int stride = std::max(1, a.integrator.diagnostic_stride);

    const fs::path dir = output_dir.empty() ? fs::path(a.output.directory) : fs::path(output_dir);
    fs::create_directories(dir);
    const fs::path csv = dir / (a.output.prefix + "_compare.csv");
    std::ofstream os(csv);
    os.precision(17);
    os << "t,model_a,model_b,energy_a,energy_b,purity_a,purity_b,"
          "sx_l2_distance,purity_difference,energy_difference\n";

    CompareResult out;
    auto emit = [&](double t) {
        const DiagnosticRecord ra = da.record(a.model, sa, t);
        const DiagnosticRecord rb = db.record(b.model, sb, t);
        double sxd = 0.0;
        auto fa = sx_field(g, sa), fb = sx_field(g, sb);
        if (fa && fb) {
            RealField d2(g);
            for (std::size_t k = 0; k < d2.v.size(); ++k) {
                const double d = fa->v[k] - fb->v[k];
                d2.v[k] = d * d;
            }
            sxd = std::sqrt(g.integrate(d2));
        }
        out.times.push_back(t);
        out.sx_l2_distance.push_back(sxd);
        out.purity_difference.push_back(ra.purity - rb.purity);
        out.energy_difference.push_back(ra.energy - rb.energy);
        os << t << ',' << to_string(a.model) << ',' << to_string(b.model) << ',' << ra.energy
           << ',' << rb.energy << ',' << ra.purity << ',' << rb.purity << ',' << sxd << ','
           << ra.purity - rb.purity << ',' << ra.energy - rb.energy << "\n";
    };
    emit(0.0);
    for (long n = 1; n <= nsteps; ++n) {
        sa = step(ma, a.model, sa, dt, a.integrator.scheme, a.integrator.renormalize_psi);
        sb = step(mb, b.model, sb, dt, b.integrator.scheme, b.integrator.renormalize_psi);
        if (n % stride == 0 || n == nsteps) emit(static_cast<double>(n) * dt);
    }
    out.csv_path = csv.string();
    if (!quiet) std::cerr << "compare complete -> " << csv.string() << "\n";
    return out;
}

namespace {

// exact rigid-rotation solution for the liouville/zeeman configuration
std::optional<RealField> exact_final_density(const RunConfig& cfg, const SphereGrid& g) {
    if (cfg.model != ModelKind::liouville) return std::nullopt;
    const auto& H = cfg.hamiltonian;
    if (!H.is_scalar() || !H.component(0).phase_term_is_zero()) return std::nullopt;
    const Vec3 B = H.component(0).lin;
    const double w = norm(B);
    if (w == 0.0) return std::nullopt;
    // density is transported along n' = R(-t) n about B
    const Mat3 rot = rotation_about(B, -w * cfg.integrator.t_end);
    RunConfig pulled = cfg;
    RealField rho(g);
    RealField rho0 = build_density(cfg.initial.density, g);
    (void)pulled;
    // evaluate the analytic initial density at the pulled-back nodes
    RealField out(g);
    auto density_at = [&](const Vec3& u) {
        double val = 0.0;
        const DensitySpec& d = cfg.initial.density;
        switch (d.kind) {
            case DensitySpec::Kind::uniform: val = 1.0; break;
            case DensitySpec::Kind::vmf:
                val = std::exp(d.vmf.kappa * (dot(d.vmf.mu, u) - 1.0));
                break;
            case DensitySpec::Kind::mixture:
                for (const auto& c : d.components)
                    val += c.weight * std::exp(c.kappa * (dot(c.mu, u) - 1.0));
                val += d.uniform_weight / (4.0 * M_PI);
                break;
        }
        return val;
    };
    for (int i = 0; i < g.n_theta(); ++i)
        for (int j = 0; j < g.n_phi(); ++j) out(i, j) = density_at(rot.apply(g.node(i, j)));
    // normalize with the same quadrature constant as the initial state
    double raw_mass = 0.0;
    RealField raw0(g);
    for (int i = 0; i < g.n_theta(); ++i)
        for (int j = 0; j < g.n_phi(); ++j) raw0(i, j) = density_at(g.node(i, j));
    raw_mass = g.integrate(raw0);
    for (auto& x : out.v) x /= raw_mass;
    return out;
}

struct SweepRun {
    RunConfig cfg;
    double factor;
};

}  // namespace

SweepResult execute_sweep(const RunConfig& base, SweepAxis axis,
                          const std::vector<double>& factors, const std::string& output_dir,
                          bool quiet) {
    if (factors.empty()) throw ConfigError("sweep needs at least one factor");
    std::vector<SweepRun> runs;
    for (double f : factors) {
        RunConfig c = base;
        if (axis == SweepAxis::dt) {
            c.integrator.dt = base.integrator.dt / f;
        } else {
            c.n_theta = static_cast<int>(std::lround(base.n_theta * f));
            c.n_phi = static_cast<int>(std::lround(base.n_phi * f));
            if (c.n_phi % 2 != 0) c.n_phi += 1;
            // keep the time error subdominant on grid sweeps
            c.integrator.dt = base.integrator.dt / f;
        }
        runs.push_back({c, f});
    }

    struct Outcome {
        std::optional<ModelState> final_state;
        double mass_drift = 0.0;
        double energy_drift = 0.0;
        double final_error = 0.0;
        int n_theta = 0;
        double dt = 0.0;
    };

    auto one = [&](const SweepRun& r) -> Outcome {
        SphereGrid g(r.cfg.n_theta, r.cfg.n_phi);
        Models m(g, r.cfg.hamiltonian, r.cfg.hbar);
        Diagnostics diag(m);
        ModelState s0 = build_initial_state(r.cfg, g);
        IntegratorConfig icfg = r.cfg.integrator;
        icfg.snapshot_stride = 0;
        Trajectory tr = run(m, r.cfg.model, std::move(s0), icfg, diag, true);
        Outcome o;
        o.n_theta = r.cfg.n_theta;
        o.dt = icfg.dt;
        const auto& recs = tr.records;
        for (const auto& rec : recs) {
            o.mass_drift = std::max(o.mass_drift, std::abs(rec.mass - recs.front().mass));
            o.energy_drift =
                std::max(o.energy_drift, std::abs(rec.energy - recs.front().energy) /
                                             std::max(std::abs(recs.front().energy), 1e-30));
        }
        if (auto exact = exact_final_density(r.cfg, g)) {
            const auto& st = std::get<ClassicalDensityState>(tr.final_state);
            RealField d2(g), e2(g);
            for (std::size_t k = 0; k < d2.v.size(); ++k) {
                const double d = st.rho.v[k] - exact->v[k];
                d2.v[k] = d * d;
                e2.v[k] = exact->v[k] * exact->v[k];
            }
            o.final_error = std::sqrt(g.integrate(d2) / g.integrate(e2));
        }
        o.final_state = std::move(tr.final_state);
        return o;
    };

    // worker pool over the sweep points
    const int workers = std::min<int>(worker_count(), static_cast<int>(runs.size()));
    std::vector<Outcome> outcomes(runs.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= runs.size()) return;
                outcomes[i] = one(runs[i]);
            }
        });
    for (auto& th : pool) th.join();

    // dt sweeps without an exact solution: error vs the finest run
    const bool have_exact = outcomes.front().final_error > 0.0;
    if (!have_exact && axis == SweepAxis::dt && runs.size() >= 2) {
        const ModelState& ref = *outcomes.back().final_state;
        for (std::size_t i = 0; i + 1 < outcomes.size(); ++i)
            outcomes[i].final_error = state_max_abs_diff(*outcomes[i].final_state, ref);
        outcomes.back().final_error = 0.0;
    }

    SweepResult res;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        SweepRow row;
        row.factor = runs[i].factor;
        row.dt = outcomes[i].dt;
        row.n_theta = outcomes[i].n_theta;
        row.final_error = outcomes[i].final_error;
        row.energy_drift = outcomes[i].energy_drift;
        row.mass_drift = outcomes[i].mass_drift;
        if (i > 0) {
            const double fr = runs[i].factor / runs[i - 1].factor;
            if (row.final_error > 0.0 && res.rows[i - 1].final_error > 0.0)
                row.order_state = std::log(res.rows[i - 1].final_error / row.final_error) /
                                  std::log(fr);
            if (row.energy_drift > 0.0 && res.rows[i - 1].energy_drift > 0.0)
                row.order_energy = std::log(res.rows[i - 1].energy_drift / row.energy_drift) /
                                   std::log(fr);
        }
        res.rows.push_back(row);
    }

    const fs::path dir = output_dir.empty() ? fs::path(base.output.directory) : fs::path(output_dir);
    fs::create_directories(dir);
    const fs::path csv = dir / (base.output.prefix + "_sweep.csv");
    std::ofstream os(csv);
    os.precision(12);
    os << "factor,dt,n_theta,final_error,observed_order_state,energy_drift,"
          "observed_order_energy,mass_drift\n";
    for (const auto& r : res.rows)
        os << r.factor << ',' << r.dt << ',' << r.n_theta << ',' << r.final_error << ','
           << r.order_state << ',' << r.energy_drift << ',' << r.order_energy << ','
           << r.mass_drift << "\n";
    res.csv_path = csv.string();
    if (!quiet) std::cerr << "sweep complete -> " << csv.string() << "\n";
    return res;
}

}  // namespace hybridspin
