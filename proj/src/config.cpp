#include "hybridspin/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hybridspin {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

Vec3 parse_vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(where + " must be an array of three numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Mat3 parse_mat3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(where + " must be a 3x3 array");
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
        if (!j[i].is_array() || j[i].size() != 3)
            throw ConfigError(where + " must be a 3x3 array");
        for (int k = 0; k < 3; ++k) m.m[i][k] = j[i][k].get<double>();
    }
    // symmetrize: the quadratic form only sees the symmetric part
    for (int i = 0; i < 3; ++i)
        for (int k = i + 1; k < 3; ++k) {
            const double s = 0.5 * (m.m[i][k] + m.m[k][i]);
            m.m[i][k] = m.m[k][i] = s;
        }
    return m;
}

PolyComponent parse_poly(const json& j, const std::string& where) {
    reject_unknown(j, {"const", "linear", "quadratic"}, where);
    PolyComponent p;
    if (j.contains("const")) p.c0 = j["const"].get<double>();
    if (j.contains("linear")) p.lin = parse_vec3(j["linear"], where + ".linear");
    if (j.contains("quadratic")) p.quad = parse_mat3(j["quadratic"], where + ".quadratic");
    return p;
}

json poly_json(const PolyComponent& p) {
    json j = json::object();
    j["const"] = p.c0;
    j["linear"] = vec3_json(p.lin);
    json q = json::array();
    for (int i = 0; i < 3; ++i) q.push_back(json::array({p.quad.m[i][0], p.quad.m[i][1], p.quad.m[i][2]}));
    j["quadratic"] = q;
    return j;
}

HybridHamiltonian parse_hamiltonian(const json& j) {
    if (!j.contains("family")) throw ConfigError("hamiltonian.family is required");
    const std::string family = j["family"].get<std::string>();
    if (family == "zeeman") {
        reject_unknown(j, {"family", "B"}, "hamiltonian");
        return HybridHamiltonian::zeeman(parse_vec3(j.at("B"), "hamiltonian.B"));
    }
    if (family == "quantum_larmor") {
        reject_unknown(j, {"family", "omega"}, "hamiltonian");
        return HybridHamiltonian::quantum_larmor(parse_vec3(j.at("omega"), "hamiltonian.omega"));
    }
    if (family == "anisotropy") {
        reject_unknown(j, {"family", "A"}, "hamiltonian");
        return HybridHamiltonian::anisotropy(parse_mat3(j.at("A"), "hamiltonian.A"));
    }
    if (family == "coupled") {
        reject_unknown(j, {"family", "h0", "alpha", "axis", "gamma"}, "hamiltonian");
        PolyComponent h0;
        if (j.contains("h0")) h0 = parse_poly(j["h0"], "hamiltonian.h0");
        const double alpha = j.value("alpha", 0.0);
        const Vec3 axis = j.contains("axis") ? parse_vec3(j["axis"], "hamiltonian.axis")
                                             : Vec3{0, 0, 1};
        const double gamma = j.value("gamma", 0.0);
        return HybridHamiltonian::coupled(h0, alpha, axis, gamma);
    }
    if (family == "polynomial") {
        reject_unknown(j, {"family", "components"}, "hamiltonian");
        if (!j.contains("components") || !j["components"].is_array() || j["components"].size() != 4)
            throw ConfigError("hamiltonian.components must be an array of four polynomials "
                              "(scalar, sigma_x, sigma_y, sigma_z)");
        std::array<PolyComponent, 4> c;
        for (int k = 0; k < 4; ++k) c[k] = parse_poly(j["components"][k], "hamiltonian.components");
        return HybridHamiltonian::polynomial(c);
    }
    throw ConfigError("unknown hamiltonian family '" + family + "'");
}

json hamiltonian_json(const HybridHamiltonian& h) {
    // serialize in the general polynomial form; parse -> serialize -> parse is stable
    json j;
    j["family"] = "polynomial";
    json comps = json::array();
    for (int c = 0; c < 4; ++c) comps.push_back(poly_json(h.component(c)));
    j["components"] = comps;
    return j;
}

complexd parse_complex(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError(where + " must be a number or [re, im]");
}

VmfComponent parse_vmf(const json& j, const std::string& where) {
    reject_unknown(j, {"mu", "kappa", "weight"}, where);
    VmfComponent c;
    if (j.contains("mu")) c.mu = parse_vec3(j["mu"], where + ".mu");
    if (j.contains("kappa")) c.kappa = j["kappa"].get<double>();
    if (j.contains("weight")) c.weight = j["weight"].get<double>();
    if (c.kappa < 0.0) throw ConfigError(where + ".kappa must be >= 0");
    return c;
}

DensitySpec parse_density(const json& j) {
    DensitySpec d;
    const std::string kind = j.value("kind", "uniform");
    if (kind == "uniform") {
        reject_unknown(j, {"kind"}, "initial.density");
        d.kind = DensitySpec::Kind::uniform;
    } else if (kind == "vmf") {
        reject_unknown(j, {"kind", "mu", "kappa"}, "initial.density");
        d.kind = DensitySpec::Kind::vmf;
        if (j.contains("mu")) d.vmf.mu = parse_vec3(j["mu"], "initial.density.mu");
        if (j.contains("kappa")) d.vmf.kappa = j["kappa"].get<double>();
        if (d.vmf.kappa < 0.0) throw ConfigError("initial.density.kappa must be >= 0");
        d.vmf.weight = 1.0;
    } else if (kind == "mixture") {
        reject_unknown(j, {"kind", "components", "uniform_weight"}, "initial.density");
        d.kind = DensitySpec::Kind::mixture;
        d.uniform_weight = j.value("uniform_weight", 0.0);
        if (j.contains("components"))
            for (const auto& c : j["components"])
                d.components.push_back(parse_vmf(c, "initial.density.components[]"));
        if (d.components.empty() && d.uniform_weight <= 0.0)
            throw ConfigError("initial.density mixture needs components or uniform_weight");
    } else {
        throw ConfigError("unknown density kind '" + kind + "'");
    }
    return d;
}

SpinorSpec parse_spinor(const json& j) {
    SpinorSpec s;
    const std::string kind = j.value("kind", "constant");
    if (kind == "constant") {
        reject_unknown(j, {"kind", "c0", "c1"}, "initial.spinor");
        s.kind = SpinorSpec::Kind::constant;
        if (j.contains("c0")) s.c0 = parse_complex(j["c0"], "initial.spinor.c0");
        if (j.contains("c1")) s.c1 = parse_complex(j["c1"], "initial.spinor.c1");
        if (std::norm(s.c0) + std::norm(s.c1) == 0.0)
            throw ConfigError("initial.spinor must be nonzero");
    } else if (kind == "texture_radial") {
        reject_unknown(j, {"kind"}, "initial.spinor");
        s.kind = SpinorSpec::Kind::texture_radial;
    } else {
        throw ConfigError("unknown spinor kind '" + kind + "'");
    }
    return s;
}

KoopmanPhaseSpec parse_phase(const json& j) {
    KoopmanPhaseSpec p;
    const std::string kind = j.value("kind", "zero");
    if (kind == "zero") {
        reject_unknown(j, {"kind"}, "initial.koopman_phase");
        p.kind = KoopmanPhaseSpec::Kind::zero;
    } else if (kind == "linear_nz") {
        reject_unknown(j, {"kind", "slope"}, "initial.koopman_phase");
        p.kind = KoopmanPhaseSpec::Kind::linear_nz;
        p.slope = j.value("slope", 0.0);
    } else {
        throw ConfigError("unknown koopman_phase kind '" + kind + "'");
    }
    return p;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(j, {"model", "grid", "hbar", "hamiltonian", "initial", "integrator", "output",
                       "seed"},
                   "config");
    RunConfig cfg;
    if (!j.contains("model")) throw ConfigError("config.model is required");
    cfg.model = model_from_string(j["model"].get<std::string>());
    if (j.contains("grid")) {
        reject_unknown(j["grid"], {"n_theta", "n_phi"}, "grid");
        cfg.n_theta = j["grid"].value("n_theta", 32);
        cfg.n_phi = j["grid"].value("n_phi", 64);
    }
    cfg.hbar = j.value("hbar", 1.0);
    if (cfg.hbar <= 0.0) throw ConfigError("hbar must be > 0");
    if (j.contains("hamiltonian")) cfg.hamiltonian = parse_hamiltonian(j["hamiltonian"]);
    if (j.contains("initial")) {
        reject_unknown(j["initial"], {"density", "spinor", "koopman_phase"}, "initial");
        if (j["initial"].contains("density")) cfg.initial.density = parse_density(j["initial"]["density"]);
        if (j["initial"].contains("spinor")) cfg.initial.spinor = parse_spinor(j["initial"]["spinor"]);
        if (j["initial"].contains("koopman_phase"))
            cfg.initial.phase = parse_phase(j["initial"]["koopman_phase"]);
    }
    if (j.contains("integrator")) {
        const json& ji = j["integrator"];
        reject_unknown(ji,
                       {"dt", "t_end", "scheme", "symmetrize", "renormalize_psi",
                        "snapshot_stride", "diagnostic_stride"},
                       "integrator");
        cfg.integrator.dt = ji.value("dt", 1e-3);
        cfg.integrator.t_end = ji.value("t_end", 1.0);
        if (ji.contains("scheme"))
            cfg.integrator.scheme = scheme_from_string(ji["scheme"].get<std::string>());
        cfg.integrator.symmetrize = ji.value("symmetrize", true);
        cfg.integrator.renormalize_psi = ji.value("renormalize_psi", false);
        cfg.integrator.snapshot_stride = ji.value("snapshot_stride", 0);
        cfg.integrator.diagnostic_stride = ji.value("diagnostic_stride", 10);
        if (cfg.integrator.dt == 0.0) throw ConfigError("integrator.dt must be nonzero");
        if (cfg.integrator.diagnostic_stride < 0 || cfg.integrator.snapshot_stride < 0)
            throw ConfigError("strides must be >= 0");
    }
    if (j.contains("output")) {
        reject_unknown(j["output"], {"directory", "prefix"}, "output");
        cfg.output.directory = j["output"].value("directory", ".");
        cfg.output.prefix = j["output"].value("prefix", "run");
    }
    cfg.seed = j.value("seed", 0L);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    j["model"] = to_string(cfg.model);
    j["grid"] = {{"n_theta", cfg.n_theta}, {"n_phi", cfg.n_phi}};
    j["hbar"] = cfg.hbar;
    j["hamiltonian"] = hamiltonian_json(cfg.hamiltonian);
    json density;
    switch (cfg.initial.density.kind) {
        case DensitySpec::Kind::uniform: density["kind"] = "uniform"; break;
        case DensitySpec::Kind::vmf:
            density["kind"] = "vmf";
            density["mu"] = vec3_json(cfg.initial.density.vmf.mu);
            density["kappa"] = cfg.initial.density.vmf.kappa;
            break;
        case DensitySpec::Kind::mixture: {
            density["kind"] = "mixture";
            density["uniform_weight"] = cfg.initial.density.uniform_weight;
            json comps = json::array();
            for (const auto& c : cfg.initial.density.components)
                comps.push_back({{"mu", vec3_json(c.mu)}, {"kappa", c.kappa}, {"weight", c.weight}});
            density["components"] = comps;
            break;
        }
    }
    json spinor;
    if (cfg.initial.spinor.kind == SpinorSpec::Kind::constant) {
        spinor["kind"] = "constant";
        spinor["c0"] = json::array({cfg.initial.spinor.c0.real(), cfg.initial.spinor.c0.imag()});
        spinor["c1"] = json::array({cfg.initial.spinor.c1.real(), cfg.initial.spinor.c1.imag()});
    } else {
        spinor["kind"] = "texture_radial";
    }
    json phase;
    if (cfg.initial.phase.kind == KoopmanPhaseSpec::Kind::zero) {
        phase["kind"] = "zero";
    } else {
        phase["kind"] = "linear_nz";
        phase["slope"] = cfg.initial.phase.slope;
    }
    j["initial"] = {{"density", density}, {"spinor", spinor}, {"koopman_phase", phase}};
    j["integrator"] = {{"dt", cfg.integrator.dt},
                       {"t_end", cfg.integrator.t_end},
                       {"scheme", to_string(cfg.integrator.scheme)},
                       {"symmetrize", cfg.integrator.symmetrize},
                       {"renormalize_psi", cfg.integrator.renormalize_psi},
                       {"snapshot_stride", cfg.integrator.snapshot_stride},
                       {"diagnostic_stride", cfg.integrator.diagnostic_stride}};
    j["output"] = {{"directory", cfg.output.directory}, {"prefix", cfg.output.prefix}};
    j["seed"] = cfg.seed;
    return j.dump(2);
}

bool same_physics(const RunConfig& a, const RunConfig& b) {
    if (a.n_theta != b.n_theta || a.n_phi != b.n_phi || a.hbar != b.hbar) return false;
    RunConfig an = a, bn = b;
    bn.model = an.model;
    bn.integrator = an.integrator;
    bn.output = an.output;
    bn.seed = an.seed;
    return serialize_config(an) == serialize_config(bn);
}

RealField build_density(const DensitySpec& spec, const SphereGrid& g) {
    RealField rho(g);
    auto add_vmf = [&](const VmfComponent& c) {
        const Vec3 mu = normalized(c.mu);
        for (int i = 0; i < g.n_theta(); ++i)
            for (int j = 0; j < g.n_phi(); ++j)
                rho(i, j) += c.weight * std::exp(c.kappa * (dot(mu, g.node(i, j)) - 1.0));
    };
    switch (spec.kind) {
        case DensitySpec::Kind::uniform:
            for (auto& x : rho.v) x = 1.0;
            break;
        case DensitySpec::Kind::vmf:
            add_vmf(spec.vmf);
            break;
        case DensitySpec::Kind::mixture: {
            for (const auto& c : spec.components) add_vmf(c);
            const double bg = spec.uniform_weight / (4.0 * M_PI);
            for (auto& x : rho.v) x += bg;
            break;
        }
    }
    const double mass = g.integrate(rho);
    if (mass <= 0.0) throw ConfigError("initial density has nonpositive mass");
    for (auto& x : rho.v) x /= mass;
    return rho;
}

SpinorField build_spinor(const SpinorSpec& spec, const SphereGrid& g) {
    SpinorField psi(g);
    if (spec.kind == SpinorSpec::Kind::constant) {
        const double n = std::sqrt(std::norm(spec.c0) + std::norm(spec.c1));
        for (auto& p : psi.v) p = {spec.c0 / n, spec.c1 / n};
        return psi;
    }
    // radial texture: the Bloch vector of psi(n) points along n
    for (int i = 0; i < g.n_theta(); ++i) {
        const double th = g.theta(i);
        for (int j = 0; j < g.n_phi(); ++j) {
            const double ph = g.phi(j);
            psi(i, j) = {complexd{std::cos(0.5 * th), 0.0},
                         std::sin(0.5 * th) * complexd{std::cos(ph), std::sin(ph)}};
        }
    }
    return psi;
}

ModelState build_initial_state(const RunConfig& cfg, const SphereGrid& g) {
    RealField rho = build_density(cfg.initial.density, g);
    switch (cfg.model) {
        case ModelKind::liouville:
            return ClassicalDensityState{std::move(rho)};
        case ModelKind::kvn:
        case ModelKind::kvh: {
            ComplexField chi(g);
            for (int i = 0; i < g.n_theta(); ++i) {
                for (int j = 0; j < g.n_phi(); ++j) {
                    double S = 0.0;
                    if (cfg.initial.phase.kind == KoopmanPhaseSpec::Kind::linear_nz)
                        S = cfg.initial.phase.slope * g.node(i, j).z;
                    chi(i, j) = std::sqrt(rho(i, j)) *
                                std::exp(complexd{0.0, S / cfg.hbar});
                }
            }
            return KoopmanState{std::move(chi)};
        }
        case ModelKind::hybrid_kvh: {
            SpinorField psi = build_spinor(cfg.initial.spinor, g);
            SpinorField ups(g);
            for (int i = 0; i < g.n_theta(); ++i) {
                for (int j = 0; j < g.n_phi(); ++j) {
                    double S = 0.0;
                    if (cfg.initial.phase.kind == KoopmanPhaseSpec::Kind::linear_nz)
                        S = cfg.initial.phase.slope * g.node(i, j).z;
                    const complexd chi =
                        std::sqrt(rho(i, j)) * std::exp(complexd{0.0, S / cfg.hbar});
                    ups(i, j) = chi * psi(i, j);
                }
            }
            return HybridSpinorState{std::move(ups)};
        }
        case ModelKind::ehrenfest: {
            SpinorField psi = build_spinor(cfg.initial.spinor, g);
            return FactoredState{std::move(rho), std::move(psi)};
        }
        case ModelKind::nonlinear: {
            SpinorField psi = build_spinor(cfg.initial.spinor, g);
            return density_from_factored(rho, psi);
        }
    }
    throw ConfigError("unreachable model kind");
}

}  // namespace hybridspin
