#include "hybridspin/state.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace hybridspin {

const char* to_string(ModelKind m) {
    switch (m) {
        case ModelKind::liouville: return "liouville";
        case ModelKind::kvn: return "kvn";
        case ModelKind::kvh: return "kvh";
        case ModelKind::hybrid_kvh: return "hybrid_kvh";
        case ModelKind::ehrenfest: return "ehrenfest";
        case ModelKind::nonlinear: return "nonlinear";
    }
    return "?";
}

ModelKind model_from_string(const std::string& s) {
    if (s == "liouville") return ModelKind::liouville;
    if (s == "kvn") return ModelKind::kvn;
    if (s == "kvh") return ModelKind::kvh;
    if (s == "hybrid_kvh") return ModelKind::hybrid_kvh;
    if (s == "ehrenfest") return ModelKind::ehrenfest;
    if (s == "nonlinear") return ModelKind::nonlinear;
    throw ConfigError("unknown model '" + s + "'");
}

namespace {

template <class T>
void axpy(std::vector<T>& y, double c, const std::vector<T>& k) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * k[i];
}

void axpy(std::vector<Spinor2>& y, double c, const std::vector<Spinor2>& k) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * k[i];
}

void axpy(std::vector<HermitianOp2>& y, double c, const std::vector<HermitianOp2>& k) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * k[i];
}

}  // namespace

ModelState state_axpy(const ModelState& y, double c, const ModelState& k) {
    ModelState out = y;
    std::visit(
        [&](auto& o) {
            using T = std::decay_t<decltype(o)>;
            const T& kk = std::get<T>(k);
            if constexpr (std::is_same_v<T, ClassicalDensityState>) {
                axpy(o.rho.v, c, kk.rho.v);
            } else if constexpr (std::is_same_v<T, KoopmanState>) {
                axpy(o.chi.v, c, kk.chi.v);
            } else if constexpr (std::is_same_v<T, HybridSpinorState>) {
                axpy(o.upsilon.v, c, kk.upsilon.v);
            } else if constexpr (std::is_same_v<T, FactoredState>) {
                axpy(o.rho.v, c, kk.rho.v);
                axpy(o.psi.v, c, kk.psi.v);
            } else {
                axpy(o.P.v, c, kk.P.v);
            }
        },
        out);
    return out;
}

ModelState state_combine(const ModelState& y,
                         std::initializer_list<std::pair<double, const ModelState*>> terms) {
    ModelState out = y;
    for (const auto& [c, k] : terms) out = state_axpy(out, c, *k);
    return out;
}

namespace {

void check_finite_vec(const std::vector<double>& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i]))
            throw NumericalFailure(std::string(what) + ": non-finite value at node " +
                                   std::to_string(i));
}

void check_finite_vec(const std::vector<complexd>& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
            throw NumericalFailure(std::string(what) + ": non-finite value at node " +
                                   std::to_string(i));
}

}  // namespace

void check_state_finite(const ModelState& s) {
    std::visit(
        [&](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, ClassicalDensityState>) {
                check_finite_vec(o.rho.v, "density");
            } else if constexpr (std::is_same_v<T, KoopmanState>) {
                check_finite_vec(o.chi.v, "koopman wavefunction");
            } else if constexpr (std::is_same_v<T, HybridSpinorState>) {
                for (std::size_t i = 0; i < o.upsilon.v.size(); ++i) {
                    const Spinor2& p = o.upsilon.v[i];
                    if (!std::isfinite(p.c0.real()) || !std::isfinite(p.c0.imag()) ||
                        !std::isfinite(p.c1.real()) || !std::isfinite(p.c1.imag()))
                        throw NumericalFailure("hybrid spinor: non-finite value at node " +
                                               std::to_string(i));
                }
            } else if constexpr (std::is_same_v<T, FactoredState>) {
                check_finite_vec(o.rho.v, "factored density");
                for (std::size_t i = 0; i < o.psi.v.size(); ++i) {
                    const Spinor2& p = o.psi.v[i];
                    if (!std::isfinite(p.c0.real()) || !std::isfinite(p.c0.imag()) ||
                        !std::isfinite(p.c1.real()) || !std::isfinite(p.c1.imag()))
                        throw NumericalFailure("conditional spinor: non-finite value at node " +
                                               std::to_string(i));
                }
            } else {
                for (std::size_t i = 0; i < o.P.v.size(); ++i) {
                    const HermitianOp2& a = o.P.v[i];
                    if (!std::isfinite(a.a0) || !std::isfinite(a.a.x) || !std::isfinite(a.a.y) ||
                        !std::isfinite(a.a.z))
                        throw NumericalFailure("hybrid density: non-finite value at node " +
                                               std::to_string(i));
                }
            }
        },
        s);
}

namespace {
double vdiff(double a, double b) { return std::abs(a - b); }
double vdiff(const complexd& a, const complexd& b) { return std::abs(a - b); }
double vdiff(const Spinor2& a, const Spinor2& b) {
    return std::max(std::abs(a.c0 - b.c0), std::abs(a.c1 - b.c1));
}
double vdiff(const HermitianOp2& a, const HermitianOp2& b) {
    return std::max(std::abs(a.a0 - b.a0), norm(a.a - b.a));
}

template <class T>
double maxdiff(const std::vector<T>& a, const std::vector<T>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, vdiff(a[i], b[i]));
    return m;
}
}  // namespace

double state_max_abs_diff(const ModelState& a, const ModelState& b) {
    return std::visit(
        [&](const auto& x) -> double {
            using T = std::decay_t<decltype(x)>;
            const T& y = std::get<T>(b);
            if constexpr (std::is_same_v<T, ClassicalDensityState>) {
                return maxdiff(x.rho.v, y.rho.v);
            } else if constexpr (std::is_same_v<T, KoopmanState>) {
                return maxdiff(x.chi.v, y.chi.v);
            } else if constexpr (std::is_same_v<T, HybridSpinorState>) {
                return maxdiff(x.upsilon.v, y.upsilon.v);
            } else if constexpr (std::is_same_v<T, FactoredState>) {
                return std::max(maxdiff(x.rho.v, y.rho.v), maxdiff(x.psi.v, y.psi.v));
            } else {
                return maxdiff(x.P.v, y.P.v);
            }
        },
        a);
}

HybridDensityState density_from_factored(const RealField& rho, const SpinorField& psi) {
    HybridDensityState out{OpField(*rho.grid)};
    for (std::size_t k = 0; k < rho.v.size(); ++k) {
        const HermitianOp2 proj = projector(psi.v[k]);
        out.P.v[k] = rho.v[k] * proj;
    }
    return out;
}

FactoredState factored_from_density(const OpField& P, double tau_rank) {
    const SphereGrid& g = *P.grid;
    FactoredState out{RealField(g), SpinorField(g)};
    for (std::size_t k = 0; k < P.v.size(); ++k) {
        const HermitianOp2& A = P.v[k];
        const double rho = op_trace(A);
        const double r = norm(A.a);
        const double lam_plus = A.a0 + r, lam_minus = A.a0 - r;
        if (std::abs(lam_minus) > tau_rank * std::abs(lam_plus))
            throw ContractViolation(
                "density operator is not rank-1 at node " + std::to_string(k) +
                ": eigenvalue ratio " + std::to_string(lam_minus / lam_plus));
        out.rho.v[k] = rho;
        if (r == 0.0) {
            out.psi.v[k] = {1.0, 0.0};
            continue;
        }
        const Vec3 s = A.a / r;  // unit Bloch direction of the pure part
        Spinor2 psi;
        if (s.z >= 0.0) {
            const double c0 = std::sqrt(0.5 * (1.0 + s.z));
            psi = {complexd{c0, 0.0}, complexd{s.x, s.y} * (0.5 / c0)};
        } else {
            const double c1 = std::sqrt(0.5 * (1.0 - s.z));
            psi = {complexd{s.x, -s.y} * (0.5 / c1), complexd{c1, 0.0}};
        }
        out.psi.v[k] = psi;
    }
    return out;
}

}  // namespace hybridspin
