#include "hybridspin/grid.hpp"

#include <cmath>
#include <string>

namespace hybridspin {

SphereGrid::SphereGrid(int n_theta, int n_phi) : nt_(n_theta), np_(n_phi) {
    if (n_theta < 8) throw ConfigError("n_theta must be >= 8, got " + std::to_string(n_theta));
    if (n_phi < 16) throw ConfigError("n_phi must be >= 16, got " + std::to_string(n_phi));
    if (n_phi % 2 != 0)
        throw ConfigError("n_phi must be even for pole-crossing stencils, got " + std::to_string(n_phi));

    dth_ = M_PI / nt_;
    dph_ = 2.0 * M_PI / np_;
    theta_.resize(nt_);
    st_.resize(nt_);
    ct_.resize(nt_);
    w_.resize(nt_);
    for (int i = 0; i < nt_; ++i) {
        theta_[i] = (i + 0.5) * dth_;
        st_[i] = std::sin(theta_[i]);
        ct_[i] = std::cos(theta_[i]);
        w_[i] = st_[i] * dth_ * dph_;
    }
    phi_.resize(np_);
    eph_.resize(np_);
    for (int j = 0; j < np_; ++j) {
        phi_[j] = j * dph_;
        eph_[j] = {-std::sin(phi_[j]), std::cos(phi_[j]), 0.0};
    }
    nodes_.resize(static_cast<std::size_t>(nt_) * np_);
    eth_.resize(nodes_.size());
    for (int i = 0; i < nt_; ++i) {
        for (int j = 0; j < np_; ++j) {
            const double sp = std::sin(phi_[j]), cp = std::cos(phi_[j]);
            nodes_[index(i, j)] = {st_[i] * cp, st_[i] * sp, ct_[i]};
            eth_[index(i, j)] = {ct_[i] * cp, ct_[i] * sp, -st_[i]};
        }
    }
    area_ = 0.0;
    for (int i = 0; i < nt_; ++i)
        for (int j = 0; j < np_; ++j) area_ += w_[i];
}

double SphereGrid::integrate(const RealField& f) const {
    double s = 0.0;
    for (int i = 0; i < nt_; ++i)
        for (int j = 0; j < np_; ++j) s += w_[i] * f.v[index(i, j)];
    return s;
}

complexd SphereGrid::integrate(const ComplexField& f) const {
    complexd s{0.0, 0.0};
    for (int i = 0; i < nt_; ++i)
        for (int j = 0; j < np_; ++j) s += w_[i] * f.v[index(i, j)];
    return s;
}

Vec3 SphereGrid::integrate(const VecField& f) const {
    Vec3 s;
    for (int i = 0; i < nt_; ++i)
        for (int j = 0; j < np_; ++j) s += w_[i] * f.v[index(i, j)];
    return s;
}

HermitianOp2 SphereGrid::integrate_op(const OpField& f) const {
    HermitianOp2 s;
    for (int i = 0; i < nt_; ++i)
        for (int j = 0; j < np_; ++j) s += w_[i] * f.v[index(i, j)];
    return s;
}

template <class T>
void SphereGrid::dtheta_impl(const std::vector<T>& in, std::vector<T>& out) const {
    const double c = 1.0 / (12.0 * dth_);
    const int half = np_ / 2;
    // antipodal continuation: row -1-i at column j maps to row i at column j + np/2
    auto at = [&](int i, int j) -> const T& {
        if (i < 0) return in[index(-1 - i, (j + half) % np_)];
        if (i >= nt_) return in[index(2 * nt_ - 1 - i, (j + half) % np_)];
        return in[index(i, j)];
    };
    for (int i = 0; i < nt_; ++i) {
        for (int j = 0; j < np_; ++j) {
            out[index(i, j)] =
                c * (at(i - 2, j) - at(i + 2, j) + 8.0 * (at(i + 1, j) - at(i - 1, j)));
        }
    }
}

template <class T>
void SphereGrid::dphi_impl(const std::vector<T>& in, std::vector<T>& out) const {
    const double c = 1.0 / (12.0 * dph_);
    for (int i = 0; i < nt_; ++i) {
        for (int j = 0; j < np_; ++j) {
            const int jm1 = (j + np_ - 1) % np_, jm2 = (j + np_ - 2) % np_;
            const int jp1 = (j + 1) % np_, jp2 = (j + 2) % np_;
            out[index(i, j)] = c * (in[index(i, jm2)] - in[index(i, jp2)] +
                                    8.0 * (in[index(i, jp1)] - in[index(i, jm1)]));
        }
    }
}

RealField SphereGrid::dtheta(const RealField& f) const {
    RealField out(*this);
    dtheta_impl(f.v, out.v);
    return out;
}

RealField SphereGrid::dphi(const RealField& f) const {
    RealField out(*this);
    dphi_impl(f.v, out.v);
    return out;
}

ComplexField SphereGrid::dtheta(const ComplexField& f) const {
    ComplexField out(*this);
    dtheta_impl(f.v, out.v);
    return out;
}

ComplexField SphereGrid::dphi(const ComplexField& f) const {
    ComplexField out(*this);
    dphi_impl(f.v, out.v);
    return out;
}

VecField SphereGrid::tangential_gradient(const RealField& f) const {
    check_finite(f, "tangential_gradient input");
    RealField ft = dtheta(f), fp = dphi(f);
    VecField out(*this);
    for (int i = 0; i < nt_; ++i) {
        const double is = 1.0 / st_[i];
        for (int j = 0; j < np_; ++j) {
            const std::size_t k = index(i, j);
            out.v[k] = eth_[k] * ft.v[k] + eph_[j] * (fp.v[k] * is);
        }
    }
    return out;
}

void SphereGrid::tangential_gradient(const ComplexField& f, ComplexField out[3]) const {
    check_finite(f, "tangential_gradient input");
    ComplexField ft = dtheta(f), fp = dphi(f);
    for (int k = 0; k < 3; ++k) out[k] = ComplexField(*this);
    for (int i = 0; i < nt_; ++i) {
        const double is = 1.0 / st_[i];
        for (int j = 0; j < np_; ++j) {
            const std::size_t k = index(i, j);
            const complexd gphi = fp.v[k] * is;
            out[0].v[k] = eth_[k].x * ft.v[k] + eph_[j].x * gphi;
            out[1].v[k] = eth_[k].y * ft.v[k] + eph_[j].y * gphi;
            out[2].v[k] = eth_[k].z * ft.v[k] + eph_[j].z * gphi;
        }
    }
}

RealField SphereGrid::surface_divergence_raw(const RealField& Fth, const RealField& Fph) const {
    RealField g(*this);
    for (int i = 0; i < nt_; ++i)
        for (int j = 0; j < np_; ++j) g(i, j) = st_[i] * Fth(i, j);
    RealField gt = dtheta(g), gp = dphi(Fph);
    RealField out(*this);
    for (int i = 0; i < nt_; ++i) {
        const double is = 1.0 / st_[i];
        for (int j = 0; j < np_; ++j) out(i, j) = is * (gt(i, j) + gp(i, j));
    }
    return out;
}

RealField SphereGrid::surface_divergence_components(const RealField& Fth,
                                                    const RealField& Fph) const {
    RealField out = surface_divergence_raw(Fth, Fph);
    // centered stencils leak O(dth^2) mass through the poles; remove it exactly
    // so flux-form transport conserves the quadrature mass to round-off
    const double leak = integrate(out) / area_;
    for (auto& x : out.v) x -= leak;
    return out;
}

RealField SphereGrid::surface_divergence(const VecField& F) const {
    require_tangential(F);
    RealField Fth(*this), Fph(*this);
    for (int i = 0; i < nt_; ++i) {
        for (int j = 0; j < np_; ++j) {
            Fth(i, j) = dot(F(i, j), e_theta(i, j));
            Fph(i, j) = dot(F(i, j), e_phi(j));
        }
    }
    return surface_divergence_components(Fth, Fph);
}

RealField SphereGrid::scalar_curl(const VecField& F) const {
    require_tangential(F);
    RealField g(*this), Fth(*this);
    for (int i = 0; i < nt_; ++i) {
        for (int j = 0; j < np_; ++j) {
            g(i, j) = st_[i] * dot(F(i, j), e_phi(j));
            Fth(i, j) = dot(F(i, j), e_theta(i, j));
        }
    }
    RealField gt = dtheta(g), fp = dphi(Fth);
    RealField out(*this);
    for (int i = 0; i < nt_; ++i) {
        const double is = 1.0 / st_[i];
        for (int j = 0; j < np_; ++j) out(i, j) = is * (gt(i, j) - fp(i, j));
    }
    // the integral of the normal curl component vanishes on a closed surface;
    // remove the discrete pole defect exactly, as for the divergence
    const double leak = integrate(out) / area_;
    for (auto& x : out.v) x -= leak;
    return out;
}

RealField SphereGrid::lie_poisson_bracket(const RealField& f, const RealField& g) const {
    // u.(Df x Dg) = (df_th dg_ph - df_ph dg_th)/sin(theta)
    RealField ft = dtheta(f), fp = dphi(f), gt = dtheta(g), gp = dphi(g);
    RealField out(*this);
    for (int i = 0; i < nt_; ++i) {
        const double is = 1.0 / st_[i];
        for (int j = 0; j < np_; ++j) {
            const std::size_t k = index(i, j);
            out.v[k] = is * (ft.v[k] * gp.v[k] - fp.v[k] * gt.v[k]);
        }
    }
    return out;
}

ComplexField SphereGrid::lie_poisson_bracket(const RealField& f, const ComplexField& g) const {
    RealField ft = dtheta(f), fp = dphi(f);
    ComplexField gt = dtheta(g), gp = dphi(g);
    ComplexField out(*this);
    for (int i = 0; i < nt_; ++i) {
        const double is = 1.0 / st_[i];
        for (int j = 0; j < np_; ++j) {
            const std::size_t k = index(i, j);
            out.v[k] = is * (ft.v[k] * gp.v[k] - fp.v[k] * gt.v[k]);
        }
    }
    return out;
}

ComplexField SphereGrid::lie_poisson_bracket(const ComplexField& f, const ComplexField& g) const {
    ComplexField ft = dtheta(f), fp = dphi(f), gt = dtheta(g), gp = dphi(g);
    ComplexField out(*this);
    for (int i = 0; i < nt_; ++i) {
        const double is = 1.0 / st_[i];
        for (int j = 0; j < np_; ++j) {
            const std::size_t k = index(i, j);
            out.v[k] = is * (ft.v[k] * gp.v[k] - fp.v[k] * gt.v[k]);
        }
    }
    return out;
}

VecField SphereGrid::hamiltonian_vector_field(const VecField& grad_h) const {
    VecField out(*this);
    for (int i = 0; i < nt_; ++i)
        for (int j = 0; j < np_; ++j) out(i, j) = cross(grad_h(i, j), node(i, j));
    return project_tangent(out);
}

VecField SphereGrid::project_tangent(const VecField& F) const {
    VecField out(*this);
    for (int i = 0; i < nt_; ++i) {
        for (int j = 0; j < np_; ++j) {
            const Vec3& u = node(i, j);
            out(i, j) = F(i, j) - dot(u, F(i, j)) * u;
        }
    }
    return out;
}

double SphereGrid::tangency_residual(const VecField& F) const {
    double r = 0.0;
    for (int i = 0; i < nt_; ++i)
        for (int j = 0; j < np_; ++j) r = std::max(r, std::abs(dot(node(i, j), F(i, j))));
    return r;
}

void SphereGrid::require_tangential(const VecField& F, double tau_rel) const {
    double mag = 0.0;
    for (const auto& f : F.v) mag = std::max(mag, norm(f));
    const double res = tangency_residual(F);
    if (res > tau_rel * std::max(mag, 1e-300))
        throw ContractViolation("field is not tangential: residual " + std::to_string(res) +
                                " vs magnitude " + std::to_string(mag));
}

void SphereGrid::check_finite(const RealField& f, const char* what) const {
    for (std::size_t k = 0; k < f.v.size(); ++k) {
        if (!std::isfinite(f.v[k]))
            throw NumericalFailure(std::string(what) + ": non-finite value at node " +
                                   std::to_string(k));
    }
}

void SphereGrid::check_finite(const ComplexField& f, const char* what) const {
    for (std::size_t k = 0; k < f.v.size(); ++k) {
        if (!std::isfinite(f.v[k].real()) || !std::isfinite(f.v[k].imag()))
            throw NumericalFailure(std::string(what) + ": non-finite value at node " +
                                   std::to_string(k));
    }
}

}  // namespace hybridspin
