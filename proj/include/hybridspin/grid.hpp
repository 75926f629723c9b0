#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "hybridspin/errors.hpp"
#include "hybridspin/pauli.hpp"
#include "hybridspin/vec3.hpp"

namespace hybridspin {

class SphereGrid;

// Per-node array over the grid, node-major (theta outer, phi inner).
template <class T>
struct Field {
    const SphereGrid* grid = nullptr;
    std::vector<T> v;

    Field() = default;
    explicit Field(const SphereGrid& g);

    T& operator()(int i, int j);
    const T& operator()(int i, int j) const;
    std::size_t size() const { return v.size(); }

    Field& operator+=(const Field& o) {
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += o.v[k];
        return *this;
    }
};

using RealField = Field<double>;
using ComplexField = Field<complexd>;
using VecField = Field<Vec3>;
using SpinorField = Field<Spinor2>;
using OpField = Field<HermitianOp2>;

// Cell-centered latitude-longitude discretization of S^2 with midpoint
// quadrature and 4th-order centered difference stencils. theta rows are
// continued across the poles by the antipodal rule f(-theta, phi) = f(theta, phi + pi).
class SphereGrid {
  public:
    SphereGrid(int n_theta, int n_phi);

    int n_theta() const { return nt_; }
    int n_phi() const { return np_; }
    int node_count() const { return nt_ * np_; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * np_ + j; }

    double theta(int i) const { return theta_[i]; }
    double phi(int j) const { return phi_[j]; }
    double sin_theta(int i) const { return st_[i]; }
    double weight(int i) const { return w_[i]; }   // row weight sin(theta) dtheta dphi
    double d_theta() const { return dth_; }
    double d_phi() const { return dph_; }
    double min_sin_theta() const { return st_.front(); }

    const Vec3& node(int i, int j) const { return nodes_[index(i, j)]; }
    const Vec3& e_theta(int i, int j) const { return eth_[index(i, j)]; }
    const Vec3& e_phi(int j) const { return eph_[j]; }

    double area() const { return area_; }  // sum of weights

    // --- quadrature (fixed node-major accumulation order) ---
    double integrate(const RealField& f) const;
    complexd integrate(const ComplexField& f) const;
    Vec3 integrate(const VecField& f) const;
    HermitianOp2 integrate_op(const OpField& f) const;

    // --- scalar derivative stencils ---
    RealField dtheta(const RealField& f) const;
    RealField dphi(const RealField& f) const;
    ComplexField dtheta(const ComplexField& f) const;
    ComplexField dphi(const ComplexField& f) const;

    // tangential gradient in ambient coordinates
    VecField tangential_gradient(const RealField& f) const;
    void tangential_gradient(const ComplexField& f, ComplexField out[3]) const;

    // surface divergence of a tangential field (flux form in components,
    // with exact removal of the discrete pole mass leak).
    RealField surface_divergence(const VecField& F) const;
    RealField surface_divergence_components(const RealField& Fth, const RealField& Fph) const;
    RealField surface_divergence_raw(const RealField& Fth, const RealField& Fph) const;

    // normal component of the curl of a tangential field
    RealField scalar_curl(const VecField& F) const;

    // u . (Df x Dg)
    RealField lie_poisson_bracket(const RealField& f, const RealField& g) const;
    ComplexField lie_poisson_bracket(const RealField& f, const ComplexField& g) const;
    ComplexField lie_poisson_bracket(const ComplexField& f, const ComplexField& g) const;

    // X = DH x u for a supplied tangential gradient field, projected tangent
    VecField hamiltonian_vector_field(const VecField& grad_h) const;

    VecField project_tangent(const VecField& F) const;

    // max |u.F| over nodes
    double tangency_residual(const VecField& F) const;

    // contract check used by surface_divergence via the public entry point
    void require_tangential(const VecField& F, double tau_rel = 1e-8) const;

    void check_finite(const RealField& f, const char* what) const;
    void check_finite(const ComplexField& f, const char* what) const;

  private:
    template <class T>
    void dtheta_impl(const std::vector<T>& in, std::vector<T>& out) const;
    template <class T>
    void dphi_impl(const std::vector<T>& in, std::vector<T>& out) const;

    int nt_, np_;
    double dth_, dph_, area_;
    std::vector<double> theta_, phi_, st_, ct_, w_;
    std::vector<Vec3> nodes_, eth_;
    std::vector<Vec3> eph_;
};

template <class T>
Field<T>::Field(const SphereGrid& g) : grid(&g), v(static_cast<std::size_t>(g.node_count())) {}

template <class T>
T& Field<T>::operator()(int i, int j) {
    return v[grid->index(i, j)];
}

template <class T>
const T& Field<T>::operator()(int i, int j) const {
    return v[grid->index(i, j)];
}

}  // namespace hybridspin
