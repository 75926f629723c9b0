#include "hybridspin/hamiltonian.hpp"

namespace hybridspin {

namespace {
bool mat_is_zero(const Mat3& m) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (m.m[i][j] != 0.0) return false;
    return true;
}
}  // namespace

bool PolyComponent::is_zero() const {
    return c0 == 0.0 && lin.x == 0.0 && lin.y == 0.0 && lin.z == 0.0 && mat_is_zero(quad);
}

bool PolyComponent::is_constant() const {
    return lin.x == 0.0 && lin.y == 0.0 && lin.z == 0.0 && mat_is_zero(quad);
}

bool PolyComponent::phase_term_is_zero() const { return c0 == 0.0 && mat_is_zero(quad); }

bool HybridHamiltonian::phase_term_is_zero() const {
    for (int c = 0; c < 4; ++c)
        if (!h_[c].phase_term_is_zero()) return false;
    return true;
}

bool HybridHamiltonian::is_decoupled() const {
    return h_[1].is_constant() && h_[2].is_constant() && h_[3].is_constant();
}

bool HybridHamiltonian::is_scalar() const {
    return h_[1].is_zero() && h_[2].is_zero() && h_[3].is_zero();
}

HybridHamiltonian HybridHamiltonian::zeeman(const Vec3& B) {
    std::array<PolyComponent, 4> c{};
    c[0].lin = B;
    return {"zeeman", c};
}

HybridHamiltonian HybridHamiltonian::quantum_larmor(const Vec3& w) {
    std::array<PolyComponent, 4> c{};
    c[1].c0 = w.x;
    c[2].c0 = w.y;
    c[3].c0 = w.z;
    return {"quantum_larmor", c};
}

HybridHamiltonian HybridHamiltonian::anisotropy(const Mat3& A) {
    std::array<PolyComponent, 4> c{};
    c[0].quad = A;
    return {"anisotropy", c};
}

HybridHamiltonian HybridHamiltonian::coupled(const PolyComponent& h0, double alpha,
                                             const Vec3& axis, double gamma) {
    std::array<PolyComponent, 4> c{};
    c[0] = h0;
    c[1].lin = alpha * axis;
    c[3].c0 = gamma;
    return {"coupled", c};
}

HybridHamiltonian HybridHamiltonian::polynomial(std::array<PolyComponent, 4> comps) {
    return {"polynomial", comps};
}

RealField HybridHamiltonian::eval_field(const SphereGrid& g, int component) const {
    RealField f(g);
    for (int i = 0; i < g.n_theta(); ++i)
        for (int j = 0; j < g.n_phi(); ++j) f(i, j) = h_[component].eval(g.node(i, j));
    return f;
}

OpField HybridHamiltonian::eval_field(const SphereGrid& g) const {
    OpField f(g);
    for (int i = 0; i < g.n_theta(); ++i)
        for (int j = 0; j < g.n_phi(); ++j) f(i, j) = eval(g.node(i, j));
    return f;
}

VecField HybridHamiltonian::tangential_gradient_field(const SphereGrid& g, int component) const {
    VecField f(g);
    for (int i = 0; i < g.n_theta(); ++i) {
        for (int j = 0; j < g.n_phi(); ++j) {
            const Vec3& u = g.node(i, j);
            const Vec3 grad = h_[component].grad(u);
            f(i, j) = grad - dot(u, grad) * u;
        }
    }
    return f;
}

HybridHamiltonian HybridHamiltonian::conjugate(const Mat3& r) const {
    // U (h0 + hvec.sigma) U^dag = h0 + (R hvec).sigma applied to the coefficient polynomials
    std::array<PolyComponent, 4> c{};
    c[0] = h_[0];
    for (int a = 0; a < 3; ++a) {
        PolyComponent& out = c[a + 1];
        for (int b = 0; b < 3; ++b) {
            const PolyComponent& in = h_[b + 1];
            const double rab = r.m[a][b];
            out.c0 += rab * in.c0;
            out.lin += rab * in.lin;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) out.quad.m[i][j] += rab * in.quad.m[i][j];
        }
    }
    return {name_ + "_conjugated", c};
}

}  // namespace hybridspin
