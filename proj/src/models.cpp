#include "hybridspin/models.hpp"

#include <cmath>
#include <iostream>

namespace hybridspin {

Models::Models(const SphereGrid& g, const HybridHamiltonian& H, double hbar, double rho_floor,
               double degenerate_fraction)
    : g_(&g), H_(H), hbar_(hbar), rho_floor_(rho_floor), degenerate_fraction_(degenerate_fraction) {
    if (hbar <= 0.0) throw ConfigError("hbar must be positive");
    phase_zero_ = H.phase_term_is_zero();
    for (int c = 0; c < 4; ++c) {
        hf_[c] = H.eval_field(g, c);
        dh_[c] = H.tangential_gradient_field(g, c);
        X_[c] = g.hamiltonian_vector_field(dh_[c]);
        hth_[c] = RealField(g);
        hph_[c] = RealField(g);
        xth_[c] = RealField(g);
        xph_[c] = RealField(g);
        for (int i = 0; i < g.n_theta(); ++i) {
            for (int j = 0; j < g.n_phi(); ++j) {
                hth_[c](i, j) = dot(dh_[c](i, j), g.e_theta(i, j));
                hph_[c](i, j) = dot(dh_[c](i, j), g.e_phi(j));
                xth_[c](i, j) = dot(X_[c](i, j), g.e_theta(i, j));
                xph_[c](i, j) = dot(X_[c](i, j), g.e_phi(j));
            }
        }
        for (int k = 0; k < 3; ++k) {
            RealField comp(g);
            for (std::size_t n = 0; n < comp.v.size(); ++n) comp.v[n] = X_[c].v[n][k];
            dX_[c][k] = g.tangential_gradient(comp);
        }
        if (!phase_zero_) {
            phase_[c] = RealField(g);
            for (int i = 0; i < g.n_theta(); ++i)
                for (int j = 0; j < g.n_phi(); ++j)
                    phase_[c](i, j) = H.component(c).phase_term(g.node(i, j));
        }
    }
}

// {h_c, f} = u.(Dh_c x Df) with the analytic Hamiltonian gradient
void Models::bracket_with_channel(int c, const RealField& f, RealField& out) const {
    RealField ft = g_->dtheta(f), fp = g_->dphi(f);
    for (int i = 0; i < g_->n_theta(); ++i) {
        const double is = 1.0 / g_->sin_theta(i);
        for (int j = 0; j < g_->n_phi(); ++j) {
            const std::size_t k = g_->index(i, j);
            out.v[k] = hth_[c].v[k] * (fp.v[k] * is) - hph_[c].v[k] * ft.v[k];
        }
    }
}

void Models::bracket_with_channel(int c, const ComplexField& f, ComplexField& out) const {
    ComplexField ft = g_->dtheta(f), fp = g_->dphi(f);
    for (int i = 0; i < g_->n_theta(); ++i) {
        const double is = 1.0 / g_->sin_theta(i);
        for (int j = 0; j < g_->n_phi(); ++j) {
            const std::size_t k = g_->index(i, j);
            out.v[k] = hth_[c].v[k] * (fp.v[k] * is) - hph_[c].v[k] * ft.v[k];
        }
    }
}

RealField Models::liouville_rhs(const RealField& rho) const {
    g_->check_finite(rho, "liouville state");
    if (!H_.is_scalar() && !scalar_warned_) {
        std::cerr << "warning: liouville model ignores the Pauli-vector part of the Hamiltonian\n";
        const_cast<Models*>(this)->scalar_warned_ = true;
    }
    RealField fth(*g_), fph(*g_);
    for (std::size_t k = 0; k < rho.v.size(); ++k) {
        fth.v[k] = xth_[0].v[k] * rho.v[k];
        fph.v[k] = xph_[0].v[k] * rho.v[k];
    }
    RealField div = g_->surface_divergence_components(fth, fph);
    for (auto& x : div.v) x = -x;
    return div;
}

ComplexField Models::kvn_rhs(const ComplexField& chi) const {
    g_->check_finite(chi, "koopman state");
    ComplexField out(*g_);
    bracket_with_channel(0, chi, out);
    return out;
}

ComplexField Models::kvh_rhs(const ComplexField& chi) const {
    // for linear Hamiltonians the phase term vanishes structurally and the
    // evaluation is the KvN one, step for step
    ComplexField out = kvn_rhs(chi);
    if (!phase_zero_) {
        const complexd iob{0.0, 1.0 / hbar_};
        for (std::size_t k = 0; k < out.v.size(); ++k)
            out.v[k] += iob * phase_[0].v[k] * chi.v[k];
    }
    return out;
}

SpinorField Models::hybrid_kvh_rhs(const SpinorField& ups) const {
    const SphereGrid& g = *g_;
    ComplexField u0(g), u1(g);
    for (std::size_t k = 0; k < ups.v.size(); ++k) {
        u0.v[k] = ups.v[k].c0;
        u1.v[k] = ups.v[k].c1;
    }
    g.check_finite(u0, "hybrid spinor");
    g.check_finite(u1, "hybrid spinor");

    SpinorField out(g);
    ComplexField b0(g), b1(g);
    for (int c = 0; c < 4; ++c) {
        if (H_.component(c).is_zero()) continue;
        bracket_with_channel(c, u0, b0);
        bracket_with_channel(c, u1, b1);
        if (c == 0) {
            for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] += Spinor2{b0.v[k], b1.v[k]};
        } else {
            HermitianOp2 sigma{0.0, {c == 1 ? 1.0 : 0.0, c == 2 ? 1.0 : 0.0, c == 3 ? 1.0 : 0.0}};
            for (std::size_t k = 0; k < out.v.size(); ++k)
                out.v[k] += apply(sigma, Spinor2{b0.v[k], b1.v[k]});
        }
    }
    if (!phase_zero_) {
        const complexd iob{0.0, 1.0 / hbar_};
        for (std::size_t k = 0; k < out.v.size(); ++k) {
            const HermitianOp2 ph{phase_[0].v[k],
                                  {phase_[1].v[k], phase_[2].v[k], phase_[3].v[k]}};
            out.v[k] += iob * apply(ph, ups.v[k]);
        }
    }
    return out;
}

void Models::ehrenfest_rhs(const RealField& rho, const SpinorField& psi, RealField& drho,
                           SpinorField& dpsi, RhsAux* aux) const {
    const SphereGrid& g = *g_;
    g.check_finite(rho, "ehrenfest density");
    // contract: the conditional state is pointwise normalized
    for (std::size_t k = 0; k < psi.v.size(); ++k) {
        const double n2 = norm2(psi.v[k]);
        if (std::abs(n2 - 1.0) > tau_norm)
            throw ContractViolation("factored state is not normalized at node " +
                                    std::to_string(k) + ": |psi|^2 = " + std::to_string(n2));
    }

    // X = <X_H> = X_0 + sum_a s_a X_a
    RealField xth(g), xph(g);
    for (std::size_t k = 0; k < rho.v.size(); ++k) {
        const Vec3 s = bloch_vector(psi.v[k]);
        xth.v[k] = xth_[0].v[k] + s.x * xth_[1].v[k] + s.y * xth_[2].v[k] + s.z * xth_[3].v[k];
        xph.v[k] = xph_[0].v[k] + s.x * xph_[1].v[k] + s.y * xph_[2].v[k] + s.z * xph_[3].v[k];
    }

    RealField fth(g), fph(g);
    for (std::size_t k = 0; k < rho.v.size(); ++k) {
        fth.v[k] = xth.v[k] * rho.v[k];
        fph.v[k] = xph.v[k] * rho.v[k];
    }
    drho = g.surface_divergence_components(fth, fph);
    for (auto& x : drho.v) x = -x;

    // i hbar (d_t + X.grad) psi = H psi
    ComplexField p0(g), p1(g);
    for (std::size_t k = 0; k < psi.v.size(); ++k) {
        p0.v[k] = psi.v[k].c0;
        p1.v[k] = psi.v[k].c1;
    }
    ComplexField p0t = g.dtheta(p0), p0p = g.dphi(p0);
    ComplexField p1t = g.dtheta(p1), p1p = g.dphi(p1);
    dpsi = SpinorField(g);
    const complexd miob{0.0, -1.0 / hbar_};
    for (int i = 0; i < g.n_theta(); ++i) {
        const double is = 1.0 / g.sin_theta(i);
        for (int j = 0; j < g.n_phi(); ++j) {
            const std::size_t k = g.index(i, j);
            const HermitianOp2 hop{hf_[0].v[k], {hf_[1].v[k], hf_[2].v[k], hf_[3].v[k]}};
            const Spinor2 adv{xth.v[k] * p0t.v[k] + xph.v[k] * (p0p.v[k] * is),
                              xth.v[k] * p1t.v[k] + xph.v[k] * (p1p.v[k] * is)};
            dpsi.v[k] = Spinor2{-adv.c0, -adv.c1} + miob * apply(hop, psi.v[k]);
        }
    }

    if (aux) {
        aux->X = VecField(g);
        for (int i = 0; i < g.n_theta(); ++i)
            for (int j = 0; j < g.n_phi(); ++j)
                aux->X(i, j) = xth(i, j) * g.e_theta(i, j) + xph(i, j) * g.e_phi(j);
        aux->Heff = H_.eval_field(g);
        aux->has_xi = false;
    }
}

OpField Models::nonlinear_rhs(const OpField& Pin, RhsAux* aux) const {
    const SphereGrid& g = *g_;
    const int nt = g.n_theta(), np = g.n_phi();
    const std::size_t n = Pin.v.size();

    // channel views
    RealField rho(g);
    for (std::size_t k = 0; k < n; ++k) {
        rho.v[k] = op_trace(Pin.v[k]);
        if (!std::isfinite(rho.v[k]))
            throw NumericalFailure("hybrid density: non-finite trace at node " + std::to_string(k));
    }
    double rho_max = 0.0;
    for (double r : rho.v) rho_max = std::max(rho_max, r);
    const double floor = rho_floor_ * rho_max;
    std::size_t floored = 0;
    RealField rhos(g);
    for (std::size_t k = 0; k < n; ++k) {
        if (rho.v[k] < floor) {
            rhos.v[k] = floor;
            ++floored;
        } else {
            rhos.v[k] = rho.v[k];
        }
    }
    if (floored > degenerate_fraction_ * static_cast<double>(n))
        throw DegenerateDensity("density below floor on " + std::to_string(floored) + " of " +
                                std::to_string(n) + " nodes");

    // P = Pin / rho: scalar part 1/2, vector part q
    RealField q[3];
    for (int a = 0; a < 3; ++a) {
        q[a] = RealField(g);
        for (std::size_t k = 0; k < n; ++k) q[a].v[k] = Pin.v[k].a[a] / rhos.v[k];
    }

    // gradients of the state channels (local-frame components)
    RealField pth[3], pph[3];   // of the Pauli-vector channels of curly-P
    RealField qth[3], qph[3];
    for (int a = 0; a < 3; ++a) {
        RealField pa(g);
        for (std::size_t k = 0; k < n; ++k) pa.v[k] = Pin.v[k].a[a];
        pth[a] = g.dtheta(pa);
        pph[a] = g.dphi(pa);
        qth[a] = g.dtheta(q[a]);
        qph[a] = g.dphi(q[a]);
    }

    // Xi^k_a = (J_a x u)^k with J_a = -2 (q x D q)_a per ambient direction
    VecField Xi[3];
    for (int a = 0; a < 3; ++a) Xi[a] = VecField(g);
    for (int i = 0; i < nt; ++i) {
        const double is = 1.0 / g.sin_theta(i);
        for (int j = 0; j < np; ++j) {
            const std::size_t k = g.index(i, j);
            // ambient gradient vectors of each q-channel
            Vec3 dq[3];
            for (int a = 0; a < 3; ++a)
                dq[a] = qth[a].v[k] * g.e_theta(i, j) + (qph[a].v[k] * is) * g.e_phi(j);
            // J[a] as an ambient vector: component jdir is -2 (q x d_{jdir} q)_a
            for (int a = 0; a < 3; ++a) {
                const int b = (a + 1) % 3, c = (a + 2) % 3;
                Vec3 Ja;
                for (int jd = 0; jd < 3; ++jd)
                    Ja[jd] = -2.0 * (q[b].v[k] * dq[c][jd] - q[c].v[k] * dq[b][jd]);
                Xi[a].v[k] = cross(Ja, g.node(i, j));
            }
        }
    }

    // rho * Xi and its gradients
    VecField drXi[3][3];  // [pauli a][ambient k] -> gradient vector
    for (int a = 0; a < 3; ++a) {
        for (int k3 = 0; k3 < 3; ++k3) {
            RealField comp(g);
            for (std::size_t k = 0; k < n; ++k) comp.v[k] = rho.v[k] * Xi[a].v[k][k3];
            drXi[a][k3] = g.tangential_gradient(comp);
        }
    }

    // X = <X_H> - (hbar/2 rho) Tr((rho Xi).DX_H - X_H.D(rho Xi)), projected tangent
    VecField Xc(g);
    for (std::size_t k = 0; k < n; ++k) {
        const Vec3 qv{q[0].v[k], q[1].v[k], q[2].v[k]};
        Vec3 xmean = X_[0].v[k] + 2.0 * (qv.x * X_[1].v[k] + qv.y * X_[2].v[k] + qv.z * X_[3].v[k]);
        Vec3 corr;
        for (int kk = 0; kk < 3; ++kk) {
            double t1 = 0.0, t2 = 0.0;
            for (int a = 0; a < 3; ++a) {
                t1 += dot(Xi[a].v[k], dX_[a + 1][kk].v[k]);
                t2 += dot(X_[a + 1].v[k], drXi[a][kk].v[k]);
            }
            corr[kk] = (hbar_ / rhos.v[k]) * (rho.v[k] * t1 - t2);
        }
        Xc.v[k] = xmean - corr;
    }
    Xc = g.project_tangent(Xc);

    // effective generator: Heff = H + (hbar/rho) i({P,H}+{H,P}) + (hbar/2 rho) i[{ln rho, H}, P]
    // vector part only; the scalar channel receives no correction
    RealField lr(g);
    for (std::size_t k = 0; k < n; ++k) lr.v[k] = std::log(rhos.v[k]);
    RealField lrt = g.dtheta(lr), lrp = g.dphi(lr);

    RealField hv[3];
    for (int a = 0; a < 3; ++a) hv[a] = RealField(g);
    for (int i = 0; i < nt; ++i) {
        const double is = 1.0 / g.sin_theta(i);
        for (int j = 0; j < np; ++j) {
            const std::size_t k = g.index(i, j);
            // {p_b, h_c} = (Dp)_th (Dh)_ph - (Dp)_ph (Dh)_th with analytic channel gradients
            double br[3][3];
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c)
                    br[b][c] = pth[b].v[k] * hph_[c + 1].v[k] -
                               (pph[b].v[k] * is) * hth_[c + 1].v[k];
            // CC_a = -2 eps_abc {p_b, h_c}  (i({P,H}+{H,P}) in Pauli coordinates)
            Vec3 CC{-2.0 * (br[1][2] - br[2][1]), -2.0 * (br[2][0] - br[0][2]),
                    -2.0 * (br[0][1] - br[1][0])};
            // L_c = {ln rho, h_c}; i[L, P] has vector part -2 (Lvec x pvec)
            Vec3 L;
            for (int c = 0; c < 3; ++c)
                L[c] = lrt.v[k] * hph_[c + 1].v[k] - (lrp.v[k] * is) * hth_[c + 1].v[k];
            const Vec3 pv{Pin.v[k].a.x, Pin.v[k].a.y, Pin.v[k].a.z};
            const Vec3 iLP = -2.0 * cross(L, pv);
            for (int a = 0; a < 3; ++a)
                hv[a].v[k] = hf_[a + 1].v[k] + (hbar_ / rhos.v[k]) * CC[a] +
                             (0.5 * hbar_ / rhos.v[k]) * iLP[a];
        }
    }

    // flux-form transport plus the commutator
    RealField xcth(g), xcph(g);
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < np; ++j) {
            const std::size_t k = g.index(i, j);
            xcth.v[k] = dot(Xc.v[k], g.e_theta(i, j));
            xcph.v[k] = dot(Xc.v[k], g.e_phi(j));
        }
    }
    OpField out(g);
    RealField fth(g), fph(g);
    for (int c = 0; c < 4; ++c) {
        for (std::size_t k = 0; k < n; ++k) {
            const double val = (c == 0) ? Pin.v[k].a0 : Pin.v[k].a[c - 1];
            fth.v[k] = xcth.v[k] * val;
            fph.v[k] = xcph.v[k] * val;
        }
        RealField div = g.surface_divergence_components(fth, fph);
        if (c == 0) {
            for (std::size_t k = 0; k < n; ++k) out.v[k].a0 = -div.v[k];
        } else {
            for (std::size_t k = 0; k < n; ++k) out.v[k].a[c - 1] = -div.v[k];
        }
    }
    const double two_over_hbar = 2.0 / hbar_;
    for (std::size_t k = 0; k < n; ++k) {
        const Vec3 hvk{hv[0].v[k], hv[1].v[k], hv[2].v[k]};
        const Vec3 pv{Pin.v[k].a.x, Pin.v[k].a.y, Pin.v[k].a.z};
        const Vec3 rot = two_over_hbar * cross(hvk, pv);
        out.v[k].a += rot;
    }

    if (aux) {
        aux->X = Xc;
        aux->Heff = OpField(g);
        for (std::size_t k = 0; k < n; ++k)
            aux->Heff.v[k] = {hf_[0].v[k], {hv[0].v[k], hv[1].v[k], hv[2].v[k]}};
        for (int kk = 0; kk < 3; ++kk) {
            aux->Xi[kk] = OpField(g);
            for (std::size_t k = 0; k < n; ++k)
                aux->Xi[kk].v[k] = {0.0, {Xi[0].v[k][kk], Xi[1].v[k][kk], Xi[2].v[k][kk]}};
        }
        aux->has_xi = true;
    }
    return out;
}

ModelState Models::rhs(ModelKind kind, const ModelState& s) const {
    return std::visit(
        [&](const auto& o) -> ModelState {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, ClassicalDensityState>) {
                return ClassicalDensityState{liouville_rhs(o.rho)};
            } else if constexpr (std::is_same_v<T, KoopmanState>) {
                return KoopmanState{kind == ModelKind::kvn ? kvn_rhs(o.chi) : kvh_rhs(o.chi)};
            } else if constexpr (std::is_same_v<T, HybridSpinorState>) {
                return HybridSpinorState{hybrid_kvh_rhs(o.upsilon)};
            } else if constexpr (std::is_same_v<T, FactoredState>) {
                FactoredState d{RealField(*g_), SpinorField(*g_)};
                ehrenfest_rhs(o.rho, o.psi, d.rho, d.psi);
                return d;
            } else {
                return HybridDensityState{nonlinear_rhs(o.P)};
            }
        },
        s);
}

double Models::max_velocity_estimate(const ModelState& s) const {
    // advection speed of the model at the current state
    double vmax = 0.0;
    auto vmag = [&](const RealField& th, const RealField& ph) {
        for (std::size_t k = 0; k < th.v.size(); ++k)
            vmax = std::max(vmax, std::hypot(th.v[k], ph.v[k]));
    };
    if (std::holds_alternative<ClassicalDensityState>(s) ||
        std::holds_alternative<KoopmanState>(s) || std::holds_alternative<HybridSpinorState>(s)) {
        vmag(xth_[0], xph_[0]);
        for (int c = 1; c < 4; ++c) vmag(xth_[c], xph_[c]);
        return vmax;
    }
    if (const auto* f = std::get_if<FactoredState>(&s)) {
        RhsAux aux;
        RealField drho;
        SpinorField dpsi;
        ehrenfest_rhs(f->rho, f->psi, drho, dpsi, &aux);
        for (const auto& x : aux.X.v) vmax = std::max(vmax, norm(x));
        return vmax;
    }
    const auto& hd = std::get<HybridDensityState>(s);
    RhsAux aux;
    nonlinear_rhs(hd.P, &aux);
    for (const auto& x : aux.X.v) vmax = std::max(vmax, norm(x));
    return vmax;
}

}  // namespace hybridspin
