#include "hybridspin/diagnostics.hpp"

#include <cmath>
#include <sstream>

namespace hybridspin {

const char* DiagnosticRecord::csv_header() {
    return "t,mass,energy,purity,rhoq_0,rhoq_x,rhoq_y,rhoq_z,mean_nx,mean_ny,mean_nz,"
           "casimir_x,casimir_x2,casimir_entropy,omega_casimir,rho_min,rho_max,"
           "min_eig_P,min_eig_rhoq,psi_norm_drift,tangency_residual";
}

std::string DiagnosticRecord::csv_row() const {
    std::ostringstream os;
    os.precision(17);
    os << t << ',' << mass << ',' << energy << ',' << purity << ',' << rho_q.a0 << ','
       << rho_q.a.x << ',' << rho_q.a.y << ',' << rho_q.a.z << ',' << mean_n.x << ',' << mean_n.y
       << ',' << mean_n.z << ',' << casimir_x << ',' << casimir_x2 << ',' << casimir_entropy << ','
       << omega_casimir << ',' << rho_min << ',' << rho_max << ',' << min_eig_P << ','
       << min_eig_rho_q << ',' << psi_norm_drift << ',' << tangency_residual;
    return os.str();
}

double CasimirSpec::eval(double x) const {
    if (use_poly) {
        double r = 0.0, p = 1.0;
        for (double c : poly) {
            r += c * p;
            p *= x;
        }
        return r;
    }
    switch (phi) {
        case CasimirPhi::identity_x: return x;
        case CasimirPhi::square_x: return x * x;
        case CasimirPhi::neg_x_log_x: return x > 0.0 ? -x * std::log(x) : 0.0;
        case CasimirPhi::log_x: return std::log(x);
    }
    return 0.0;
}

Diagnostics::Diagnostics(const Models& m, double tau_pos) : m_(&m), tau_pos_(tau_pos) {}

// hybHam2: int [Tr(P H) + (hbar/2) Tr(P/rho * i({P,H}+{H,P}))] w
// hamfun1: int rho [<H> + (hbar/2) <i({p,H}+{H,p})>] w with p = P/rho and the
// p-gradients derived from the same stencil pass by the product rule, so the
// two routes differ only in the commutator algebra.
std::pair<double, double> Diagnostics::energy_pair(const OpField& P) const {
    const SphereGrid& g = m_->grid();
    const double hbar = m_->hbar();
    const std::size_t n = P.v.size();

    RealField pth[3], pph[3], rho(g);
    for (std::size_t k = 0; k < n; ++k) rho.v[k] = op_trace(P.v[k]);
    for (int a = 0; a < 3; ++a) {
        RealField pa(g);
        for (std::size_t k = 0; k < n; ++k) pa.v[k] = P.v[k].a[a];
        pth[a] = g.dtheta(pa);
        pph[a] = g.dphi(pa);
    }
    RealField rth = g.dtheta(rho), rph = g.dphi(rho);

    RealField dens2(g), dens1(g);
    for (int i = 0; i < g.n_theta(); ++i) {
        const double is = 1.0 / g.sin_theta(i);
        for (int j = 0; j < g.n_phi(); ++j) {
            const std::size_t k = g.index(i, j);
            const double r = rho.v[k];
            const Vec3 q{P.v[k].a.x / r, P.v[k].a.y / r, P.v[k].a.z / r};
            const HermitianOp2 hop{m_->ham_field(0).v[k],
                                   {m_->ham_field(1).v[k], m_->ham_field(2).v[k],
                                    m_->ham_field(3).v[k]}};
            // brackets of the curly-P channels with the Hamiltonian channels
            double brP[3][3], brq[3][3];
            for (int b = 0; b < 3; ++b) {
                // derived gradient of q_b = (grad p_b - q_b grad rho)/rho
                const double qbt = (pth[b].v[k] - q[b] * rth.v[k]) / r;
                const double qbp = (pph[b].v[k] - q[b] * rph.v[k]) / r;
                for (int c = 0; c < 3; ++c) {
                    const double hth = dot(m_->ham_gradient(c + 1).v[k],
                                           g.e_theta(i, j));
                    const double hph = dot(m_->ham_gradient(c + 1).v[k], g.e_phi(j));
                    brP[b][c] = pth[b].v[k] * hph - (pph[b].v[k] * is) * hth;
                    brq[b][c] = qbt * hph - (qbp * is) * hth;
                }
            }
            const Vec3 ccP{-2.0 * (brP[1][2] - brP[2][1]), -2.0 * (brP[2][0] - brP[0][2]),
                           -2.0 * (brP[0][1] - brP[1][0])};
            const Vec3 ccq{-2.0 * (brq[1][2] - brq[2][1]), -2.0 * (brq[2][0] - brq[0][2]),
                           -2.0 * (brq[0][1] - brq[1][0])};
            dens2.v[k] = trace_product(P.v[k], hop) + hbar * dot(q, ccP);
            dens1.v[k] = r * (hop.a0 + 2.0 * dot(q, hop.a) + hbar * dot(q, ccq));
        }
    }
    return {g.integrate(dens2), g.integrate(dens1)};
}

double Diagnostics::energy_classical(const RealField& rho) const {
    const SphereGrid& g = m_->grid();
    RealField dens(g);
    for (std::size_t k = 0; k < rho.v.size(); ++k)
        dens.v[k] = rho.v[k] * m_->ham_field(0).v[k];
    return g.integrate(dens);
}

double Diagnostics::energy_koopman(const ComplexField& chi, bool with_phase) const {
    // Re int chi^* (i hbar {H, chi} - phase chi) w
    const SphereGrid& g = m_->grid();
    const double hbar = m_->hbar();
    ComplexField br = with_phase ? m_->kvh_rhs(chi) : m_->kvn_rhs(chi);
    // kvh_rhs = {H,chi} + (i/hbar) phase chi; the Liouvillian action is
    // i hbar * that, so energy = Re int conj(chi) * (i hbar rhs)
    RealField dens(g);
    const complexd ih{0.0, hbar};
    for (std::size_t k = 0; k < chi.v.size(); ++k)
        dens.v[k] = std::real(std::conj(chi.v[k]) * (ih * br.v[k]));
    return g.integrate(dens);
}

double Diagnostics::energy_hybrid_koopman(const SpinorField& ups) const {
    const SphereGrid& g = m_->grid();
    const double hbar = m_->hbar();
    SpinorField r = m_->hybrid_kvh_rhs(ups);
    RealField dens(g);
    const complexd ih{0.0, hbar};
    for (std::size_t k = 0; k < ups.v.size(); ++k)
        dens.v[k] = std::real(inner(ups.v[k], ih * r.v[k]));
    return g.integrate(dens);
}

double Diagnostics::energy_factored(const RealField& rho, const SpinorField& psi) const {
    // Ehrenfest energy: int rho <psi, H psi> w  (hbar corrections dropped)
    const SphereGrid& g = m_->grid();
    RealField dens(g);
    for (std::size_t k = 0; k < rho.v.size(); ++k) {
        const HermitianOp2 hop{m_->ham_field(0).v[k],
                               {m_->ham_field(1).v[k], m_->ham_field(2).v[k],
                                m_->ham_field(3).v[k]}};
        dens.v[k] = rho.v[k] * expectation(psi.v[k], hop);
    }
    return g.integrate(dens);
}

HermitianOp2 Diagnostics::quantum_density_matrix(const OpField& P) const {
    return m_->grid().integrate_op(P);
}

RealField Diagnostics::classical_density(const OpField& P) const {
    RealField rho(m_->grid());
    for (std::size_t k = 0; k < P.v.size(); ++k) rho.v[k] = op_trace(P.v[k]);
    return rho;
}

double Diagnostics::purity(const HermitianOp2& rho_q) {
    return 2.0 * (rho_q.a0 * rho_q.a0 + dot(rho_q.a, rho_q.a));
}

OpField Diagnostics::d_operator(const OpField& P) const {
    const SphereGrid& g = m_->grid();
    const double hbar = m_->hbar();
    const std::size_t n = P.v.size();

    RealField rho(g), q[3], qth[3], qph[3];
    for (std::size_t k = 0; k < n; ++k) rho.v[k] = op_trace(P.v[k]);
    for (int a = 0; a < 3; ++a) {
        q[a] = RealField(g);
        for (std::size_t k = 0; k < n; ++k) q[a].v[k] = P.v[k].a[a] / rho.v[k];
        qth[a] = g.dtheta(q[a]);
        qph[a] = g.dphi(q[a]);
    }
    // rho J_a as a tangential vector field per Pauli component a
    OpField out = P;
    for (int a = 0; a < 3; ++a) {
        VecField rJ(g);
        const int b = (a + 1) % 3, c = (a + 2) % 3;
        for (int i = 0; i < g.n_theta(); ++i) {
            const double is = 1.0 / g.sin_theta(i);
            for (int j = 0; j < g.n_phi(); ++j) {
                const std::size_t k = g.index(i, j);
                Vec3 dqb = qth[b].v[k] * g.e_theta(i, j) + (qph[b].v[k] * is) * g.e_phi(j);
                Vec3 dqc = qth[c].v[k] * g.e_theta(i, j) + (qph[c].v[k] * is) * g.e_phi(j);
                // J_a = -2 (q x Dq)_a = -2 (q_b Dq_c - q_c Dq_b)
                rJ.v[k] = (-2.0 * rho.v[k]) * (q[b].v[k] * dqc - q[c].v[k] * dqb);
            }
        }
        RealField curl = g.scalar_curl(rJ);
        for (std::size_t k = 0; k < n; ++k) out.v[k].a[a] += 0.5 * hbar * curl.v[k];
    }
    // Tr J = 0 structurally, so Tr D = rho holds exactly
    return out;
}

double Diagnostics::casimir(const OpField& P, const CasimirSpec& phi) const {
    const SphereGrid& g = m_->grid();
    RealField dens(g);
    double lmax = 0.0;
    for (std::size_t k = 0; k < P.v.size(); ++k) {
        const double rho = op_trace(P.v[k]);
        const double r = norm(P.v[k].a) / rho;
        lmax = std::max(lmax, 0.5 + r);
    }
    const bool log_family = !phi.use_poly && phi.phi == CasimirPhi::neg_x_log_x;
    for (std::size_t k = 0; k < P.v.size(); ++k) {
        const double rho = op_trace(P.v[k]);
        const double r = norm(P.v[k].a) / rho;
        const double lp = 0.5 + r, lm = 0.5 - r;
        if (log_family && lm < -tau_pos_ * lmax)
            throw PositivityViolation("negative eigenvalue " + std::to_string(lm) +
                                      " under a logarithmic Casimir at node " + std::to_string(k));
        dens.v[k] = rho * (phi.eval(lp) + (lm > 0.0 ? phi.eval(lm) : phi.eval(0.0)));
    }
    return g.integrate(dens);
}

double Diagnostics::omega_casimir(const RealField& rho, const SpinorField& psi,
                                  const CasimirSpec& phi) const {
    const SphereGrid& g = m_->grid();
    const double hbar = m_->hbar();
    ComplexField c0(g), c1(g);
    for (std::size_t k = 0; k < psi.v.size(); ++k) {
        c0.v[k] = psi.v[k].c0;
        c1.v[k] = psi.v[k].c1;
    }
    ComplexField c0t = g.dtheta(c0), c0p = g.dphi(c0);
    ComplexField c1t = g.dtheta(c1), c1p = g.dphi(c1);
    RealField dens(g);
    for (int i = 0; i < g.n_theta(); ++i) {
        const double is = 1.0 / g.sin_theta(i);
        for (int j = 0; j < g.n_phi(); ++j) {
            const std::size_t k = g.index(i, j);
            // Im {psi^dag, psi} = 2 sum_a Im[(Dpsibar_a)_th (Dpsi_a)_ph]
            const double im = 2.0 * (std::imag(std::conj(c0t.v[k]) * (c0p.v[k] * is)) +
                                     std::imag(std::conj(c1t.v[k]) * (c1p.v[k] * is)));
            const double omega = 1.0 + hbar * im;
            dens.v[k] = rho.v[k] * phi.eval(omega / rho.v[k]);
        }
    }
    return g.integrate(dens);
}

double Diagnostics::omega_casimir(const OpField& P, const CasimirSpec& phi) const {
    // smooth reference gauge: psi(n) = P(n) chi_ref, with chi_ref the principal
    // eigenvector of the integrated density matrix; the per-node convention of
    // factored_from_density is not differentiable across component crossings
    const SphereGrid& g = m_->grid();
    const HermitianOp2 rq = quantum_density_matrix(P);
    Spinor2 ref{1.0, 0.0};
    if (norm(rq.a) > 0.0) {
        const Vec3 s = rq.a / norm(rq.a);
        if (s.z >= 0.0) {
            const double c0 = std::sqrt(0.5 * (1.0 + s.z));
            ref = {complexd{c0, 0.0}, complexd{s.x, s.y} * (0.5 / c0)};
        } else {
            const double c1 = std::sqrt(0.5 * (1.0 - s.z));
            ref = {complexd{s.x, -s.y} * (0.5 / c1), complexd{c1, 0.0}};
        }
    }
    RealField rho(g);
    SpinorField psi(g);
    for (std::size_t k = 0; k < P.v.size(); ++k) {
        rho.v[k] = op_trace(P.v[k]);
        const HermitianOp2 p{P.v[k].a0 / rho.v[k], P.v[k].a / rho.v[k]};
        Spinor2 raw = apply(p, ref);
        const double nr = std::sqrt(norm2(raw));
        if (nr < 1e-12) {
            psi.v[k] = {1.0, 0.0};  // gauge reference orthogonal to the local state
            continue;
        }
        const complexd ph = inner(ref, raw);
        const complexd rot = std::abs(ph) > 0.0 ? std::conj(ph) / std::abs(ph) : complexd{1.0, 0.0};
        psi.v[k] = (rot / nr) * raw;
    }
    return omega_casimir(rho, psi, phi);
}

OpField Diagnostics::functional_derivative_h(const OpField& P) const {
    // dh/dP = H + (hbar/2 Tr P)(2i({P,H}+{H,P}) + i[P,{H,ln rho}] - <i({P,H}+{H,P})> I)
    const SphereGrid& g = m_->grid();
    const double hbar = m_->hbar();
    const std::size_t n = P.v.size();

    RealField rho(g), pth[3], pph[3];
    for (std::size_t k = 0; k < n; ++k) rho.v[k] = op_trace(P.v[k]);
    for (int a = 0; a < 3; ++a) {
        RealField pa(g);
        for (std::size_t k = 0; k < n; ++k) pa.v[k] = P.v[k].a[a];
        pth[a] = g.dtheta(pa);
        pph[a] = g.dphi(pa);
    }
    RealField lr(g);
    for (std::size_t k = 0; k < n; ++k) lr.v[k] = std::log(rho.v[k]);
    RealField lrt = g.dtheta(lr), lrp = g.dphi(lr);

    OpField out(g);
    for (int i = 0; i < g.n_theta(); ++i) {
        const double is = 1.0 / g.sin_theta(i);
        for (int j = 0; j < g.n_phi(); ++j) {
            const std::size_t k = g.index(i, j);
            const double r = rho.v[k];
            double br[3][3];
            Vec3 L;
            for (int c = 0; c < 3; ++c) {
                const double hth = dot(m_->ham_gradient(c + 1).v[k], g.e_theta(i, j));
                const double hph = dot(m_->ham_gradient(c + 1).v[k], g.e_phi(j));
                for (int b = 0; b < 3; ++b)
                    br[b][c] = pth[b].v[k] * hph - (pph[b].v[k] * is) * hth;
                // {H, ln rho}_c = -{ln rho, h_c}
                L[c] = -(lrt.v[k] * hph - (lrp.v[k] * is) * hth);
            }
            const Vec3 CC{-2.0 * (br[1][2] - br[2][1]), -2.0 * (br[2][0] - br[0][2]),
                          -2.0 * (br[0][1] - br[1][0])};
            const Vec3 pv = P.v[k].a;
            const Vec3 q = pv / r;
            // i[P, {H, ln rho}] has vector part -2 (pvec x Lvec)
            const Vec3 iPL = -2.0 * cross(pv, L);
            const HermitianOp2 hop{m_->ham_field(0).v[k],
                                   {m_->ham_field(1).v[k], m_->ham_field(2).v[k],
                                    m_->ham_field(3).v[k]}};
            HermitianOp2 d = hop;
            d.a += (hbar / r) * CC + (0.5 * hbar / r) * iPL;
            d.a0 -= (0.5 * hbar / r) * 2.0 * dot(q, CC);  // <i({P,H}+{H,P})> = Tr(p CC-op)
            out.v[k] = d;
        }
    }
    return out;
}

double Diagnostics::observable_value(const ObservableSpec& A, const OpField& P) const {
    const SphereGrid& g = m_->grid();
    RealField dens(g);
    for (int i = 0; i < g.n_theta(); ++i)
        for (int j = 0; j < g.n_phi(); ++j)
            dens(i, j) = trace_product(A.eval(g.node(i, j)), P(i, j));
    return g.integrate(dens);
}

double Diagnostics::bracket_pair(const OpField& df, const OpField& dh, const OpField& P) const {
    // {{f,h}} = int [ u.<D(df/dP)> x <D(dh/dP)> - <(i/hbar)[df/dP, dh/dP]> ] Tr(P) w
    // both functional derivatives are differentiated with the same stencils,
    // so antisymmetry is exact
    const SphereGrid& g = m_->grid();
    const double hbar = m_->hbar();
    const std::size_t n = P.v.size();

    RealField fth[4], fph[4], hth[4], hph[4];
    for (int c = 0; c < 4; ++c) {
        RealField fc(g), hc(g);
        for (std::size_t k = 0; k < n; ++k) {
            fc.v[k] = (c == 0) ? df.v[k].a0 : df.v[k].a[c - 1];
            hc.v[k] = (c == 0) ? dh.v[k].a0 : dh.v[k].a[c - 1];
        }
        fth[c] = g.dtheta(fc);
        fph[c] = g.dphi(fc);
        hth[c] = g.dtheta(hc);
        hph[c] = g.dphi(hc);
    }

    RealField dens(g);
    for (int i = 0; i < g.n_theta(); ++i) {
        const double is = 1.0 / g.sin_theta(i);
        for (int j = 0; j < g.n_phi(); ++j) {
            const std::size_t k = g.index(i, j);
            const double rho = op_trace(P.v[k]);
            const Vec3 q = P.v[k].a / rho;
            // <D(.)> = D(scalar channel) + 2 q_a D(vector channel a), in the
            // local frame; the triple product only needs the two components
            double gfth = fth[0].v[k], gfph = fph[0].v[k] * is;
            double ghth = hth[0].v[k], ghph = hph[0].v[k] * is;
            for (int a = 0; a < 3; ++a) {
                gfth += 2.0 * q[a] * fth[a + 1].v[k];
                gfph += 2.0 * q[a] * (fph[a + 1].v[k] * is);
                ghth += 2.0 * q[a] * hth[a + 1].v[k];
                ghph += 2.0 * q[a] * (hph[a + 1].v[k] * is);
            }
            const double term1 = gfth * ghph - gfph * ghth;  // u.(gf x gh)
            // <(i/hbar)[df, dh]> = -(4/hbar) q.(dfvec x dhvec)
            const double term2 = -(4.0 / hbar) * dot(q, cross(df.v[k].a, dh.v[k].a));
            dens.v[k] = (term1 - term2) * rho;
        }
    }
    return g.integrate(dens);
}

double Diagnostics::bracket_eval(const ObservableSpec& A, const OpField& P) const {
    return bracket_pair(A.eval_field(m_->grid()), functional_derivative_h(P), P);
}

double Diagnostics::bracket_hh(const OpField& P) const {
    const OpField dh = functional_derivative_h(P);
    return bracket_pair(dh, dh, P);
}

RealField Diagnostics::ehrenfest_identity_residual(const OpField& P) const {
    // Material-derivative identity for <sigma_x> under H = H0 + H_I sigma_x + gamma sigma_z:
    //   d_t<sx> + X.D<sx> = -(2 gamma/hbar)<sy> + (1/rho){rho(<sx>^2 - 1), H_I}
    // (constants re-derived from the model; the displayed form in the source
    // material normalizes them differently)
    const SphereGrid& g = m_->grid();
    const double hbar = m_->hbar();
    const HybridHamiltonian& H = m_->hamiltonian();
    if (!H.component(2).is_zero() || !H.component(3).is_constant())
        throw ContractViolation("identity residual requires a coupled Hamiltonian "
                                "H0 + H_I sigma_x + gamma sigma_z");
    const double gamma = H.component(3).c0;
    const std::size_t n = P.v.size();

    RhsAux aux;
    OpField dP = m_->nonlinear_rhs(P, &aux);

    RealField sx(g), sy(g), rho(g);
    for (std::size_t k = 0; k < n; ++k) {
        rho.v[k] = op_trace(P.v[k]);
        sx.v[k] = 2.0 * P.v[k].a.x / rho.v[k];
        sy.v[k] = 2.0 * P.v[k].a.y / rho.v[k];
    }
    RealField sxt = g.dtheta(sx), sxp = g.dphi(sx);

    // {rho (<sx>^2 - 1), H_I} with the analytic interaction gradient
    RealField w(g);
    for (std::size_t k = 0; k < n; ++k) w.v[k] = rho.v[k] * (sx.v[k] * sx.v[k] - 1.0);
    RealField wt = g.dtheta(w), wp = g.dphi(w);

    RealField res(g);
    for (int i = 0; i < g.n_theta(); ++i) {
        const double is = 1.0 / g.sin_theta(i);
        for (int j = 0; j < g.n_phi(); ++j) {
            const std::size_t k = g.index(i, j);
            const double dsx_dt =
                (2.0 * dP.v[k].a.x - sx.v[k] * op_trace(dP.v[k])) / rho.v[k];
            const double xth = dot(aux.X.v[k], g.e_theta(i, j));
            const double xph = dot(aux.X.v[k], g.e_phi(j));
            const double adv = xth * sxt.v[k] + xph * (sxp.v[k] * is);
            const double hth = dot(m_->ham_gradient(1).v[k], g.e_theta(i, j));
            const double hph = dot(m_->ham_gradient(1).v[k], g.e_phi(j));
            const double brk = wt.v[k] * hph - (wp.v[k] * is) * hth;  // {w, H_I}
            res.v[k] = dsx_dt + adv + (2.0 * gamma / hbar) * sy.v[k] - brk / rho.v[k];
        }
    }
    return res;
}

VecField Diagnostics::berry_connection(const SpinorField& psi) const {
    const SphereGrid& g = m_->grid();
    const double hbar = m_->hbar();
    ComplexField c0(g), c1(g);
    for (std::size_t k = 0; k < psi.v.size(); ++k) {
        c0.v[k] = psi.v[k].c0;
        c1.v[k] = psi.v[k].c1;
    }
    ComplexField c0t = g.dtheta(c0), c0p = g.dphi(c0);
    ComplexField c1t = g.dtheta(c1), c1p = g.dphi(c1);
    VecField out(g);
    for (int i = 0; i < g.n_theta(); ++i) {
        const double is = 1.0 / g.sin_theta(i);
        for (int j = 0; j < g.n_phi(); ++j) {
            const std::size_t k = g.index(i, j);
            const double ath =
                hbar * std::imag(std::conj(c0.v[k]) * c0t.v[k] + std::conj(c1.v[k]) * c1t.v[k]);
            const double aph = hbar * std::imag(std::conj(c0.v[k]) * (c0p.v[k] * is) +
                                                std::conj(c1.v[k]) * (c1p.v[k] * is));
            out.v[k] = ath * g.e_theta(i, j) + aph * g.e_phi(j);
        }
    }
    return out;
}

DiagnosticRecord Diagnostics::record(ModelKind kind, const ModelState& s, double t) const {
    const SphereGrid& g = m_->grid();
    DiagnosticRecord r;
    r.t = t;

    auto classical_stats = [&](const RealField& rho) {
        r.mass = g.integrate(rho);
        double mn = rho.v[0], mx = rho.v[0];
        VecField un(g);
        for (int i = 0; i < g.n_theta(); ++i)
            for (int j = 0; j < g.n_phi(); ++j) un(i, j) = rho(i, j) * g.node(i, j);
        r.mean_n = g.integrate(un);
        for (double x : rho.v) {
            mn = std::min(mn, x);
            mx = std::max(mx, x);
        }
        r.rho_min = mn;
        r.rho_max = mx;
    };

    switch (kind) {
        case ModelKind::liouville: {
            const auto& st = std::get<ClassicalDensityState>(s);
            classical_stats(st.rho);
            r.energy = energy_classical(st.rho);
            break;
        }
        case ModelKind::kvn:
        case ModelKind::kvh: {
            const auto& st = std::get<KoopmanState>(s);
            RealField rho(g);
            for (std::size_t k = 0; k < st.chi.v.size(); ++k) rho.v[k] = std::norm(st.chi.v[k]);
            classical_stats(rho);
            r.energy = energy_koopman(st.chi, kind == ModelKind::kvh);
            break;
        }
        case ModelKind::hybrid_kvh: {
            const auto& st = std::get<HybridSpinorState>(s);
            RealField rho(g);
            OpField uu(g);
            for (std::size_t k = 0; k < st.upsilon.v.size(); ++k) {
                uu.v[k] = projector(st.upsilon.v[k]);
                rho.v[k] = op_trace(uu.v[k]);
            }
            classical_stats(rho);
            r.energy = energy_hybrid_koopman(st.upsilon);
            r.rho_q = g.integrate_op(uu);
            r.purity = purity(r.rho_q);
            r.min_eig_rho_q = hermitian_eigenvalues(r.rho_q).second;
            break;
        }
        case ModelKind::ehrenfest: {
            const auto& st = std::get<FactoredState>(s);
            classical_stats(st.rho);
            r.energy = energy_factored(st.rho, st.psi);
            OpField P(g);
            for (std::size_t k = 0; k < st.rho.v.size(); ++k)
                P.v[k] = st.rho.v[k] * projector(st.psi.v[k]);
            r.rho_q = g.integrate_op(P);
            r.purity = purity(r.rho_q);
            r.min_eig_rho_q = hermitian_eigenvalues(r.rho_q).second;
            double drift = 0.0;
            for (const auto& p : st.psi.v) drift = std::max(drift, std::abs(norm2(p) - 1.0));
            r.psi_norm_drift = drift;
            double le = 0.0, lmax = 0.0;
            for (const auto& a : P.v) {
                const auto [lp, lm] = hermitian_eigenvalues(a);
                le = std::min(le, lm);
                lmax = std::max(lmax, lp);
            }
            r.min_eig_P = lmax > 0 ? le / lmax : 0.0;
            CasimirSpec cx{CasimirPhi::identity_x}, cx2{CasimirPhi::square_x},
                ce{CasimirPhi::neg_x_log_x};
            r.casimir_x = casimir(P, cx);
            r.casimir_x2 = casimir(P, cx2);
            r.casimir_entropy = casimir(P, ce);
            r.omega_casimir = omega_casimir(st.rho, st.psi, CasimirSpec{CasimirPhi::log_x});
            RhsAux aux;
            RealField drho;
            SpinorField dpsi;
            m_->ehrenfest_rhs(st.rho, st.psi, drho, dpsi, &aux);
            r.tangency_residual = g.tangency_residual(aux.X);
            break;
        }
        case ModelKind::nonlinear: {
            const auto& st = std::get<HybridDensityState>(s);
            RealField rho = classical_density(st.P);
            classical_stats(rho);
            auto [e2, e1] = energy_pair(st.P);
            r.energy = e2;
            (void)e1;
            r.rho_q = quantum_density_matrix(st.P);
            r.purity = purity(r.rho_q);
            r.min_eig_rho_q = hermitian_eigenvalues(r.rho_q).second;
            double le = 0.0, lmax = 0.0;
            for (const auto& a : st.P.v) {
                const auto [lp, lm] = hermitian_eigenvalues(a);
                le = std::min(le, lm);
                lmax = std::max(lmax, lp);
            }
            r.min_eig_P = lmax > 0 ? le / lmax : 0.0;
            CasimirSpec cx{CasimirPhi::identity_x}, cx2{CasimirPhi::square_x},
                ce{CasimirPhi::neg_x_log_x};
            r.casimir_x = casimir(st.P, cx);
            r.casimir_x2 = casimir(st.P, cx2);
            r.casimir_entropy = casimir(st.P, ce);
            r.omega_casimir = omega_casimir(st.P, CasimirSpec{CasimirPhi::log_x});
            RhsAux aux;
            m_->nonlinear_rhs(st.P, &aux);
            r.tangency_residual = g.tangency_residual(aux.X);
            break;
        }
    }
    return r;
}

}  // namespace hybridspin
