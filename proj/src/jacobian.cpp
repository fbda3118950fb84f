#include "dot/jacobian.hpp"

#include <stdexcept>

namespace dot {

namespace {

struct PairContext {
    const FemGeometry& geo;
    const Eigen::VectorXd& kappa2_dim;           // dim * kappa_j^2 per node
    const std::vector<Eigen::Matrix2Xcd>& gphi;  // per source: element gradients
    const std::vector<Eigen::Matrix2Xcd>& gpsi;  // per detector: element gradients
};

// One row pair of the Jacobian: d(log|Gamma|)/dx = Re(Gamma'/Gamma),
// d(arg Gamma)/dx = Im(Gamma'/Gamma), with
// Gamma' = -Psi^T (dK/dx_j) Phi accumulated element-wise.
using RowRef = Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

void pair_rows(const PairContext& ctx, int n, const Eigen::VectorXcd& phi,
               const Eigen::VectorXcd& psi, const Eigen::Matrix2Xcd& gphi,
               const Eigen::Matrix2Xcd& gpsi, Complex gamma, RowRef row_logamp,
               RowRef row_phase) {
    Eigen::VectorXcd dgamma = Eigen::VectorXcd::Zero(2 * n);
    const int ne = static_cast<int>(ctx.geo.elements.size());
    for (int e = 0; e < ne; ++e) {
        const auto& el = ctx.geo.elements[e];
        // bilinear (unconjugated) product, matching the complex symmetric form
        const Complex grad_dot = gphi.col(e).cwiseProduct(gpsi.col(e)).sum();
        const Complex stiff_base = (el.area / 3.0) * grad_dot;
        const Complex p0 = phi[el.v[0]], p1 = phi[el.v[1]], p2 = phi[el.v[2]];
        const Complex a0 = psi[el.v[0]], a1 = psi[el.v[1]], a2 = psi[el.v[2]];
        const Complex cross01 = p0 * a1 + p1 * a0;
        const Complex cross02 = p0 * a2 + p2 * a0;
        const Complex cross12 = p1 * a2 + p2 * a1;
        const Complex self0 = p0 * a0, self1 = p1 * a1, self2 = p2 * a2;
        const double w = el.area / 60.0;
        // int_T basis_j Phi Psi for each local j, by the cubic integral table
        const Complex mass[3] = {
            w * (6.0 * self0 + 2.0 * (cross01 + cross02) + 2.0 * (self1 + self2) + cross12),
            w * (6.0 * self1 + 2.0 * (cross01 + cross12) + 2.0 * (self0 + self2) + cross02),
            w * (6.0 * self2 + 2.0 * (cross02 + cross12) + 2.0 * (self0 + self1) + cross01)};
        for (int i = 0; i < 3; ++i) {
            const int v = el.v[i];
            const Complex stiff_sens = ctx.kappa2_dim[v] * stiff_base;
            dgamma[v] += stiff_sens - mass[i];  // mua: kappa chain + direct mass
            dgamma[n + v] += stiff_sens;        // mus': kappa chain only
        }
    }
    const Complex inv_gamma = 1.0 / gamma;
    for (int j = 0; j < 2 * n; ++j) {
        const Complex r = dgamma[j] * inv_gamma;
        row_logamp[j] = r.real();
        row_phase[j] = r.imag();
    }
}

Eigen::MatrixXd assemble_impl(const DotForward& fwd, const Eigen::VectorXd& x,
                              const ForwardState& state, bool parallel) {
    const TriMesh& mesh = fwd.mesh();
    const int n = mesh.n();
    if (x.size() != 2 * n)
        throw std::invalid_argument("assemble_jacobian: parameter length mismatch");
    const int n_src = fwd.layout().n_src();
    const int n_det = fwd.layout().n_det();
    if (state.phi.cols() != n_src || state.psi.cols() != n_det || state.phi.rows() != n)
        throw std::invalid_argument("assemble_jacobian: state does not match layout");

    const FemGeometry& geo = fwd.geometry();
    const int ne = static_cast<int>(geo.elements.size());
    const int dim = fwd.physics().dim;

    Eigen::VectorXd kappa2_dim(n);
    for (int v = 0; v < n; ++v) {
        const double kappa = 1.0 / (dim * (x[v] + x[n + v]));
        kappa2_dim[v] = dim * kappa * kappa;
    }

    // Element gradients of every source and adjoint field, shared by all pairs.
    std::vector<Eigen::Matrix2Xcd> gphi(n_src, Eigen::Matrix2Xcd(2, ne));
    std::vector<Eigen::Matrix2Xcd> gpsi(n_det, Eigen::Matrix2Xcd(2, ne));
    for (int e = 0; e < ne; ++e) {
        const auto& el = geo.elements[e];
        for (int s = 0; s < n_src; ++s)
            gphi[s].col(e) = el.grad.col(0) * state.phi(el.v[0], s) +
                             el.grad.col(1) * state.phi(el.v[1], s) +
                             el.grad.col(2) * state.phi(el.v[2], s);
        for (int d = 0; d < n_det; ++d)
            gpsi[d].col(e) = el.grad.col(0) * state.psi(el.v[0], d) +
                             el.grad.col(1) * state.psi(el.v[1], d) +
                             el.grad.col(2) * state.psi(el.v[2], d);
    }

    const PairContext ctx{geo, kappa2_dim, gphi, gpsi};
    Eigen::MatrixXd J(2 * n_src * n_det, 2 * n);
    const int pairs = n_src * n_det;
#pragma omp parallel for schedule(static) if (parallel)
    for (int pd = 0; pd < pairs; ++pd) {
        const int s = pd / n_det, d = pd % n_det;
        pair_rows(ctx, n, state.phi.col(s), state.psi.col(d), gphi[s], gpsi[d],
                  state.gamma(s, d), J.row(pd), J.row(pairs + pd));
    }
    return J;
}

}  // namespace

Eigen::MatrixXd assemble_jacobian(const DotForward& fwd, const Eigen::VectorXd& x,
                                  const ForwardState& state) {
    return assemble_impl(fwd, x, state, true);
}

Eigen::MatrixXd assemble_jacobian_serial(const DotForward& fwd, const Eigen::VectorXd& x,
                                         const ForwardState& state) {
    return assemble_impl(fwd, x, state, false);
}

Eigen::MatrixXd DotForward::jacobian(const Eigen::VectorXd& x) const {
    return assemble_jacobian(*this, x, solve_state(x));
}

}  // namespace dot
