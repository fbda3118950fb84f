#include "dot/forward.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dot {

FemGeometry FemGeometry::build(const TriMesh& mesh) {
    FemGeometry geo;
    geo.elements.resize(mesh.element_count());
    for (int e = 0; e < mesh.element_count(); ++e) {
        auto& el = geo.elements[e];
        el.v = mesh.elements[e];
        const Eigen::Vector2d& a = mesh.nodes[el.v[0]];
        const Eigen::Vector2d& b = mesh.nodes[el.v[1]];
        const Eigen::Vector2d& c = mesh.nodes[el.v[2]];
        el.area = mesh.element_area(e);
        const double inv2a = 1.0 / (2.0 * el.area);
        // grad phi_i is the rotated opposite edge over twice the area
        el.grad.col(0) = Eigen::Vector2d(b.y() - c.y(), c.x() - b.x()) * inv2a;
        el.grad.col(1) = Eigen::Vector2d(c.y() - a.y(), a.x() - c.x()) * inv2a;
        el.grad.col(2) = Eigen::Vector2d(a.y() - b.y(), b.x() - a.x()) * inv2a;
    }
    return geo;
}

SparseC assemble_system(const TriMesh& mesh, const FemGeometry& geo,
                        const OpticalField& field, const SourceDetectorLayout& layout,
                        const PhysicsConstants& phys) {
    if (field.n() != mesh.n())
        throw std::invalid_argument("assemble_system: field length does not match mesh");
    if (!field.positive())
        throw std::invalid_argument("assemble_system: optical values must be positive");

    const int n = mesh.n();
    const Complex jw_c(0.0, layout.omega / phys.c);
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(geo.elements.size() * 9 + mesh.boundary_edges.size() * 4);

    for (const auto& el : geo.elements) {
        double kappa[3], mua[3];
        for (int i = 0; i < 3; ++i) {
            const int v = el.v[i];
            mua[i] = field.mua[v];
            kappa[i] = 1.0 / (phys.dim * (field.mua[v] + field.mus[v]));
        }
        const double kbar = (kappa[0] + kappa[1] + kappa[2]) / 3.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double stiff = kbar * el.area * el.grad.col(i).dot(el.grad.col(j));
                // mass with piecewise-linear mua: exact cubic integrals
                // int phi_i phi_j phi_k = area/60 * {6: i=j=k, 2: two equal, 1: distinct}
                double mass_mua = 0.0;
                for (int k = 0; k < 3; ++k) {
                    double w;
                    if (i == j && j == k)
                        w = 6.0;
                    else if (i == j || j == k || i == k)
                        w = 2.0;
                    else
                        w = 1.0;
                    mass_mua += mua[k] * w;
                }
                mass_mua *= el.area / 60.0;
                const double mass = (i == j) ? el.area / 6.0 : el.area / 12.0;
                trip.emplace_back(el.v[i], el.v[j], Complex(stiff + mass_mua, 0.0) + jw_c * mass);
            }
    }

    const double bcoef = 2.0 * phys.zeta / phys.alpha;
    for (const auto& be : mesh.boundary_edges) {
        const double l = (mesh.nodes[be[1]] - mesh.nodes[be[0]]).norm();
        trip.emplace_back(be[0], be[0], Complex(bcoef * l / 3.0, 0.0));
        trip.emplace_back(be[1], be[1], Complex(bcoef * l / 3.0, 0.0));
        trip.emplace_back(be[0], be[1], Complex(bcoef * l / 6.0, 0.0));
        trip.emplace_back(be[1], be[0], Complex(bcoef * l / 6.0, 0.0));
    }

    SparseC K(n, n);
    K.setFromTriplets(trip.begin(), trip.end());
    return K;
}

Eigen::MatrixXcd solve_complex_system(const SparseC& K, const Eigen::MatrixXcd& B) {
    Eigen::SparseLU<SparseC> lu;
    lu.compute(K);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("solve_complex_system: factorization failed (matrix singular?)");
    Eigen::MatrixXcd X = lu.solve(B);
    const double rel_residual = (K * X - B).norm() / B.norm();
    if (!(rel_residual < 1e-8)) {
        std::ostringstream msg;
        msg << "solve_complex_system: ill-conditioned solve, relative residual "
            << rel_residual;
        throw std::runtime_error(msg.str());
    }
    return X;
}

MeasurementSet extract_measurements(const Eigen::MatrixXcd& gamma, double omega) {
    MeasurementSet data;
    data.n_src = static_cast<int>(gamma.rows());
    data.n_det = static_cast<int>(gamma.cols());
    data.y.resize(data.m());
    const double pi = std::numbers::pi;
    for (int s = 0; s < data.n_src; ++s) {
        double prev = 0.0;
        for (int d = 0; d < data.n_det; ++d) {
            const Complex g = gamma(s, d);
            if (!(std::abs(g) > 0.0))
                throw std::runtime_error("extract_measurements: zero exitance at detector " +
                                         std::to_string(d));
            data.y[data.logamp_index(s, d)] = std::log(std::abs(g));
            double ph = (omega == 0.0) ? 0.0 : std::arg(g);
            if (d > 0) {  // keep the per-source phase profile continuous
                ph += 2.0 * pi * std::round((prev - ph) / (2.0 * pi));
                if (!(std::abs(ph - prev) < pi))
                    throw std::runtime_error(
                        "extract_measurements: ambiguous phase jump between adjacent detectors");
            }
            data.y[data.phase_index(s, d)] = ph;
            prev = ph;
        }
    }
    return data;
}

DotForward::DotForward(TriMesh mesh, SourceDetectorLayout layout, PhysicsConstants phys,
                       double floor_mua, double floor_mus)
    : mesh_(std::move(mesh)),
      layout_(std::move(layout)),
      phys_(phys),
      geo_(FemGeometry::build(mesh_)),
      floor_mua_(floor_mua),
      floor_mus_(floor_mus) {
    b_.resize(mesh_.n(), layout_.n_src());
    for (int s = 0; s < layout_.n_src(); ++s)
        b_.col(s) = patch_basis_integrals(mesh_, layout_.sources[s],
                                          layout_.strength / phys_.zeta);
    m_.resize(mesh_.n(), layout_.n_det());
    for (int d = 0; d < layout_.n_det(); ++d)
        m_.col(d) = patch_basis_integrals(mesh_, layout_.detectors[d],
                                          2.0 * phys_.zeta / phys_.alpha);
}

Eigen::VectorXd DotForward::lower_bounds() const {
    Eigen::VectorXd lb(param_dim());
    lb.head(mesh_.n()).setConstant(floor_mua_);
    lb.tail(mesh_.n()).setConstant(floor_mus_);
    return lb;
}

const ForwardState& DotForward::solve_state(const Eigen::VectorXd& x) const {
    if (cached_x_.size() == x.size() && cached_x_ == x) return state_;
    const OpticalField field = OpticalField::from_stacked(x);
    const SparseC K = assemble_system(mesh_, geo_, field, layout_, phys_);

    Eigen::SparseLU<SparseC> lu;
    lu.compute(K);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("DotForward: factorization failed (matrix singular?)");

    Eigen::MatrixXcd rhs(mesh_.n(), layout_.n_src() + layout_.n_det());
    rhs << b_.cast<Complex>(), m_.cast<Complex>();
    Eigen::MatrixXcd sol = lu.solve(rhs);
    const double rel_residual = (K * sol - rhs).norm() / rhs.norm();
    if (!(rel_residual < 1e-8)) {
        std::ostringstream msg;
        msg << "DotForward: ill-conditioned solve, relative residual " << rel_residual;
        throw std::runtime_error(msg.str());
    }

    state_.phi = sol.leftCols(layout_.n_src());
    state_.psi = sol.rightCols(layout_.n_det());
    // K is complex symmetric, so the adjoint solve reuses the same factors.
    state_.gamma = (m_.cast<Complex>().transpose() * state_.phi).transpose();
    cached_x_ = x;
    return state_;
}

MeasurementSet DotForward::measure(const Eigen::VectorXd& x) const {
    const ForwardState& st = solve_state(x);
    return extract_measurements(st.gamma, layout_.omega);
}

Eigen::VectorXd DotForward::evaluate(const Eigen::VectorXd& x) const {
    return measure(x).y;
}

}  // namespace dot
