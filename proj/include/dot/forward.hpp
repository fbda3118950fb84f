#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "dot/field.hpp"
#include "dot/layout.hpp"
#include "dot/measurement.hpp"
#include "dot/mesh.hpp"
#include "dot/physics.hpp"

namespace dot {

using Complex = std::complex<double>;
using SparseC = Eigen::SparseMatrix<Complex>;

/// Generic forward operator for the estimation stack; lets the solver run
/// against either the FE model or a linear surrogate.
class ForwardOperator {
public:
    virtual ~ForwardOperator() = default;
    virtual int data_dim() const = 0;
    virtual int param_dim() const = 0;
    virtual Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const = 0;
    virtual Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const = 0;
    /// Lowest admissible value per parameter entry (positivity floors).
    virtual Eigen::VectorXd lower_bounds() const {
        return Eigen::VectorXd::Constant(param_dim(),
                                         -std::numeric_limits<double>::infinity());
    }
};

/// A(x) = A x: the linear test surrogate.
class LinearForward final : public ForwardOperator {
public:
    explicit LinearForward(Eigen::MatrixXd a) : a_(std::move(a)) {}
    int data_dim() const override { return static_cast<int>(a_.rows()); }
    int param_dim() const override { return static_cast<int>(a_.cols()); }
    Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const override { return a_ * x; }
    Eigen::MatrixXd jacobian(const Eigen::VectorXd&) const override { return a_; }
    const Eigen::MatrixXd& matrix() const { return a_; }

private:
    Eigen::MatrixXd a_;
};

/// Per-element geometry shared by assembly, the Jacobian and measurement
/// extraction.
struct FemGeometry {
    struct Element {
        std::array<int, 3> v;
        double area;
        Eigen::Matrix<double, 2, 3> grad;  // gradients of the three P1 basis fns
    };
    std::vector<Element> elements;
    static FemGeometry build(const TriMesh& mesh);
};

/// System matrix of the frequency-domain diffusion model:
/// K = K_kappa + K_mua + (j omega / c) M + (2 zeta / alpha) M_boundary,
/// with kappa = 1/(dim (mua + mus')) as a piecewise-linear nodal coefficient.
/// Complex symmetric (not Hermitian).
SparseC assemble_system(const TriMesh& mesh, const FemGeometry& geo,
                        const OpticalField& field, const SourceDetectorLayout& layout,
                        const PhysicsConstants& phys);

/// Factorized state at one optical field; reused by measurement and Jacobian.
struct ForwardState {
    Eigen::MatrixXcd phi;  // n x n_src photon density
    Eigen::MatrixXcd psi;  // n x n_det adjoint fields
    Eigen::MatrixXcd gamma;  // n_src x n_det complex exitance
};

/// The FE forward operator mapping stacked (mua, mus') to
/// [log-amplitude; phase] data.
class DotForward final : public ForwardOperator {
public:
    DotForward(TriMesh mesh, SourceDetectorLayout layout, PhysicsConstants phys,
               double floor_mua = 1e-5, double floor_mus = 1e-2);

    int data_dim() const override { return layout_.data_size(); }
    int param_dim() const override { return 2 * mesh_.n(); }
    Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const override;
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const override;
    Eigen::VectorXd lower_bounds() const override;

    MeasurementSet measure(const Eigen::VectorXd& x) const;
    const ForwardState& solve_state(const Eigen::VectorXd& x) const;

    const TriMesh& mesh() const { return mesh_; }
    const SourceDetectorLayout& layout() const { return layout_; }
    const PhysicsConstants& physics() const { return phys_; }
    const FemGeometry& geometry() const { return geo_; }
    const Eigen::MatrixXd& source_loads() const { return b_; }
    const Eigen::MatrixXd& detector_weights() const { return m_; }

private:
    TriMesh mesh_;
    SourceDetectorLayout layout_;
    PhysicsConstants phys_;
    FemGeometry geo_;
    Eigen::MatrixXd b_;  // n x n_src boundary loads, strength q/zeta
    Eigen::MatrixXd m_;  // n x n_det exitance weights, 2 zeta/alpha
    double floor_mua_, floor_mus_;

    mutable Eigen::VectorXd cached_x_;
    mutable ForwardState state_;
};

/// Solves K Phi = B for a set of right-hand sides with a sparse direct
/// factorization; throws with a condition diagnostic when the solve is
/// unreliable.
Eigen::MatrixXcd solve_complex_system(const SparseC& K, const Eigen::MatrixXcd& B);

/// Extracts [log|Gamma|; unwrapped arg Gamma] from per-pair exitance, in
/// source-major order.
MeasurementSet extract_measurements(const Eigen::MatrixXcd& gamma, double omega);

}  // namespace dot
