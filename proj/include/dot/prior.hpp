#pragma once

#include <memory>

#include <Eigen/Sparse>

#include "dot/difference.hpp"
#include "dot/hypermodels.hpp"

namespace dot {

/// Prior over the stacked optical parameters: either per-node independent
/// Gaussians or Gaussians on the edge differences (with a gauge entry per
/// class carrying the background level).
struct PriorModel {
    enum class Kind { Uncorrelated, Difference };
    Kind kind = Kind::Uncorrelated;
    double mean_mua = 0.01;
    double mean_mus = 1.0;
    double theta0_mua = 0.0025 * 0.0025;
    double theta0_mus = 0.25 * 0.25;
    double gauge_variance = 1e6;
    std::shared_ptr<const DifferenceStructure> structure;  // difference mode only
};

/// The unknown-space view the solver works in: u is x itself (uncorrelated)
/// or the stacked difference vector d (difference mode, with the loop
/// constraint attached).
struct EstimationProblem {
    PriorModel::Kind kind = PriorModel::Kind::Uncorrelated;
    int dim = 0;
    int half = 0;  // entries per parameter class
    Eigen::SparseMatrix<double> to_x;        // 2n x dim
    Eigen::SparseMatrix<double> constraint;  // 2p x dim; zero rows when unused
    Eigen::VectorXd mu;                      // prior mean in u-space
    Eigen::VectorXd theta0;
    std::vector<bool> theta_fixed;           // gauge entries
    double constraint_sigma = 0.0;           // epsilon_c; 0 when no constraint

    Eigen::VectorXd map_to_x(const Eigen::VectorXd& u) const { return to_x * u; }
    bool has_constraint() const { return constraint.rows() > 0; }
};

/// Builds the solver-facing problem for a mesh with n nodes.
/// constraint_sigma = 0 resolves to 1e-6 * sqrt(median theta0).
EstimationProblem build_problem(const PriorModel& prior, int n_nodes,
                                double constraint_sigma = 0.0);

}  // namespace dot
