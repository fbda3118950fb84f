#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dot/forward.hpp"
#include "dot/prior.hpp"

namespace dot {

struct SolverConfig {
    double eps_outer = 1e-5;  // relative-change stopping tolerance
    int outer_patience = 3;
    double gn_tol = 1e-12;  // inner F-decrease threshold
    int max_outer = 100;
    int max_inner = 50;
    int max_halvings = 25;
    double constraint_sigma = 0.0;  // 0 -> auto from theta0

    void validate() const;
};

struct ClassSpecs {
    HyperpriorSpec abs;
    HyperpriorSpec scat;
    bool all_fixed() const {
        return abs.kind == HyperpriorKind::Fixed && scat.kind == HyperpriorKind::Fixed;
    }
};

/// Full objective: data misfit + prior quadratic + loop-constraint penalty +
/// variance terms. Entries with fixed variances contribute only the
/// normalization log.
double eval_objective(const Eigen::VectorXd& u, const Eigen::VectorXd& theta,
                      const MeasurementSet& data, const ForwardOperator& fwd,
                      const EstimationProblem& prob, const ClassSpecs& specs);

/// Variance part of the objective (no data or prior quadratic terms).
double hyper_terms(const Eigen::VectorXd& theta, const EstimationProblem& prob,
                   const ClassSpecs& specs);

struct GNResult {
    Eigen::VectorXd u;
    double F = 0.0;
    int inner_iters = 0;
    bool line_search_warning = false;
};

/// Minimizes the objective over u at fixed variances: damped Gauss-Newton
/// with bisection backtracking from step 1 and positivity floors taken from
/// the forward operator.
GNResult gauss_newton_solve(const Eigen::VectorXd& u0, const Eigen::VectorXd& theta,
                            const MeasurementSet& data, const ForwardOperator& fwd,
                            const EstimationProblem& prob, const ClassSpecs& specs,
                            const SolverConfig& cfg);

struct IASState {
    Eigen::VectorXd u;
    Eigen::VectorXd theta;
    int t = 0;
    std::vector<double> F_history;
    std::vector<double> rel_change;
    std::vector<int> inner_iters;
    std::vector<double> wall_seconds;
    std::vector<Eigen::VectorXd> x_iterates;  // x-space snapshots incl. the start
    bool converged = false;
    std::string reason;
};

struct WarmStart {
    Eigen::VectorXd u;
    Eigen::VectorXd theta;
};

/// Alternates the Gauss-Newton x-step with the closed-form variance update.
/// With all-fixed variances this is a single x-solve. A warm start resumes
/// from a previous state instead of the prior mean.
IASState ias_run(const MeasurementSet& data, const ForwardOperator& fwd,
                 const EstimationProblem& prob, const ClassSpecs& specs,
                 const SolverConfig& cfg, const WarmStart* warm = nullptr);

struct ConvergenceReport {
    std::vector<std::pair<double, double>> pairs;  // (e_i, e_{i+1})
    double rate = 0.0;  // exp of the LS slope of log e_i against i
};

/// Error sequence e_i = ||x_i - x_map|| and its fitted geometric rate.
/// Entries at or below machine zero are dropped from the fit.
ConvergenceReport convergence_report(const std::vector<Eigen::VectorXd>& iterates,
                                     const Eigen::VectorXd& x_map);

void save_convergence_csv(const ConvergenceReport& rep, const std::string& path);
void save_iteration_log_csv(const IASState& state, const std::string& path);

}  // namespace dot
