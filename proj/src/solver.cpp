#include "dot/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dot {

void SolverConfig::validate() const {
    if (!(eps_outer > 0.0) || !(gn_tol > 0.0) || outer_patience < 1 || max_outer < 1 ||
        max_inner < 1 || max_halvings < 1 || constraint_sigma < 0.0)
        throw std::invalid_argument("SolverConfig: tolerances and caps must be positive");
}

EstimationProblem build_problem(const PriorModel& prior, int n_nodes,
                                double constraint_sigma) {
    EstimationProblem prob;
    prob.kind = prior.kind;
    if (prior.kind == PriorModel::Kind::Uncorrelated) {
        prob.half = n_nodes;
        prob.dim = 2 * n_nodes;
        prob.to_x.resize(prob.dim, prob.dim);
        prob.to_x.setIdentity();
        prob.constraint.resize(0, prob.dim);
        prob.mu.resize(prob.dim);
        prob.mu.head(n_nodes).setConstant(prior.mean_mua);
        prob.mu.tail(n_nodes).setConstant(prior.mean_mus);
        prob.theta0.resize(prob.dim);
        prob.theta0.head(n_nodes).setConstant(prior.theta0_mua);
        prob.theta0.tail(n_nodes).setConstant(prior.theta0_mus);
        prob.theta_fixed.assign(prob.dim, false);
        prob.constraint_sigma = 0.0;
        return prob;
    }

    if (!prior.structure)
        throw std::invalid_argument("build_problem: difference prior needs a structure");
    const DifferenceStructure& ds = *prior.structure;
    const int q = ds.q(), p = ds.p();
    if (ds.B.cols() != n_nodes)
        throw std::invalid_argument("build_problem: structure does not match mesh");
    prob.half = q;
    prob.dim = 2 * q;

    // block-diagonal P and M over the two parameter classes
    std::vector<Eigen::Triplet<double>> tx, tc;
    for (int k = 0; k < ds.P.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(ds.P, k); it; ++it) {
            tx.emplace_back(it.row(), it.col(), it.value());
            tx.emplace_back(n_nodes + it.row(), q + it.col(), it.value());
        }
    prob.to_x.resize(2 * n_nodes, prob.dim);
    prob.to_x.setFromTriplets(tx.begin(), tx.end());
    for (int k = 0; k < ds.M.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(ds.M, k); it; ++it) {
            tc.emplace_back(it.row(), it.col(), it.value());
            tc.emplace_back(p + it.row(), q + it.col(), it.value());
        }
    prob.constraint.resize(2 * p, prob.dim);
    prob.constraint.setFromTriplets(tc.begin(), tc.end());

    prob.mu = Eigen::VectorXd::Zero(prob.dim);
    prob.mu[ds.gauge_index] = prior.mean_mua;
    prob.mu[q + ds.gauge_index] = prior.mean_mus;
    prob.theta0.resize(prob.dim);
    prob.theta0.head(q).setConstant(prior.theta0_mua);
    prob.theta0.tail(q).setConstant(prior.theta0_mus);
    prob.theta0[ds.gauge_index] = prior.gauge_variance;
    prob.theta0[q + ds.gauge_index] = prior.gauge_variance;
    prob.theta_fixed.assign(prob.dim, false);
    prob.theta_fixed[ds.gauge_index] = true;
    prob.theta_fixed[q + ds.gauge_index] = true;

    if (constraint_sigma > 0.0) {
        prob.constraint_sigma = constraint_sigma;
    } else {
        Eigen::VectorXd sorted = prob.theta0;
        std::nth_element(sorted.data(), sorted.data() + sorted.size() / 2,
                         sorted.data() + sorted.size());
        prob.constraint_sigma = 1e-6 * std::sqrt(sorted[sorted.size() / 2]);
    }
    return prob;
}

double hyper_terms(const Eigen::VectorXd& theta, const EstimationProblem& prob,
                   const ClassSpecs& specs) {
    double sum = 0.0;
    for (int j = 0; j < prob.dim; ++j) {
        if (!(theta[j] > 0.0))
            throw std::invalid_argument("hyper_terms: nonpositive variance");
        if (prob.theta_fixed[j]) {
            sum += 0.5 * std::log(theta[j]);
        } else {
            const HyperpriorSpec& spec = j < prob.half ? specs.abs : specs.scat;
            sum += hyper_entry_term(theta[j], spec);
        }
    }
    return sum;
}

double eval_objective(const Eigen::VectorXd& u, const Eigen::VectorXd& theta,
                      const MeasurementSet& data, const ForwardOperator& fwd,
                      const EstimationProblem& prob, const ClassSpecs& specs) {
    if (!data.has_noise())
        throw std::invalid_argument("eval_objective: measurement set has no noise model");
    const Eigen::VectorXd r = data.y - fwd.evaluate(prob.map_to_x(u));
    double F = 0.5 * (r.array().square() / data.ce_diag.array()).sum();
    const Eigen::VectorXd z = u - prob.mu;
    F += 0.5 * (z.array().square() / theta.array()).sum();
    if (prob.has_constraint()) {
        const double ec2 = prob.constraint_sigma * prob.constraint_sigma;
        F += 0.5 * (prob.constraint * u).squaredNorm() / ec2;
    }
    F += hyper_terms(theta, prob, specs);
    return F;
}

GNResult gauss_newton_solve(const Eigen::VectorXd& u0, const Eigen::VectorXd& theta,
                            const MeasurementSet& data, const ForwardOperator& fwd,
                            const EstimationProblem& prob, const ClassSpecs& specs,
                            const SolverConfig& cfg) {
    cfg.validate();
    const Eigen::VectorXd w = data.ce_diag.cwiseInverse();
    const Eigen::VectorXd lb = fwd.lower_bounds();
    Eigen::SparseMatrix<double> ctc;
    double inv_ec2 = 0.0;
    if (prob.has_constraint()) {
        inv_ec2 = 1.0 / (prob.constraint_sigma * prob.constraint_sigma);
        ctc = Eigen::SparseMatrix<double>(prob.constraint.transpose()) * prob.constraint;
    }

    GNResult res;
    res.u = u0;
    res.F = eval_objective(res.u, theta, data, fwd, prob, specs);

    for (int it = 0; it < cfg.max_inner; ++it) {
        const Eigen::VectorXd x = prob.map_to_x(res.u);
        const Eigen::VectorXd r = data.y - fwd.evaluate(x);
        const Eigen::MatrixXd Ju = fwd.jacobian(x) * prob.to_x;

        auto build_normal_matrix = [&] {
            Eigen::MatrixXd H = Ju.transpose() * w.asDiagonal() * Ju;
            H.diagonal() += theta.cwiseInverse();
            if (prob.has_constraint()) H += inv_ec2 * ctc;
            return H;
        };
        Eigen::MatrixXd H = build_normal_matrix();
        Eigen::VectorXd g = Ju.transpose() * (w.asDiagonal() * r);
        g -= (res.u - prob.mu).cwiseQuotient(theta);
        if (prob.has_constraint()) g -= inv_ec2 * (ctc * res.u);

        // Jacobi scaling keeps the factorization stable when the constraint
        // penalty dominates; factorize in place to avoid further dense
        // copies at difference-mode sizes.
        const Eigen::VectorXd s = H.diagonal().cwiseSqrt().cwiseInverse();
        H.array() *= (s * s.transpose()).array();
        Eigen::VectorXd delta;
        {
            Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(H);
            if (llt.info() == Eigen::Success) {
                delta = s.asDiagonal() * llt.solve(s.cwiseProduct(g));
            } else {
                H = build_normal_matrix();  // clobbered by the in-place attempt
                H.array() *= (s * s.transpose()).array();
                Eigen::LDLT<Eigen::Ref<Eigen::MatrixXd>> ldlt(H);
                if (ldlt.info() != Eigen::Success)
                    throw std::runtime_error(
                        "gauss_newton_solve: normal-equation solve failed");
                delta = s.asDiagonal() * ldlt.solve(s.cwiseProduct(g));
            }
        }

        // Bisection backtracking from step 1; steps must keep the optical
        // values above their floors.
        double step = 1.0;
        bool accepted = false;
        double F_new = res.F;
        Eigen::VectorXd u_new;
        for (int h = 0; h <= cfg.max_halvings; ++h, step *= 0.5) {
            u_new = res.u + step * delta;
            const Eigen::VectorXd x_new = prob.map_to_x(u_new);
            if (((x_new - lb).array() < 0.0).any()) continue;
            const double F_try = eval_objective(u_new, theta, data, fwd, prob, specs);
            if (F_try < res.F) {
                accepted = true;
                F_new = F_try;
                break;
            }
        }
        if (!accepted) {
            res.line_search_warning = true;
            break;
        }
        const double decrease = res.F - F_new;
        res.u = u_new;
        res.F = F_new;
        ++res.inner_iters;
        if (decrease < cfg.gn_tol) break;
    }
    return res;
}

IASState ias_run(const MeasurementSet& data, const ForwardOperator& fwd,
                 const EstimationProblem& prob, const ClassSpecs& specs,
                 const SolverConfig& cfg, const WarmStart* warm) {
    cfg.validate();
    specs.abs.validate();
    specs.scat.validate();
    using clock = std::chrono::steady_clock;

    IASState st;
    st.u = warm ? warm->u : prob.mu;
    st.theta = warm ? warm->theta : prob.theta0;
    st.x_iterates.push_back(prob.map_to_x(st.u));

    if (specs.all_fixed()) {
        const auto t0 = clock::now();
        GNResult gn = gauss_newton_solve(st.u, st.theta, data, fwd, prob, specs, cfg);
        st.u = gn.u;
        st.t = 1;
        st.F_history.push_back(gn.F);
        st.inner_iters.push_back(gn.inner_iters);
        st.rel_change.push_back(0.0);
        st.wall_seconds.push_back(std::chrono::duration<double>(clock::now() - t0).count());
        st.x_iterates.push_back(prob.map_to_x(st.u));
        st.converged = true;
        st.reason = "fixed variances: single solve";
        return st;
    }

    int stall_rel = 0, stall_f = 0;
    double F_prev = std::numeric_limits<double>::infinity();
    for (int t = 0; t < cfg.max_outer; ++t) {
        const auto t0 = clock::now();
        const Eigen::VectorXd x_old = prob.map_to_x(st.u);

        GNResult gn;
        try {
            gn = gauss_newton_solve(st.u, st.theta, data, fwd, prob, specs, cfg);
        } catch (const std::exception& e) {
            throw std::runtime_error("ias_run: outer iteration " + std::to_string(t + 1) +
                                     ": " + e.what());
        }
        st.u = gn.u;

        // closed-form variance update (exact argmin of the theta part)
        Eigen::VectorXd theta_new = st.theta;
        const Eigen::VectorXd z = st.u - prob.mu;
        for (int j = 0; j < prob.dim; ++j) {
            if (prob.theta_fixed[j]) continue;
            const HyperpriorSpec& spec = j < prob.half ? specs.abs : specs.scat;
            theta_new[j] = update_theta(z[j], spec, st.theta[j]);
        }
        const double F_new = eval_objective(st.u, theta_new, data, fwd, prob, specs);
        if (F_new > gn.F + 1e-10 * std::abs(gn.F))
            throw std::logic_error("ias_run: variance update raised the objective");
        st.theta = theta_new;

        const Eigen::VectorXd x_new = prob.map_to_x(st.u);
        const double rel = (x_old - x_new).norm() / x_old.norm();
        st.t = t + 1;
        st.F_history.push_back(F_new);
        st.rel_change.push_back(rel);
        st.inner_iters.push_back(gn.inner_iters);
        st.wall_seconds.push_back(std::chrono::duration<double>(clock::now() - t0).count());
        st.x_iterates.push_back(x_new);

        stall_rel = rel < cfg.eps_outer ? stall_rel + 1 : 0;
        stall_f = F_new >= F_prev ? stall_f + 1 : 0;
        F_prev = F_new;
        if (stall_rel >= cfg.outer_patience) {
            st.converged = true;
            st.reason = "relative change below tolerance";
            break;
        }
        if (stall_f >= cfg.outer_patience) {
            st.converged = true;
            st.reason = "objective stopped decreasing";
            break;
        }
    }
    if (!st.converged) st.reason = "outer iteration cap reached";
    return st;
}

ConvergenceReport convergence_report(const std::vector<Eigen::VectorXd>& iterates,
                                     const Eigen::VectorXd& x_map) {
    if (iterates.size() < 3)
        throw std::invalid_argument("convergence_report: need at least 3 iterates");
    std::vector<double> e;
    for (const auto& x : iterates) {
        const double err = (x - x_map).norm();
        if (!(err > 0.0)) break;  // reached the reference exactly
        e.push_back(err);
    }
    if (e.size() < 2)
        throw std::invalid_argument("convergence_report: error sequence too short");

    ConvergenceReport rep;
    for (size_t i = 0; i + 1 < e.size(); ++i) rep.pairs.push_back({e[i], e[i + 1]});

    // least-squares slope of log e_i against the iteration index
    const int n = static_cast<int>(e.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double y = std::log(e[i]);
        sx += i;
        sy += y;
        sxx += double(i) * i;
        sxy += i * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.rate = std::exp(slope);
    return rep;
}

void save_convergence_csv(const ConvergenceReport& rep, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("save_convergence_csv: cannot open " + path);
    std::fprintf(f, "e_i,e_next\n");
    for (const auto& [a, b] : rep.pairs) std::fprintf(f, "%.17g,%.17g\n", a, b);
    std::fprintf(f, "# fitted_rate,%.17g\n", rep.rate);
    std::fclose(f);
}

void save_iteration_log_csv(const IASState& state, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("save_iteration_log_csv: cannot open " + path);
    std::fprintf(f, "outer_iter,inner_iters,F,rel_change,wall_seconds\n");
    for (size_t t = 0; t < state.F_history.size(); ++t)
        std::fprintf(f, "%zu,%d,%.17g,%.17g,%.17g\n", t + 1, state.inner_iters[t],
                     state.F_history[t], state.rel_change[t], state.wall_seconds[t]);
    std::fclose(f);
}

}  // namespace dot
