// Acceptance suite: one pass/fail line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dot/jacobian.hpp"
#include "dot/phantom.hpp"
#include "dot/runner.hpp"
#include "dot/solver.hpp"
#include "oracles.hpp"

using namespace dot;
using clk = std::chrono::steady_clock;

namespace {

const double kOmega = 2.0 * std::numbers::pi * 1e8;

struct Outcome {
    bool pass = true;
    std::string detail;
    double seconds = 0.0;
};

template <class F>
Outcome run_criterion(F&& body) {
    Outcome out;
    const auto t0 = clk::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail += std::string(" exception: ") + e.what();
    }
    out.seconds = std::chrono::duration<double>(clk::now() - t0).count();
    return out;
}

void require(Outcome& out, bool cond, const std::string& what) {
    if (!cond) {
        out.pass = false;
        out.detail += " FAILED[" + what + "]";
    }
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. analytic variance updates match the dense log-grid argmin
void criterion1(Outcome& out) {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> zdist(-2.0, 2.0);
    std::uniform_real_distribution<double> logu(-8.0, 0.5);
    auto draw_scale = [&] { return std::pow(10.0, logu(rng)); };

    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const double z = zdist(rng);
        HyperpriorSpec specs[3];
        specs[0].kind = HyperpriorKind::Exponential;
        specs[0].gamma = draw_scale();
        specs[1].kind = HyperpriorKind::StandardGamma;
        specs[1].eta = std::pow(10.0, -8.0 + 6.0 * (rep % 10) / 10.0);
        specs[1].vartheta = draw_scale();
        specs[2].kind = HyperpriorKind::InverseGamma;
        specs[2].beta = 0.5 + 2.5 * (rep % 7) / 7.0;
        specs[2].vartheta = draw_scale();
        for (const HyperpriorSpec& spec : specs) {
            const double analytic = update_theta(z, spec, 1.0);
            const double grid = oracle::log_grid_argmin(
                [&](double th) { return theta_objective(z, th, spec); }, 1e-12, 1e4,
                200000);
            worst = std::max(worst, std::abs(analytic - grid) / analytic);
        }
    }
    require(out, worst <= 1e-6, fmt("worst rel %.3e > 1e-6", worst));
    out.detail += fmt(" worst analytic-vs-grid rel err %.2e over 300 draws", worst);
}

// ---------------------------------------------------------------------------
// 2. published scale table via CDF selection
void criterion2(Outcome& out) {
    const double q = 0.95, beta = 1.5;
    struct Case {
        HyperpriorKind kind;
        double m, expected;
    };
    const std::vector<Case> cases = {
        {HyperpriorKind::StandardGamma, 0.3, 5.8e-3}, {HyperpriorKind::StandardGamma, 1.0, 6.4e-2},
        {HyperpriorKind::StandardGamma, 10.0, 6.4},   {HyperpriorKind::StandardGamma, 5.0, 1.6},
        {HyperpriorKind::InverseGamma, 0.3, 4e-3},
    };
    for (const Case& c : cases) {
        const double got = select_scale_from_cdf(c.m, q, c.kind, beta);
        require(out, std::abs(got - c.expected) / c.expected <= 0.05,
                fmt("M=%.2g expected %.2g got %.4g", c.m, c.expected, got));
    }
    // absorption rule: M/100 scales the result by 1e-4
    for (const auto kind : {HyperpriorKind::StandardGamma, HyperpriorKind::InverseGamma}) {
        const double s = select_scale_from_cdf(1.0, q, kind, beta);
        const double a = select_scale_from_cdf(0.01, q, kind, beta);
        require(out, std::abs(a - 1e-4 * s) / (1e-4 * s) <= 1e-6, "M/100 scaling rule");
    }
    out.detail += " table values and the M/100 rule reproduced";
}

// ---------------------------------------------------------------------------
// 3. adjoint Jacobian vs central finite differences
void criterion3(Outcome& out) {
    const TriMesh mesh = build_disk_mesh(25.0, 9.0);  // n = 63
    const auto layout = boundary_patches(mesh, 2, 2, 2.0, 1.0, kOmega);
    DotForward fwd(mesh, layout, PhysicsConstants::tissue());
    Eigen::VectorXd x = OpticalField::homogeneous(mesh.n(), 0.01, 1.0).stacked();
    for (int i = 0; i < mesh.n(); ++i) {
        x[i] *= 1.0 + 0.3 * std::sin(0.2 * mesh.nodes[i].x());
        x[mesh.n() + i] *= 1.0 - 0.2 * std::cos(0.15 * mesh.nodes[i].y());
    }
    const Eigen::MatrixXd J = fwd.jacobian(x);
    const Eigen::MatrixXd Jfd = oracle::fd_jacobian(
        [&](const Eigen::VectorXd& v) { return fwd.evaluate(v); }, x, 1e-6);
    // entries below 0.1% of the matrix peak are held to that absolute floor
    const double floor = 1e-3 * J.cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (int r = 0; r < J.rows(); ++r)
        for (int c = 0; c < J.cols(); ++c) {
            const double denom = std::max({std::abs(J(r, c)), std::abs(Jfd(r, c)), floor});
            worst = std::max(worst, std::abs(J(r, c) - Jfd(r, c)) / denom);
        }
    require(out, worst <= 1e-4, fmt("worst rel %.3e > 1e-4", worst));
    out.detail += fmt(" n=%g, worst elementwise rel err %.2e", double(mesh.n()), worst);
}

// ---------------------------------------------------------------------------
// 4. forward physics: reciprocity, zero phase, monotone decay, convergence
void criterion4(Outcome& out) {
    {
        const TriMesh mesh = build_disk_mesh(25.0, 2.2);
        const auto layout = boundary_patches(mesh, 16, 16, 2.0, 1.0, kOmega);
        DotForward fwd(mesh, layout, PhysicsConstants::tissue());
        const Eigen::VectorXd x = OpticalField::homogeneous(mesh.n(), 0.01, 1.0).stacked();
        const ForwardState& st = fwd.solve_state(x);
        double rec = 0.0;
        for (int s = 0; s < 16; ++s)
            for (int d = 0; d < 16; ++d)
                rec = std::max(rec, std::abs(st.gamma(s, d) - st.gamma(d, s)) /
                                        std::abs(st.gamma(s, d)));
        require(out, rec <= 1e-10, fmt("reciprocity %.3e > 1e-10", rec));
        out.detail += fmt(" reciprocity %.1e;", rec);

        const MeasurementSet y = fwd.measure(x);
        bool monotone = true;
        for (int d = 0; d + 1 <= 8; ++d)
            monotone = monotone && y.y[y.logamp_index(0, d)] > y.y[y.logamp_index(0, d + 1)];
        require(out, monotone, "amplitude decay not monotone");
    }
    {
        const TriMesh mesh = build_disk_mesh(25.0, 2.8);
        const auto layout = boundary_patches(mesh, 8, 8, 2.0, 1.0, 0.0);
        DotForward fwd(mesh, layout, PhysicsConstants::tissue());
        const MeasurementSet y =
            fwd.measure(OpticalField::homogeneous(mesh.n(), 0.01, 1.0).stacked());
        require(out, y.y.tail(64).cwiseAbs().maxCoeff() == 0.0, "phase not zero at omega 0");
    }
    {
        Eigen::VectorXd prev;
        std::vector<double> diffs;
        for (double h : {2.5, 1.25, 0.625, 0.3125}) {
            const TriMesh mesh = build_disk_mesh(25.0, h);
            const auto layout = boundary_patches(mesh, 8, 8, 4.0, 1.0, kOmega);
            DotForward fwd(mesh, layout, PhysicsConstants::tissue());
            const Eigen::VectorXd y =
                fwd.evaluate(OpticalField::homogeneous(mesh.n(), 0.01, 1.0).stacked());
            if (prev.size()) diffs.push_back((y - prev).norm());
            prev = y;
        }
        bool shrinking = true;
        for (size_t i = 0; i + 1 < diffs.size(); ++i)
            shrinking = shrinking && diffs[i + 1] < diffs[i];
        require(out, shrinking,
                fmt("refinement diffs %.3e %.3e %.3e not decreasing", diffs[0], diffs[1],
                    diffs[2]));
        out.detail += fmt(" refinement diffs %.2e -> %.2e -> %.2e", diffs[0], diffs[1], diffs[2]);
    }
}

// ---------------------------------------------------------------------------
// 5. sparsity limits of the hierarchical objective
void criterion5(Outcome& out) {
    {  // weighted-l1 limit, linear surrogate 20x40
        std::mt19937 rng(7);
        std::normal_distribution<double> gauss;
        const int m = 20, n = 40;
        Eigen::MatrixXd A(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
        Eigen::VectorXd x_true = Eigen::VectorXd::Zero(n);
        x_true[5] = 1.0;
        x_true[17] = -0.6;
        x_true[33] = 0.3;
        Eigen::VectorXd y = A * x_true;
        for (int i = 0; i < m; ++i) y[i] += 0.01 * gauss(rng);

        const double sigma2 = 1e-4, vartheta = 1.0, eta = 1e-8;
        LinearForward fwd(A);
        PriorModel prior;
        prior.mean_mua = prior.mean_mus = 0.0;
        prior.theta0_mua = prior.theta0_mus = 1.0;
        const EstimationProblem prob = build_problem(prior, n / 2);
        MeasurementSet data;
        data.n_src = 1;
        data.n_det = m / 2;
        data.y = y;
        data.ce_diag = Eigen::VectorXd::Constant(m, sigma2);

        ClassSpecs sg;
        sg.abs.kind = sg.scat.kind = HyperpriorKind::StandardGamma;
        sg.abs.eta = sg.scat.eta = eta;
        sg.abs.vartheta = sg.scat.vartheta = vartheta;
        SolverConfig cfg;
        cfg.eps_outer = 1e-10;
        cfg.max_outer = 5000;
        const IASState st = ias_run(data, fwd, prob, sg, cfg);

        const Eigen::VectorXd w_data = Eigen::VectorXd::Constant(m, 1.0 / sigma2);
        const Eigen::VectorXd l1w =
            Eigen::VectorXd::Constant(n, std::sqrt(2.0) / std::sqrt(vartheta));
        const Eigen::VectorXd u_l1 = oracle::prox_gradient_l1(
            A, y, w_data, l1w, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n));
        const Eigen::VectorXd r = y - A * u_l1;
        const double F_l1 = 0.5 * r.squaredNorm() / sigma2 + l1w.dot(u_l1.cwiseAbs());
        const double rel = std::abs(st.F_history.back() - F_l1) / std::abs(F_l1);
        require(out, rel <= 1e-3, fmt("l1 objective rel gap %.3e > 1e-3", rel));
        out.detail += fmt(" l1 gap %.2e;", rel);
    }
    {  // weighted-TV limit on a 1-D chain of 50 nodes
        const int n = 50;  // nodes; differences = 49 edges + gauge
        EstimationProblem prob;
        prob.kind = PriorModel::Kind::Difference;
        prob.half = n;
        prob.dim = n;
        std::vector<Eigen::Triplet<double>> tb, tp;
        for (int t = 0; t + 1 < n; ++t) {
            tb.emplace_back(t, t, 1.0);       // d_t = x_t - x_{t+1}
            tb.emplace_back(t, t + 1, -1.0);
        }
        tb.emplace_back(n - 1, 0, 1.0);  // gauge d = x_0
        Eigen::SparseMatrix<double> B(n, n);
        B.setFromTriplets(tb.begin(), tb.end());
        for (int j = 0; j < n; ++j) {
            tp.emplace_back(j, n - 1, 1.0);  // x_j = gauge - sum_{t<j} d_t
            for (int t = 0; t < j; ++t) tp.emplace_back(j, t, -1.0);
        }
        prob.to_x.resize(n, n);
        prob.to_x.setFromTriplets(tp.begin(), tp.end());
        prob.constraint.resize(0, n);
        const double gauge_var = 1e6, vartheta = 0.5, eta = 1e-8, sigma2 = 1e-4;
        prob.mu = Eigen::VectorXd::Zero(n);
        prob.mu[n - 1] = 1.0;
        prob.theta0 = Eigen::VectorXd::Constant(n, 0.01);
        prob.theta0[n - 1] = gauge_var;
        prob.theta_fixed.assign(n, false);
        prob.theta_fixed[n - 1] = true;

        std::mt19937 rng(13);
        std::normal_distribution<double> gauss;
        const int m = 20;
        Eigen::MatrixXd A(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
        Eigen::VectorXd x_true = Eigen::VectorXd::Constant(n, 1.0);
        x_true.segment(15, 12).setConstant(1.8);  // one plateau
        Eigen::VectorXd y = A * x_true;
        for (int i = 0; i < m; ++i) y[i] += 0.01 * gauss(rng);
        MeasurementSet data;
        data.n_src = 1;
        data.n_det = m / 2;
        data.y = y;
        data.ce_diag = Eigen::VectorXd::Constant(m, sigma2);
        LinearForward fwd(A);

        ClassSpecs sg;
        sg.abs.kind = sg.scat.kind = HyperpriorKind::StandardGamma;
        sg.abs.eta = sg.scat.eta = eta;
        sg.abs.vartheta = sg.scat.vartheta = vartheta;
        SolverConfig cfg;
        cfg.eps_outer = 1e-10;
        cfg.max_outer = 5000;
        const IASState st = ias_run(data, fwd, prob, sg, cfg);

        const Eigen::MatrixXd Ad = A * prob.to_x;
        Eigen::VectorXd l1w = Eigen::VectorXd::Constant(n, std::sqrt(2.0 / vartheta));
        Eigen::VectorXd quad = Eigen::VectorXd::Zero(n);
        l1w[n - 1] = 0.0;
        quad[n - 1] = 1.0 / gauge_var;
        const Eigen::VectorXd d_tv = oracle::prox_gradient_l1(
            Ad, y, Eigen::VectorXd::Constant(m, 1.0 / sigma2), l1w, quad, prob.mu);
        const Eigen::VectorXd r = y - Ad * d_tv;
        // the fixed gauge variance contributes its normalization constant
        const double F_tv = 0.5 * r.squaredNorm() / sigma2 + l1w.dot((d_tv - prob.mu).cwiseAbs()) +
                            0.5 * std::pow(d_tv[n - 1] - prob.mu[n - 1], 2) / gauge_var +
                            0.5 * std::log(gauge_var);
        const double rel = std::abs(st.F_history.back() - F_tv) / std::abs(F_tv);
        require(out, rel <= 1e-3, fmt("TV objective rel gap %.3e > 1e-3", rel));
        out.detail += fmt(" TV gap %.2e", rel);
    }
}

// shared desk-scale simulation for criteria 6 and 8
struct DeskData {
    TriMesh mesh_sim;
    OpticalField truth;
    MeasurementSet data;
    double snr_db;
};

DeskData simulate_desk(double sim_edge, int n_src, double offset, const Phantom& phantom,
                       unsigned long seed) {
    DeskData d{build_disk_mesh(25.0, sim_edge), {}, {}, 0.0};
    const auto layout = boundary_patches(d.mesh_sim, n_src, n_src, 2.0, 1.0, kOmega, offset);
    DotForward fwd(d.mesh_sim, layout, PhysicsConstants::tissue());
    d.truth = rasterize(phantom, d.mesh_sim);
    const NoiseReport rep = add_noise(fwd.measure(d.truth.stacked()), 0.004, seed);
    d.data = rep.data;
    d.snr_db = rep.snr_db;
    return d;
}

// ---------------------------------------------------------------------------
// 6. IAS monotonicity and linear convergence rate on the desk problem
void criterion6(Outcome& out) {
    const double offset = std::numbers::pi / 16.0;
    const DeskData sim = simulate_desk(2.083, 16, offset, phantom_two_inclusions(), 1);
    const TriMesh mesh = build_disk_mesh(25.0, 2.2);
    const auto layout = boundary_patches(mesh, 16, 16, 2.0, 1.0, kOmega, offset);
    DotForward fwd(mesh, layout, PhysicsConstants::tissue());

    PriorModel prior;  // uncorrelated
    const EstimationProblem prob = build_problem(prior, mesh.n());
    ClassSpecs sg;
    sg.abs.kind = sg.scat.kind = HyperpriorKind::StandardGamma;
    sg.abs.eta = sg.scat.eta = 1e-4;
    sg.scat.vartheta = 5.8e-3;  // low column: the sharp-regularized run
    sg.abs.vartheta = 5.8e-7;
    SolverConfig cfg;
    cfg.max_outer = 80;
    const IASState st = ias_run(sim.data, fwd, prob, sg, cfg);
    require(out, st.converged, "IAS did not converge within 80 outer iterations");

    // F never increases outside the terminal patience window
    int bad = 0;
    for (size_t i = 1; i < st.F_history.size(); ++i)
        if (st.F_history[i] > st.F_history[i - 1] &&
            i + 3 < st.F_history.size())
            ++bad;
    require(out, bad == 0, fmt("%g non-terminal F increases", double(bad)));

    // reference state from a longer run
    WarmStart warm{st.u, st.theta};
    SolverConfig ext = cfg;
    ext.eps_outer = 1e-13;
    ext.max_outer = 8;
    const IASState st2 = ias_run(sim.data, fwd, prob, sg, ext, &warm);
    const Eigen::VectorXd x_map = prob.map_to_x(st2.u);

    const ConvergenceReport rep = convergence_report(st.x_iterates, x_map);
    require(out, rep.pairs.size() >= 5, "too few error pairs");
    double worst_ratio = 0.0;
    for (size_t i = rep.pairs.size() - 5; i < rep.pairs.size(); ++i)
        worst_ratio = std::max(worst_ratio, rep.pairs[i].second / rep.pairs[i].first);
    require(out, worst_ratio <= 0.8, fmt("tail ratio %.3f > 0.8", worst_ratio));
    out.detail += fmt(" outer=%g, fitted rate %.3f, worst tail ratio %.3f",
                      double(st.t), rep.rate, worst_ratio);
}

// ---------------------------------------------------------------------------
// 7. end-to-end quality trend against the fixed-variance baselines
void criterion7(Outcome& out) {
    {  // uncorrelated prior, standard gamma intermediate
        const double offset = std::numbers::pi / 24.0;
        const DeskData sim = simulate_desk(1.4, 24, offset, phantom_two_inclusions(), 1);
        const TriMesh mesh = build_disk_mesh(25.0, 1.5);
        const auto layout = boundary_patches(mesh, 24, 24, 2.0, 1.0, kOmega, offset);
        DotForward fwd(mesh, layout, PhysicsConstants::tissue());
        PriorModel prior;
        const EstimationProblem prob = build_problem(prior, mesh.n());
        SolverConfig cfg;
        cfg.max_outer = 40;

        ClassSpecs fixed;
        const IASState base = ias_run(sim.data, fwd, prob, fixed, cfg);
        const RelativeError re_base =
            relative_error(sim.truth, sim.mesh_sim,
                           OpticalField::from_stacked(prob.map_to_x(base.u)), mesh, mesh);

        ClassSpecs sg;
        sg.abs.kind = sg.scat.kind = HyperpriorKind::StandardGamma;
        sg.abs.eta = sg.scat.eta = 1e-4;
        sg.scat.vartheta = 6.4e-2;
        sg.abs.vartheta = 6.4e-6;
        const IASState hier = ias_run(sim.data, fwd, prob, sg, cfg);
        const RelativeError re_hier =
            relative_error(sim.truth, sim.mesh_sim,
                           OpticalField::from_stacked(prob.map_to_x(hier.u)), mesh, mesh);

        require(out, re_hier.mua_pct <= 15.0, fmt("RE(mua) %.2f%% > 15%%", re_hier.mua_pct));
        require(out, re_hier.mus_pct <= 15.0, fmt("RE(mus) %.2f%% > 15%%", re_hier.mus_pct));
        require(out, re_hier.mua_pct < re_base.mua_pct,
                fmt("mua ordering %.2f !< %.2f", re_hier.mua_pct, re_base.mua_pct));
        require(out, re_hier.mus_pct < re_base.mus_pct,
                fmt("mus ordering %.2f !< %.2f", re_hier.mus_pct, re_base.mus_pct));
        out.detail += fmt(" unc %.2f/%.2f vs base %.2f/%.2f;", re_hier.mua_pct,
                          re_hier.mus_pct, re_base.mua_pct, re_base.mus_pct);
    }
    {  // difference prior, standard gamma intermediate
        const double offset = std::numbers::pi / 16.0;
        const DeskData sim = simulate_desk(2.083, 16, offset, phantom_two_inclusions_large(), 1);
        const TriMesh mesh = build_disk_mesh(25.0, 2.2);
        const auto layout = boundary_patches(mesh, 16, 16, 2.0, 1.0, kOmega, offset);
        DotForward fwd(mesh, layout, PhysicsConstants::tissue());

        PriorModel prior;
        prior.kind = PriorModel::Kind::Difference;
        prior.structure =
            std::make_shared<DifferenceStructure>(build_difference_structure(mesh));
        prior.theta0_mua = 0.001 * 0.001;
        prior.theta0_mus = 0.1 * 0.1;
        const EstimationProblem prob = build_problem(prior, mesh.n());
        SolverConfig cfg;
        cfg.max_outer = 40;

        ClassSpecs fixed;
        const IASState base = ias_run(sim.data, fwd, prob, fixed, cfg);
        const RelativeError re_base =
            relative_error(sim.truth, sim.mesh_sim,
                           OpticalField::from_stacked(prob.map_to_x(base.u)), mesh, mesh);

        ClassSpecs sg;
        sg.abs.kind = sg.scat.kind = HyperpriorKind::StandardGamma;
        sg.abs.eta = sg.scat.eta = 1e-4;
        sg.scat.vartheta = 1.6;
        sg.abs.vartheta = 1.6e-4;
        const IASState hier = ias_run(sim.data, fwd, prob, sg, cfg);
        const RelativeError re_hier =
            relative_error(sim.truth, sim.mesh_sim,
                           OpticalField::from_stacked(prob.map_to_x(hier.u)), mesh, mesh);

        require(out, re_hier.mua_pct < re_base.mua_pct,
                fmt("dif mua ordering %.2f !< %.2f", re_hier.mua_pct, re_base.mua_pct));
        require(out, re_hier.mus_pct < re_base.mus_pct,
                fmt("dif mus ordering %.2f !< %.2f", re_hier.mus_pct, re_base.mus_pct));
        out.detail += fmt(" dif %.2f/%.2f vs base %.2f/%.2f", re_hier.mua_pct,
                          re_hier.mus_pct, re_base.mua_pct, re_base.mus_pct);
    }
}

// ---------------------------------------------------------------------------
// 8. difference-structure identities and constraint satisfaction
void criterion8(Outcome& out) {
    const TriMesh mesh = build_disk_mesh(25.0, 2.2);
    const DifferenceStructure ds = build_difference_structure(mesh);
    std::mt19937 rng(77);
    std::normal_distribution<double> gauss;
    double worst_m = 0.0, worst_p = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        Eigen::VectorXd x(mesh.n());
        for (int i = 0; i < mesh.n(); ++i) x[i] = gauss(rng);
        const Eigen::VectorXd d = ds.B * x;
        worst_m = std::max(worst_m, (ds.M * d).lpNorm<Eigen::Infinity>());
        worst_p = std::max(worst_p, (ds.P * d - x).lpNorm<Eigen::Infinity>());
    }
    require(out, worst_m <= 1e-12, fmt("M(Bx) max %.3e", worst_m));
    require(out, worst_p <= 1e-12, fmt("P(Bx)-x max %.3e", worst_p));

    // constraint residual of a difference-mode solve on a small instance
    const double offset = std::numbers::pi / 8.0;
    const DeskData sim = simulate_desk(4.6, 8, offset, phantom_two_inclusions_large(), 2);
    const TriMesh inv = build_disk_mesh(25.0, 5.0);
    const auto layout = boundary_patches(inv, 8, 8, 2.0, 1.0, kOmega, offset);
    DotForward fwd(inv, layout, PhysicsConstants::tissue());
    PriorModel prior;
    prior.kind = PriorModel::Kind::Difference;
    prior.structure = std::make_shared<DifferenceStructure>(build_difference_structure(inv));
    prior.theta0_mua = 1e-6;
    prior.theta0_mus = 1e-2;
    const EstimationProblem prob = build_problem(prior, inv.n());
    ClassSpecs sg;
    sg.abs.kind = sg.scat.kind = HyperpriorKind::StandardGamma;
    sg.abs.eta = sg.scat.eta = 1e-4;
    sg.scat.vartheta = 1.6;
    sg.abs.vartheta = 1.6e-4;
    SolverConfig cfg;
    cfg.max_outer = 10;
    const IASState st = ias_run(sim.data, fwd, prob, sg, cfg);
    const double md = (prob.constraint * st.u).lpNorm<Eigen::Infinity>();
    require(out, md <= 10.0 * prob.constraint_sigma,
            fmt("constraint residual %.3e > 10 eps_c %.3e", md, 10.0 * prob.constraint_sigma));
    out.detail += fmt(" identities %.1e/%.1e, solve residual %.2e (eps_c %.1e)", worst_m,
                      worst_p, md, prob.constraint_sigma);
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        double budget_s;
        std::function<void(Outcome&)> body;
    };
    const std::vector<Entry> entries = {
        {1, "variance updates match the grid oracle", 10, criterion1},
        {2, "CDF scale selection reproduces the published table", 1, criterion2},
        {3, "Jacobian matches finite differences", 60, criterion3},
        {4, "forward physics properties", 300, criterion4},
        {5, "weighted-l1 and TV limits", 60, criterion5},
        {6, "IAS monotonicity and convergence rate", 1800, criterion6},
        {7, "reconstruction quality beats the fixed baseline", 3600, criterion7},
        {8, "difference identities and constraint residual", 60, criterion8},
    };
    int failures = 0;
    for (const auto& e : entries) {
        const Outcome out = run_criterion(e.body);
        const bool ok = out.pass && out.seconds <= e.budget_s;
        std::printf("[%s] criterion %d: %s —%s (%.1fs, budget %.0fs)\n",
                    ok ? "PASS" : "FAIL", e.id, e.name, out.detail.c_str(), out.seconds,
                    e.budget_s);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", int(entries.size()) - failures, entries.size());
    return failures;
}
