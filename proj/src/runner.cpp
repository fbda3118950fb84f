#include "dot/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "dot/image.hpp"
#include "dot/measurement.hpp"

namespace dot {

namespace fs = std::filesystem;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text;
}

std::vector<Eigen::VectorXd> load_history(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string tok;
    int count = 0, dim = 0;
    in >> tok >> count >> dim;
    if (tok != "history") throw std::runtime_error("bad history header in " + path);
    std::vector<Eigen::VectorXd> h(count, Eigen::VectorXd(dim));
    for (int k = 0; k < count; ++k)
        for (int j = 0; j < dim; ++j) in >> h[k][j];
    if (!in) throw std::runtime_error("truncated history file " + path);
    return h;
}

void save_history(const std::vector<Eigen::VectorXd>& h, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "history %zu %zu\n", h.size(), h.empty() ? 0 : (size_t)h[0].size());
    for (const auto& x : h) {
        for (int j = 0; j < x.size(); ++j)
            std::fprintf(f, "%.17g%c", x[j], j + 1 == x.size() ? '\n' : ' ');
    }
    std::fclose(f);
}

std::map<std::string, std::string> read_manifest_kv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing manifest: " + path);
    std::map<std::string, std::string> kv;
    std::string line, section;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            section = line;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
        };
        kv[section + "." + trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

}  // namespace

void cmd_simulate(const RunConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);

    const TriMesh mesh = build_disk_mesh(cfg.radius, cfg.sim_edge);
    const SourceDetectorLayout layout =
        boundary_patches(mesh, cfg.n_src, cfg.n_det, cfg.width, cfg.strength, cfg.omega(),
                         cfg.detector_offset);
    const PhysicsConstants phys = PhysicsConstants::tissue(cfg.refractive_index, cfg.alpha);
    const OpticalField truth = rasterize(cfg.phantom, mesh);

    DotForward fwd(mesh, layout, phys, cfg.floor_mua, cfg.floor_mus);
    const MeasurementSet clean = fwd.measure(truth.stacked());
    const NoiseReport noisy = add_noise(clean, cfg.noise_level, cfg.seed);

    const std::string dir = cfg.out_dir + "/";
    save_measurements_csv(noisy.data, dir + "data.csv");
    save_field(truth, dir + "truth.txt");
    save_mesh(mesh, dir + "mesh_sim.txt");

    std::ostringstream man;
    man << "# simulate manifest\n" << serialize_config(cfg) << "\n[result]\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", noisy.snr_db);
    man << "realized_snr_db = " << buf << "\n"
        << "data_size = " << noisy.data.m() << "\n"
        << "sim_nodes = " << mesh.n() << "\n";
    write_text(dir + "manifest_simulate.txt", man.str());
}

void cmd_reconstruct(const RunConfig& cfg, const std::string& data_path) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);

    const MeasurementSet data = load_measurements_csv(data_path);
    const TriMesh mesh = build_disk_mesh(cfg.radius, cfg.inv_edge);
    const SourceDetectorLayout layout =
        boundary_patches(mesh, cfg.n_src, cfg.n_det, cfg.width, cfg.strength, cfg.omega(),
                         cfg.detector_offset);
    if (data.m() != layout.data_size())
        throw std::invalid_argument("cmd_reconstruct: data file does not match the layout");
    if (!data.has_noise())
        throw std::invalid_argument("cmd_reconstruct: data file carries no noise variances");
    const PhysicsConstants phys = PhysicsConstants::tissue(cfg.refractive_index, cfg.alpha);

    DotForward fwd(mesh, layout, phys, cfg.floor_mua, cfg.floor_mus);
    const ClassSpecs specs = cfg.resolve_hyper();

    PriorModel prior;
    prior.kind = cfg.prior_kind;
    prior.mean_mua = cfg.mean_mua;
    prior.mean_mus = cfg.mean_mus;
    prior.theta0_mua = cfg.resolved_theta0_mua();
    prior.theta0_mus = cfg.resolved_theta0_mus();
    prior.gauge_variance = cfg.gauge_variance;
    std::shared_ptr<DifferenceStructure> ds;
    if (prior.kind == PriorModel::Kind::Difference) {
        ds = std::make_shared<DifferenceStructure>(build_difference_structure(mesh));
        prior.structure = ds;
    }
    const EstimationProblem prob = build_problem(prior, mesh.n(), cfg.solver.constraint_sigma);

    const IASState state = ias_run(data, fwd, prob, specs, cfg.solver);

    const std::string dir = cfg.out_dir + "/";
    const OpticalField recon = OpticalField::from_stacked(prob.map_to_x(state.u));
    save_field(recon, dir + "recon.txt");
    save_mesh(mesh, dir + "mesh_inv.txt");
    save_iteration_log_csv(state, dir + "iterations.csv");
    save_history(state.x_iterates, dir + "history.txt");
    export_image(recon.mua, mesh, dir + "mua.pgm");
    export_image(recon.mus, mesh, dir + "mus.pgm");

    std::ostringstream man;
    man << "# reconstruct manifest\n" << serialize_config(cfg) << "\n[result]\n";
    man << "data = " << data_path << "\n"
        << "inv_nodes = " << mesh.n() << "\n"
        << "outer_iterations = " << state.t << "\n"
        << "converged = " << (state.converged ? 1 : 0) << "\n"
        << "reason = " << state.reason << "\n";
    char buf[64];
    auto g = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    if (specs.scat.kind == HyperpriorKind::StandardGamma ||
        specs.scat.kind == HyperpriorKind::InverseGamma)
        man << "vartheta_scat_resolved = " << g(specs.scat.vartheta) << "\n"
            << "vartheta_abs_resolved = " << g(specs.abs.vartheta) << "\n";
    if (specs.scat.kind == HyperpriorKind::Exponential)
        man << "gamma_scat_resolved = " << g(specs.scat.gamma) << "\n"
            << "gamma_abs_resolved = " << g(specs.abs.gamma) << "\n";
    man << "final_F = " << g(state.F_history.empty() ? 0.0 : state.F_history.back()) << "\n"
        << "recon_min_mua = " << g(recon.mua.minCoeff()) << "\n"
        << "recon_max_mua = " << g(recon.mua.maxCoeff()) << "\n"
        << "recon_min_mus = " << g(recon.mus.minCoeff()) << "\n"
        << "recon_max_mus = " << g(recon.mus.maxCoeff()) << "\n";
    write_text(dir + "manifest_reconstruct.txt", man.str());
}

void cmd_report(const std::vector<std::string>& run_dirs, const std::string& out_path,
                const std::string& reference_path) {
    struct Row {
        std::string run, prior, hyper, label;
        RelativeError re;
    };
    std::vector<Row> rows;
    std::vector<std::string> missing;
    for (const std::string& dir : run_dirs) {
        const std::string d = dir + "/";
        for (const char* need :
             {"truth.txt", "mesh_sim.txt", "recon.txt", "mesh_inv.txt", "history.txt",
              "manifest_reconstruct.txt"})
            if (!fs::exists(d + need)) missing.push_back(d + need);
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "cmd_report: missing files:";
        for (const auto& m : missing) msg << " " << m;
        throw std::runtime_error(msg.str());
    }

    for (const std::string& dir : run_dirs) {
        const std::string d = dir + "/";
        const TriMesh mesh_sim = load_mesh(d + "mesh_sim.txt");
        const TriMesh mesh_inv = load_mesh(d + "mesh_inv.txt");
        const OpticalField truth = load_field(d + "truth.txt");
        const OpticalField recon = load_field(d + "recon.txt");
        const auto kv = read_manifest_kv(d + "manifest_reconstruct.txt");

        Row row;
        row.run = dir;
        row.prior = kv.count("[prior].kind") ? kv.at("[prior].kind") : "?";
        row.hyper = kv.count("[hyperprior].kind") ? kv.at("[hyperprior].kind") : "?";
        row.label = kv.count("[output].label") ? kv.at("[output].label") : "";
        row.re = relative_error(truth, mesh_sim, recon, mesh_inv, mesh_inv);
        rows.push_back(row);

        // convergence pairs against the run's own final estimate unless a
        // reference state was supplied
        const auto history = load_history(d + "history.txt");
        Eigen::VectorXd ref;
        if (!reference_path.empty()) {
            const OpticalField rf = load_field(reference_path);
            ref = rf.stacked();
        } else {
            ref = history.back();
        }
        if (history.size() >= 3) {
            const ConvergenceReport rep = convergence_report(history, ref);
            save_convergence_csv(rep, d + "convergence.csv");
        }
    }

    std::FILE* f = std::fopen(out_path.c_str(), "w");
    if (!f) throw std::runtime_error("cmd_report: cannot open " + out_path);
    std::fprintf(f, "run,prior,hyperprior,label,re_mua_pct,re_mus_pct\n");
    for (const auto& r : rows)
        std::fprintf(f, "%s,%s,%s,%s,%.6f,%.6f\n", r.run.c_str(), r.prior.c_str(),
                     r.hyper.c_str(), r.label.c_str(), r.re.mua_pct, r.re.mus_pct);
    std::fclose(f);

    // pivot when the labels follow the low/intermediate/high scheme
    const std::vector<std::string> levels = {"low", "intermediate", "high"};
    bool pivotable = !rows.empty();
    for (const auto& r : rows)
        if (std::find(levels.begin(), levels.end(), r.label) == levels.end()) pivotable = false;
    if (pivotable) {
        std::map<std::string, std::map<std::string, RelativeError>> table;
        for (const auto& r : rows) table[r.hyper][r.label] = r.re;
        const std::string pivot_path =
            fs::path(out_path).replace_filename("table.csv").string();
        std::FILE* t = std::fopen(pivot_path.c_str(), "w");
        if (!t) throw std::runtime_error("cmd_report: cannot open " + pivot_path);
        std::fprintf(t,
                     "hyperprior,re_mua_low,re_mus_low,re_mua_intermediate,re_mus_intermediate,"
                     "re_mua_high,re_mus_high\n");
        for (const auto& [hyper, cells] : table) {
            std::fprintf(t, "%s", hyper.c_str());
            for (const auto& lv : levels) {
                if (cells.count(lv))
                    std::fprintf(t, ",%.6f,%.6f", cells.at(lv).mua_pct, cells.at(lv).mus_pct);
                else
                    std::fprintf(t, ",,");
            }
            std::fprintf(t, "\n");
        }
        std::fclose(t);
    }
}

}  // namespace dot
