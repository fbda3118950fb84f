#include "dot/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dot {

double RunConfig::omega() const { return 2.0 * std::numbers::pi * frequency_hz; }

double RunConfig::resolved_theta0_mua() const {
    if (theta0_mua) return *theta0_mua;
    return prior_kind == PriorModel::Kind::Uncorrelated ? 0.0025 * 0.0025 : 0.001 * 0.001;
}

double RunConfig::resolved_theta0_mus() const {
    if (theta0_mus) return *theta0_mus;
    return prior_kind == PriorModel::Kind::Uncorrelated ? 0.25 * 0.25 : 0.1 * 0.1;
}

ClassSpecs RunConfig::resolve_hyper() const {
    ClassSpecs specs;
    specs.abs.kind = specs.scat.kind = hyper.kind;
    specs.abs.eta = specs.scat.eta = hyper.eta;
    specs.abs.beta = specs.scat.beta = hyper.beta;
    switch (hyper.kind) {
        case HyperpriorKind::Fixed:
            break;
        case HyperpriorKind::Exponential: {
            if (!hyper.gamma_scat)
                throw std::invalid_argument("hyperprior: exponential needs gamma_scat");
            specs.scat.gamma = *hyper.gamma_scat;
            // the paper's magnitude rule: absorption rate = 1e-4 x scattering rate
            specs.abs.gamma = hyper.gamma_abs ? *hyper.gamma_abs : *hyper.gamma_scat * 1e-4;
            break;
        }
        case HyperpriorKind::StandardGamma:
        case HyperpriorKind::InverseGamma: {
            if (hyper.vartheta_scat) {
                specs.scat.vartheta = *hyper.vartheta_scat;
            } else if (hyper.select_m_scat) {
                specs.scat.vartheta =
                    select_scale_from_cdf(*hyper.select_m_scat, hyper.quantile, hyper.kind,
                                          hyper.beta);
            } else {
                throw std::invalid_argument(
                    "hyperprior: needs vartheta_scat or select_m_scat");
            }
            if (hyper.vartheta_abs) {
                specs.abs.vartheta = *hyper.vartheta_abs;
            } else {
                const double m_abs = hyper.select_m_abs
                                         ? *hyper.select_m_abs
                                         : (hyper.select_m_scat ? *hyper.select_m_scat / 100.0
                                                                : 0.0);
                if (m_abs > 0.0)
                    specs.abs.vartheta =
                        select_scale_from_cdf(m_abs, hyper.quantile, hyper.kind, hyper.beta);
                else
                    specs.abs.vartheta = specs.scat.vartheta * 1e-4;
            }
            break;
        }
    }
    specs.abs.validate();
    specs.scat.validate();
    return specs;
}

void RunConfig::validate() const {
    if (!(radius > 0.0)) throw std::invalid_argument("config: radius must be > 0");
    if (!(sim_edge > 0.0 && sim_edge < radius))
        throw std::invalid_argument("config: sim_edge must be in (0, radius)");
    if (!(inv_edge > 0.0 && inv_edge < radius))
        throw std::invalid_argument("config: inv_edge must be in (0, radius)");
    if (n_src < 1 || n_det < 1) throw std::invalid_argument("config: need sources and detectors");
    if (!(width > 0.0)) throw std::invalid_argument("config: width must be > 0");
    if (!(noise_level > 0.0)) throw std::invalid_argument("config: noise level must be > 0");
    if (!(mean_mua > 0.0 && mean_mus > 0.0))
        throw std::invalid_argument("config: background means must be > 0");
    if (!(resolved_theta0_mua() > 0.0 && resolved_theta0_mus() > 0.0))
        throw std::invalid_argument("config: initial variances must be > 0");
    if (!(frequency_hz >= 0.0)) throw std::invalid_argument("config: frequency must be >= 0");
    if (!(refractive_index > 0.0) || !(alpha > 0.0))
        throw std::invalid_argument("config: physics constants must be > 0");
    if (!(floor_mua > 0.0 && floor_mus > 0.0))
        throw std::invalid_argument("config: positivity floors must be > 0");
    solver.validate();
}

namespace {

struct RawConfig {
    std::map<std::string, std::string> kv;  // "section.key" -> value
    std::vector<std::string> inclusions;
};

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section == "phantom" && key == "inclusion")
            raw.inclusions.push_back(val);
        else
            raw.kv[section + "." + key] = val;
    }
    return raw;
}

double to_double(const std::string& s, const std::string& key) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: bad numeric value for " + key + ": " + s);
    }
}

Inclusion parse_inclusion(const std::string& s) {
    std::istringstream in(s);
    std::string shape;
    in >> shape;
    Inclusion inc;
    if (shape == "disk") {
        inc.shape = Inclusion::Shape::Disk;
        in >> inc.center.x() >> inc.center.y() >> inc.radius >> inc.d_mua >> inc.d_mus;
        if (!in) throw std::invalid_argument("config: bad inclusion: " + s);
    } else if (shape == "polygon") {
        inc.shape = Inclusion::Shape::Polygon;
        std::vector<double> nums;
        double v;
        while (in >> v) nums.push_back(v);
        if (nums.size() < 8 || nums.size() % 2 != 0)
            throw std::invalid_argument("config: bad polygon inclusion: " + s);
        inc.d_mus = nums.back();
        nums.pop_back();
        inc.d_mua = nums.back();
        nums.pop_back();
        for (size_t i = 0; i + 1 < nums.size(); i += 2)
            inc.vertices.push_back({nums[i], nums[i + 1]});
    } else {
        throw std::invalid_argument("config: unknown inclusion shape: " + shape);
    }
    return inc;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    const RawConfig raw = tokenize(text);
    RunConfig cfg;
    bool phantom_cleared = raw.inclusions.empty() ? false : true;
    if (phantom_cleared) cfg.phantom.inclusions.clear();
    for (const std::string& s : raw.inclusions)
        cfg.phantom.inclusions.push_back(parse_inclusion(s));

    auto get = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = raw.kv.find(key);
        if (it == raw.kv.end()) return std::nullopt;
        return it->second;
    };
    auto num = [&](const std::string& key, double& target) {
        if (auto v = get(key)) target = to_double(*v, key);
    };
    auto opt_num = [&](const std::string& key, std::optional<double>& target) {
        if (auto v = get(key)) target = to_double(*v, key);
    };

    num("mesh.radius", cfg.radius);
    num("mesh.sim_edge", cfg.sim_edge);
    num("mesh.inv_edge", cfg.inv_edge);
    if (auto v = get("layout.sources")) cfg.n_src = static_cast<int>(to_double(*v, "sources"));
    if (auto v = get("layout.detectors")) cfg.n_det = static_cast<int>(to_double(*v, "detectors"));
    num("layout.width", cfg.width);
    num("layout.strength", cfg.strength);
    num("layout.frequency_hz", cfg.frequency_hz);
    num("layout.detector_offset", cfg.detector_offset);
    num("physics.refractive_index", cfg.refractive_index);
    num("physics.alpha", cfg.alpha);
    num("phantom.background_mua", cfg.phantom.background_mua);
    num("phantom.background_mus", cfg.phantom.background_mus);
    num("noise.level", cfg.noise_level);
    if (auto v = get("noise.seed")) cfg.seed = std::stoul(*v);
    if (auto v = get("prior.kind")) {
        if (*v == "uncorrelated")
            cfg.prior_kind = PriorModel::Kind::Uncorrelated;
        else if (*v == "difference")
            cfg.prior_kind = PriorModel::Kind::Difference;
        else
            throw std::invalid_argument("config: unknown prior kind: " + *v);
    }
    num("prior.mean_mua", cfg.mean_mua);
    num("prior.mean_mus", cfg.mean_mus);
    opt_num("prior.theta0_mua", cfg.theta0_mua);
    opt_num("prior.theta0_mus", cfg.theta0_mus);
    num("prior.gauge_variance", cfg.gauge_variance);
    if (auto v = get("hyperprior.kind")) cfg.hyper.kind = hyperprior_kind_from_string(*v);
    num("hyperprior.eta", cfg.hyper.eta);
    num("hyperprior.beta", cfg.hyper.beta);
    opt_num("hyperprior.gamma_scat", cfg.hyper.gamma_scat);
    opt_num("hyperprior.gamma_abs", cfg.hyper.gamma_abs);
    opt_num("hyperprior.vartheta_scat", cfg.hyper.vartheta_scat);
    opt_num("hyperprior.vartheta_abs", cfg.hyper.vartheta_abs);
    opt_num("hyperprior.select_m_scat", cfg.hyper.select_m_scat);
    opt_num("hyperprior.select_m_abs", cfg.hyper.select_m_abs);
    num("hyperprior.quantile", cfg.hyper.quantile);
    num("solver.eps_outer", cfg.solver.eps_outer);
    if (auto v = get("solver.patience"))
        cfg.solver.outer_patience = static_cast<int>(to_double(*v, "patience"));
    num("solver.gn_tol", cfg.solver.gn_tol);
    if (auto v = get("solver.max_outer"))
        cfg.solver.max_outer = static_cast<int>(to_double(*v, "max_outer"));
    if (auto v = get("solver.max_inner"))
        cfg.solver.max_inner = static_cast<int>(to_double(*v, "max_inner"));
    num("solver.constraint_sigma", cfg.solver.constraint_sigma);
    num("solver.floor_mua", cfg.floor_mua);
    num("solver.floor_mus", cfg.floor_mus);
    if (auto v = get("output.dir")) cfg.out_dir = *v;
    if (auto v = get("output.label")) cfg.label = *v;
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream o;
    char buf[64];
    auto g = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    o << "[mesh]\nradius = " << g(cfg.radius) << "\nsim_edge = " << g(cfg.sim_edge)
      << "\ninv_edge = " << g(cfg.inv_edge) << "\n\n[layout]\nsources = " << cfg.n_src
      << "\ndetectors = " << cfg.n_det << "\nwidth = " << g(cfg.width)
      << "\nstrength = " << g(cfg.strength) << "\nfrequency_hz = " << g(cfg.frequency_hz)
      << "\ndetector_offset = " << g(cfg.detector_offset)
      << "\n\n[physics]\nrefractive_index = " << g(cfg.refractive_index)
      << "\nalpha = " << g(cfg.alpha) << "\n\n[phantom]\nbackground_mua = "
      << g(cfg.phantom.background_mua) << "\nbackground_mus = " << g(cfg.phantom.background_mus)
      << "\n";
    for (const auto& inc : cfg.phantom.inclusions) {
        if (inc.shape == Inclusion::Shape::Disk) {
            o << "inclusion = disk " << g(inc.center.x()) << " " << g(inc.center.y()) << " "
              << g(inc.radius) << " " << g(inc.d_mua) << " " << g(inc.d_mus) << "\n";
        } else {
            o << "inclusion = polygon";
            for (const auto& v : inc.vertices) o << " " << g(v.x()) << " " << g(v.y());
            o << " " << g(inc.d_mua) << " " << g(inc.d_mus) << "\n";
        }
    }
    o << "\n[noise]\nlevel = " << g(cfg.noise_level) << "\nseed = " << cfg.seed
      << "\n\n[prior]\nkind = "
      << (cfg.prior_kind == PriorModel::Kind::Uncorrelated ? "uncorrelated" : "difference")
      << "\nmean_mua = " << g(cfg.mean_mua) << "\nmean_mus = " << g(cfg.mean_mus)
      << "\ntheta0_mua = " << g(cfg.resolved_theta0_mua())
      << "\ntheta0_mus = " << g(cfg.resolved_theta0_mus())
      << "\ngauge_variance = " << g(cfg.gauge_variance) << "\n\n[hyperprior]\nkind = "
      << to_string(cfg.hyper.kind) << "\neta = " << g(cfg.hyper.eta)
      << "\nbeta = " << g(cfg.hyper.beta) << "\n";
    if (cfg.hyper.gamma_scat) o << "gamma_scat = " << g(*cfg.hyper.gamma_scat) << "\n";
    if (cfg.hyper.gamma_abs) o << "gamma_abs = " << g(*cfg.hyper.gamma_abs) << "\n";
    if (cfg.hyper.vartheta_scat) o << "vartheta_scat = " << g(*cfg.hyper.vartheta_scat) << "\n";
    if (cfg.hyper.vartheta_abs) o << "vartheta_abs = " << g(*cfg.hyper.vartheta_abs) << "\n";
    if (cfg.hyper.select_m_scat) o << "select_m_scat = " << g(*cfg.hyper.select_m_scat) << "\n";
    if (cfg.hyper.select_m_abs) o << "select_m_abs = " << g(*cfg.hyper.select_m_abs) << "\n";
    o << "quantile = " << g(cfg.hyper.quantile) << "\n\n[solver]\neps_outer = "
      << g(cfg.solver.eps_outer) << "\npatience = " << cfg.solver.outer_patience
      << "\ngn_tol = " << g(cfg.solver.gn_tol) << "\nmax_outer = " << cfg.solver.max_outer
      << "\nmax_inner = " << cfg.solver.max_inner
      << "\nconstraint_sigma = " << g(cfg.solver.constraint_sigma)
      << "\nfloor_mua = " << g(cfg.floor_mua) << "\nfloor_mus = " << g(cfg.floor_mus)
      << "\n\n[output]\ndir = " << cfg.out_dir << "\n";
    if (!cfg.label.empty()) o << "label = " << cfg.label << "\n";
    return o.str();
}

void save_field(const OpticalField& f, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("save_field: cannot open " + path);
    std::fprintf(fp, "field %d\n", f.n());
    for (int i = 0; i < f.n(); ++i) std::fprintf(fp, "%.17g %.17g\n", f.mua[i], f.mus[i]);
    std::fclose(fp);
}

OpticalField load_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_field: cannot open " + path);
    std::string tok;
    int n = 0;
    in >> tok >> n;
    if (tok != "field" || n <= 0) throw std::runtime_error("load_field: bad header in " + path);
    OpticalField f;
    f.mua.resize(n);
    f.mus.resize(n);
    for (int i = 0; i < n; ++i) in >> f.mua[i] >> f.mus[i];
    if (!in) throw std::runtime_error("load_field: truncated file " + path);
    return f;
}

}  // namespace dot
