#include "dot/measurement.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dot {

NoiseReport add_noise(const MeasurementSet& clean, double level, unsigned long seed) {
    if (!(level > 0.0)) throw std::invalid_argument("add_noise: level must be positive");
    const int half = clean.n_src * clean.n_det;
    NoiseReport rep;
    rep.data = clean;
    rep.sigma_logamp = level * clean.y.head(half).cwiseAbs().maxCoeff();
    rep.sigma_phase = level * clean.y.tail(half).cwiseAbs().maxCoeff();
    if (rep.sigma_phase == 0.0)  // zero-frequency data: keep variances usable
        rep.sigma_phase = rep.sigma_logamp;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd noise(clean.y.size());
    for (int k = 0; k < half; ++k) noise[k] = rep.sigma_logamp * gauss(rng);
    for (int k = half; k < 2 * half; ++k) noise[k] = rep.sigma_phase * gauss(rng);

    rep.data.y += noise;
    rep.data.ce_diag.resize(2 * half);
    rep.data.ce_diag.head(half).setConstant(rep.sigma_logamp * rep.sigma_logamp);
    rep.data.ce_diag.tail(half).setConstant(rep.sigma_phase * rep.sigma_phase);
    rep.snr_db = 20.0 * std::log10(clean.y.norm() / noise.norm());
    return rep;
}

void save_measurements_csv(const MeasurementSet& data, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("save_measurements_csv: cannot open " + path);
    std::fprintf(f, "src,det,log_amp,phase,var_log_amp,var_phase\n");
    const bool noisy = data.has_noise();
    for (int s = 0; s < data.n_src; ++s)
        for (int d = 0; d < data.n_det; ++d) {
            const int ia = data.logamp_index(s, d), ip = data.phase_index(s, d);
            std::fprintf(f, "%d,%d,%.17g,%.17g,%.17g,%.17g\n", s, d, data.y[ia], data.y[ip],
                         noisy ? data.ce_diag[ia] : 0.0, noisy ? data.ce_diag[ip] : 0.0);
        }
    std::fclose(f);
}

MeasurementSet load_measurements_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_measurements_csv: cannot open " + path);
    std::string header;
    std::getline(in, header);
    if (header != "src,det,log_amp,phase,var_log_amp,var_phase")
        throw std::runtime_error("load_measurements_csv: bad header in " + path);
    struct Row {
        int s, d;
        double la, ph, vla, vph;
    };
    std::vector<Row> rows;
    std::string line;
    int max_s = -1, max_d = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Row r;
        char comma;
        std::istringstream ls(line);
        ls >> r.s >> comma >> r.d >> comma >> r.la >> comma >> r.ph >> comma >> r.vla >>
            comma >> r.vph;
        if (!ls) throw std::runtime_error("load_measurements_csv: bad row: " + line);
        rows.push_back(r);
        max_s = std::max(max_s, r.s);
        max_d = std::max(max_d, r.d);
    }
    MeasurementSet data;
    data.n_src = max_s + 1;
    data.n_det = max_d + 1;
    if (static_cast<int>(rows.size()) != data.n_src * data.n_det)
        throw std::runtime_error("load_measurements_csv: incomplete source-detector grid");
    data.y.resize(data.m());
    data.ce_diag.resize(data.m());
    for (const Row& r : rows) {
        data.y[data.logamp_index(r.s, r.d)] = r.la;
        data.y[data.phase_index(r.s, r.d)] = r.ph;
        data.ce_diag[data.logamp_index(r.s, r.d)] = r.vla;
        data.ce_diag[data.phase_index(r.s, r.d)] = r.vph;
    }
    if (data.ce_diag.maxCoeff() <= 0.0) data.ce_diag.resize(0);
    return data;
}

}  // namespace dot
