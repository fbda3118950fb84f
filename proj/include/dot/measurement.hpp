#pragma once

#include <string>

#include <Eigen/Dense>

namespace dot {

/// Boundary data: log-amplitude block then phase block, both source-major,
/// with per-entry noise variances once noise has been attached.
struct MeasurementSet {
    int n_src = 0;
    int n_det = 0;
    Eigen::VectorXd y;        // length 2 * n_src * n_det
    Eigen::VectorXd ce_diag;  // same length; empty until noise is set

    int m() const { return 2 * n_src * n_det; }
    int logamp_index(int s, int d) const { return s * n_det + d; }
    int phase_index(int s, int d) const { return n_src * n_det + s * n_det + d; }
    bool has_noise() const { return ce_diag.size() == y.size(); }
};

struct NoiseReport {
    MeasurementSet data;
    double snr_db = 0.0;
    double sigma_logamp = 0.0;
    double sigma_phase = 0.0;
};

/// Adds block-wise white noise: sigma per block is level times the block's
/// max magnitude. Deterministic for a fixed seed.
NoiseReport add_noise(const MeasurementSet& clean, double level, unsigned long seed);

void save_measurements_csv(const MeasurementSet& data, const std::string& path);
MeasurementSet load_measurements_csv(const std::string& path);

}  // namespace dot
