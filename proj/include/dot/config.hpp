#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dot/hypermodels.hpp"
#include "dot/phantom.hpp"
#include "dot/prior.hpp"
#include "dot/solver.hpp"

namespace dot {

/// Per-class hyperparameter block of the run configuration. Scales may be
/// given explicitly or resolved from (M, quantile) through the hyperprior
/// CDF; absorption bounds default to the scattering bounds divided by 100.
struct HyperConfig {
    HyperpriorKind kind = HyperpriorKind::Fixed;
    double eta = 1e-4;
    double beta = 1.5;
    std::optional<double> gamma_scat, gamma_abs;
    std::optional<double> vartheta_scat, vartheta_abs;
    std::optional<double> select_m_scat;  // CDF selection bound for scattering
    std::optional<double> select_m_abs;   // defaults to select_m_scat / 100
    double quantile = 0.95;
};

struct RunConfig {
    // mesh
    double radius = 25.0;
    double sim_edge = 2.083;
    double inv_edge = 2.2;
    // layout
    int n_src = 16;
    int n_det = 16;
    double width = 2.0;
    double strength = 1.0;
    double frequency_hz = 1e8;   // modulation frequency f; omega = 2 pi f
    double detector_offset = 0.0;
    // physics
    double refractive_index = 1.4;
    double alpha = 1.0;
    // phantom
    Phantom phantom = phantom_two_inclusions();
    // noise
    double noise_level = 0.004;
    unsigned long seed = 1;
    // prior
    PriorModel::Kind prior_kind = PriorModel::Kind::Uncorrelated;
    double mean_mua = 0.01;
    double mean_mus = 1.0;
    std::optional<double> theta0_mua, theta0_mus;  // defaults depend on prior kind
    double gauge_variance = 1e6;
    // hyperprior
    HyperConfig hyper;
    // solver
    SolverConfig solver;
    double floor_mua = 1e-5;
    double floor_mus = 1e-2;
    // output
    std::string out_dir = "out";
    std::string label;

    double omega() const;
    double resolved_theta0_mua() const;
    double resolved_theta0_mus() const;
    /// Fills in vartheta / gamma per class, running the CDF selection when
    /// (M, quantile) was given. Throws when the hyperprior is unresolvable.
    ClassSpecs resolve_hyper() const;
    void validate() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

/// Field file round trip: "field <n>" header, then "mua mus" per node.
void save_field(const OpticalField& f, const std::string& path);
OpticalField load_field(const std::string& path);

}  // namespace dot
