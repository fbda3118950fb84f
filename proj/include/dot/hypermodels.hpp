#pragma once

#include <string>

#include <Eigen/Dense>

namespace dot {

enum class HyperpriorKind { Fixed, Exponential, StandardGamma, InverseGamma };

std::string to_string(HyperpriorKind kind);
HyperpriorKind hyperprior_kind_from_string(const std::string& s);

/// Hyperprior of the prior variances for one parameter class.
struct HyperpriorSpec {
    HyperpriorKind kind = HyperpriorKind::Fixed;
    double gamma = 0.0;     // exponential rate
    double eta = 1e-4;      // standard gamma: eta = beta - 3/2
    double beta = 1.5;      // shape
    double vartheta = 1.0;  // scale

    void validate() const;
};

/// Closed-form variance minimizers of the alternating scheme, per entry.
double update_theta_exponential(double z, double gamma);
double update_theta_standard_gamma(double z, double eta, double vartheta);
double update_theta_inverse_gamma(double z, double beta, double vartheta);
double update_theta(double z, const HyperpriorSpec& spec, double theta_current);

/// Vector form over a residual block; the parallel kernel and its serial
/// reference twin.
void update_theta_vec(const Eigen::VectorXd& z, const HyperpriorSpec& spec,
                      Eigen::Ref<Eigen::VectorXd> theta);
void update_theta_vec_serial(const Eigen::VectorXd& z, const HyperpriorSpec& spec,
                             Eigen::Ref<Eigen::VectorXd> theta);

/// Per-entry variance term of the objective including the prior
/// normalization: h(theta) such that the full functional carries
/// sum_j [ z_j^2/(2 theta_j) ] + sum_j h(theta_j).
double hyper_entry_term(double theta, const HyperpriorSpec& spec);

/// Sum of h over a variance block. Throws on nonpositive theta.
double hyper_objective_terms(const Eigen::VectorXd& theta, const HyperpriorSpec& spec);

/// The 1-D objective minimized by the analytic updates (part b of the
/// alternating split, for one entry).
inline double theta_objective(double z, double theta, const HyperpriorSpec& spec) {
    return 0.5 * z * z / theta + hyper_entry_term(theta, spec);
}

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Scale parameter from the hyperprior CDF: solves
/// CDF(U; shape, vartheta) = quantile with U = (M/2)^2, by bisection.
/// Only defined for the standard gamma and inverse-gamma hyperpriors.
double select_scale_from_cdf(double m_bound, double quantile, HyperpriorKind kind,
                             double beta = 1.5);

}  // namespace dot
