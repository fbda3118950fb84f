#include "dot/hypermodels.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

namespace dot {

std::string to_string(HyperpriorKind kind) {
    switch (kind) {
        case HyperpriorKind::Fixed: return "fixed";
        case HyperpriorKind::Exponential: return "exponential";
        case HyperpriorKind::StandardGamma: return "standard-gamma";
        case HyperpriorKind::InverseGamma: return "inverse-gamma";
    }
    return "?";
}

HyperpriorKind hyperprior_kind_from_string(const std::string& s) {
    if (s == "fixed") return HyperpriorKind::Fixed;
    if (s == "exponential") return HyperpriorKind::Exponential;
    if (s == "standard-gamma") return HyperpriorKind::StandardGamma;
    if (s == "inverse-gamma") return HyperpriorKind::InverseGamma;
    throw std::invalid_argument("unknown hyperprior kind: " + s);
}

void HyperpriorSpec::validate() const {
    switch (kind) {
        case HyperpriorKind::Fixed:
            break;
        case HyperpriorKind::Exponential:
            if (!(gamma > 0.0)) throw std::invalid_argument("exponential hyperprior needs gamma > 0");
            break;
        case HyperpriorKind::StandardGamma:
            if (!(eta > 0.0) || !(vartheta > 0.0))
                throw std::invalid_argument("standard gamma hyperprior needs eta, vartheta > 0");
            break;
        case HyperpriorKind::InverseGamma:
            if (!(beta > 0.0) || !(vartheta > 0.0))
                throw std::invalid_argument("inverse-gamma hyperprior needs beta, vartheta > 0");
            break;
    }
}

double update_theta_exponential(double z, double gamma) { return z * z + gamma; }

double update_theta_standard_gamma(double z, double eta, double vartheta) {
    return vartheta * (0.5 * eta + std::sqrt(0.25 * eta * eta + z * z / (2.0 * vartheta)));
}

double update_theta_inverse_gamma(double z, double beta, double vartheta) {
    return (vartheta + 0.5 * z * z) / (beta + 1.5);
}

double update_theta(double z, const HyperpriorSpec& spec, double theta_current) {
    switch (spec.kind) {
        case HyperpriorKind::Fixed: return theta_current;
        case HyperpriorKind::Exponential: return update_theta_exponential(z, spec.gamma);
        case HyperpriorKind::StandardGamma:
            return update_theta_standard_gamma(z, spec.eta, spec.vartheta);
        case HyperpriorKind::InverseGamma:
            return update_theta_inverse_gamma(z, spec.beta, spec.vartheta);
    }
    return theta_current;
}

void update_theta_vec(const Eigen::VectorXd& z, const HyperpriorSpec& spec,
                      Eigen::Ref<Eigen::VectorXd> theta) {
    const int n = static_cast<int>(z.size());
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) theta[j] = update_theta(z[j], spec, theta[j]);
}

void update_theta_vec_serial(const Eigen::VectorXd& z, const HyperpriorSpec& spec,
                             Eigen::Ref<Eigen::VectorXd> theta) {
    const int n = static_cast<int>(z.size());
    for (int j = 0; j < n; ++j) theta[j] = update_theta(z[j], spec, theta[j]);
}

double hyper_entry_term(double theta, const HyperpriorSpec& spec) {
    switch (spec.kind) {
        case HyperpriorKind::Fixed:
            return 0.5 * std::log(theta);
        case HyperpriorKind::Exponential:
            return 0.5 * spec.gamma / theta + 0.5 * std::log(theta);
        case HyperpriorKind::StandardGamma:
            // normalization's +log/2 cancels against the hyperprior so the
            // total log coefficient is -eta
            return theta / spec.vartheta - spec.eta * std::log(theta / spec.vartheta);
        case HyperpriorKind::InverseGamma:
            return spec.vartheta / theta + (spec.beta + 1.5) * std::log(theta / spec.vartheta);
    }
    return 0.0;
}

double hyper_objective_terms(const Eigen::VectorXd& theta, const HyperpriorSpec& spec) {
    double sum = 0.0;
    for (int j = 0; j < theta.size(); ++j) {
        if (!(theta[j] > 0.0))
            throw std::invalid_argument("hyper_objective_terms: nonpositive variance");
        sum += hyper_entry_term(theta[j], spec);
    }
    return sum;
}

double gamma_p(double a, double x) { return boost::math::gamma_p(a, x); }

double select_scale_from_cdf(double m_bound, double quantile, HyperpriorKind kind,
                             double beta) {
    if (!(m_bound > 0.0)) throw std::invalid_argument("select_scale_from_cdf: M must be > 0");
    if (!(quantile > 0.0 && quantile < 1.0))
        throw std::invalid_argument("select_scale_from_cdf: quantile must be in (0,1)");
    if (kind != HyperpriorKind::StandardGamma && kind != HyperpriorKind::InverseGamma)
        throw std::invalid_argument(
            "select_scale_from_cdf: CDF selection not applicable to this hyperprior");

    const double u = 0.25 * m_bound * m_bound;
    // CDF at the outlier threshold U, monotone decreasing in the scale.
    auto cdf = [&](double vt) {
        return kind == HyperpriorKind::StandardGamma ? gamma_p(beta, u / vt)
                                                     : 1.0 - gamma_p(beta, vt / u);
    };
    // log-space bisection; cdf(exp(llo)) >= quantile >= cdf(exp(lhi))
    double llo = std::log(1e-150), lhi = std::log(1e150);
    while (lhi - llo > 1e-11) {
        const double mid = 0.5 * (llo + lhi);
        if (cdf(std::exp(mid)) >= quantile)
            llo = mid;
        else
            lhi = mid;
    }
    return std::exp(0.5 * (llo + lhi));
}

}  // namespace dot
