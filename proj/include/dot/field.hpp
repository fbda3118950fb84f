#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace dot {

/// Nodal absorption and reduced scattering, mm^-1. The stacked unknown is
/// x = (mua..., mus...) of length 2n.
struct OpticalField {
    Eigen::VectorXd mua;
    Eigen::VectorXd mus;

    OpticalField() = default;
    OpticalField(Eigen::VectorXd a, Eigen::VectorXd s)
        : mua(std::move(a)), mus(std::move(s)) {
        if (mua.size() != mus.size())
            throw std::invalid_argument("OpticalField: class lengths differ");
    }

    static OpticalField homogeneous(int n, double mua_val, double mus_val) {
        return {Eigen::VectorXd::Constant(n, mua_val), Eigen::VectorXd::Constant(n, mus_val)};
    }
    static OpticalField from_stacked(const Eigen::VectorXd& x) {
        const int n = static_cast<int>(x.size()) / 2;
        if (2 * n != x.size())
            throw std::invalid_argument("OpticalField: stacked length must be even");
        return {x.head(n), x.tail(n)};
    }

    int n() const { return static_cast<int>(mua.size()); }
    Eigen::VectorXd stacked() const {
        Eigen::VectorXd x(2 * n());
        x << mua, mus;
        return x;
    }
    bool positive() const { return mua.minCoeff() > 0.0 && mus.minCoeff() > 0.0; }
};

}  // namespace dot
