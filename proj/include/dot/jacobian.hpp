#pragma once

#include "dot/forward.hpp"

namespace dot {

/// Adjoint-state Jacobian of the [log-amplitude; phase] data with respect to
/// the stacked (mua, mus') nodal parameters. Rows are laid out like the
/// measurement vector. The parallel kernel distributes source-detector pairs
/// across threads; the serial twin is the reference for parity tests and the
/// benchmark.
Eigen::MatrixXd assemble_jacobian(const DotForward& fwd, const Eigen::VectorXd& x,
                                  const ForwardState& state);
Eigen::MatrixXd assemble_jacobian_serial(const DotForward& fwd, const Eigen::VectorXd& x,
                                         const ForwardState& state);

}  // namespace dot
