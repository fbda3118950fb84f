#pragma once

#include <string>

#include "dot/mesh.hpp"

namespace dot {

/// Writes a grayscale PGM of a nodal field sampled on a pixel grid over the
/// mesh bounding box (nearest-node value inside the domain), clipped at the
/// given percentiles before mapping. A sidecar text file records min/max and
/// the clip values.
void export_image(const Eigen::VectorXd& field, const TriMesh& mesh,
                  const std::string& path, double clip_lo_pct = 1.0,
                  double clip_hi_pct = 99.0, int pixels = 256);

}  // namespace dot
