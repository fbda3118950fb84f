#pragma once

#include <string>
#include <vector>

#include "dot/field.hpp"
#include "dot/mesh.hpp"

namespace dot {

struct Inclusion {
    enum class Shape { Disk, Polygon };
    Shape shape = Shape::Disk;
    Eigen::Vector2d center{0.0, 0.0};
    double radius = 0.0;                   // disks
    std::vector<Eigen::Vector2d> vertices; // polygons
    double d_mua = 0.0;
    double d_mus = 0.0;

    bool contains(const Eigen::Vector2d& p) const;
};

struct Phantom {
    double background_mua = 0.01;
    double background_mus = 1.0;
    std::vector<Inclusion> inclusions;
};

/// Standard test targets: two disks (radii 5 and 3 mm) with +50% / -30%
/// contrast, the slightly larger sharp-edged pair for the difference prior,
/// and the positive-only high-contrast variant.
Phantom phantom_two_inclusions();
Phantom phantom_two_inclusions_large();
Phantom phantom_positive_high_contrast();

/// Nodal field: background plus inclusion deltas, sharp-edged.
OpticalField rasterize(const Phantom& phantom, const TriMesh& mesh);

struct RelativeError {
    double mua_pct = 0.0;
    double mus_pct = 0.0;
};

/// Interpolates truth and estimate onto the common mesh and reports
/// ||true - est|| / ||true|| per class, in percent.
RelativeError relative_error(const OpticalField& x_true, const TriMesh& truth_mesh,
                             const OpticalField& x_map, const TriMesh& map_mesh,
                             const TriMesh& common_mesh);

}  // namespace dot
