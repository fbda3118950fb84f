#include "dot/phantom.hpp"

#include <sstream>
#include <stdexcept>

namespace dot {

bool Inclusion::contains(const Eigen::Vector2d& p) const {
    if (shape == Shape::Disk) return (p - center).norm() <= radius;
    // even-odd rule
    bool inside = false;
    const int n = static_cast<int>(vertices.size());
    for (int i = 0, j = n - 1; i < n; j = i++) {
        const auto& a = vertices[i];
        const auto& b = vertices[j];
        if ((a.y() > p.y()) != (b.y() > p.y()) &&
            p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x())
            inside = !inside;
    }
    return inside;
}

Phantom phantom_two_inclusions() {
    Phantom ph;
    ph.inclusions.push_back({Inclusion::Shape::Disk, {-10.0, 6.0}, 5.0, {}, 0.005, 0.5});
    ph.inclusions.push_back({Inclusion::Shape::Disk, {9.0, -7.0}, 3.0, {}, -0.003, -0.3});
    return ph;
}

Phantom phantom_two_inclusions_large() {
    Phantom ph;
    ph.inclusions.push_back({Inclusion::Shape::Disk, {-9.0, 6.0}, 7.0, {}, 0.005, 0.5});
    ph.inclusions.push_back({Inclusion::Shape::Disk, {9.0, -7.0}, 5.0, {}, -0.003, -0.3});
    return ph;
}

Phantom phantom_positive_high_contrast() {
    Phantom ph;
    ph.inclusions.push_back({Inclusion::Shape::Disk, {-9.0, 6.0}, 7.0, {}, 0.04, 4.0});
    ph.inclusions.push_back({Inclusion::Shape::Disk, {9.0, -7.0}, 5.0, {}, 0.04, 4.0});
    return ph;
}

OpticalField rasterize(const Phantom& phantom, const TriMesh& mesh) {
    OpticalField f = OpticalField::homogeneous(mesh.n(), phantom.background_mua,
                                               phantom.background_mus);
    for (int i = 0; i < mesh.n(); ++i)
        for (const auto& inc : phantom.inclusions)
            if (inc.contains(mesh.nodes[i])) {
                f.mua[i] += inc.d_mua;
                f.mus[i] += inc.d_mus;
            }
    if (!f.positive()) {
        for (size_t k = 0; k < phantom.inclusions.size(); ++k) {
            const auto& inc = phantom.inclusions[k];
            if (phantom.background_mua + inc.d_mua <= 0.0 ||
                phantom.background_mus + inc.d_mus <= 0.0) {
                std::ostringstream msg;
                msg << "rasterize: inclusion " << k << " drives the field nonpositive "
                    << "(d_mua=" << inc.d_mua << ", d_mus=" << inc.d_mus << ")";
                throw std::invalid_argument(msg.str());
            }
        }
        throw std::invalid_argument("rasterize: overlapping inclusions drive the field nonpositive");
    }
    return f;
}

RelativeError relative_error(const OpticalField& x_true, const TriMesh& truth_mesh,
                             const OpticalField& x_map, const TriMesh& map_mesh,
                             const TriMesh& common_mesh) {
    if (x_true.n() != truth_mesh.n() || x_map.n() != map_mesh.n())
        throw std::invalid_argument("relative_error: field/mesh size mismatch");
    const Eigen::VectorXd ta = interpolate_field(truth_mesh, common_mesh, x_true.mua);
    const Eigen::VectorXd ts = interpolate_field(truth_mesh, common_mesh, x_true.mus);
    const Eigen::VectorXd ma = interpolate_field(map_mesh, common_mesh, x_map.mua);
    const Eigen::VectorXd ms = interpolate_field(map_mesh, common_mesh, x_map.mus);
    RelativeError re;
    re.mua_pct = 100.0 * (ta - ma).norm() / ta.norm();
    re.mus_pct = 100.0 * (ts - ms).norm() / ts.norm();
    return re;
}

}  // namespace dot
