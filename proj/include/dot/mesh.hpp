#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dot {

/// Triangulation of a disk. Elements are counterclockwise; boundary edges
/// walk the hull counterclockwise.
struct TriMesh {
    std::vector<Eigen::Vector2d> nodes;
    std::vector<std::array<int, 3>> elements;
    std::vector<std::array<int, 2>> boundary_edges;

    int n() const { return static_cast<int>(nodes.size()); }
    int element_count() const { return static_cast<int>(elements.size()); }
    int boundary_node_count() const { return static_cast<int>(boundary_edges.size()); }

    double element_area(int e) const;
};

/// Structured polar mesh of the disk: concentric rings joined by an
/// angle-sweep triangulation. Ring counts are even so the node set is
/// invariant under rotation by pi. Ring spacing is 2/3 of the requested
/// edge length, which matches the node densities of typical FE disk
/// meshes quoted for that target edge.
TriMesh build_disk_mesh(double radius, double target_edge_length);

/// Recomputes boundary_edges from the element list (used after loading).
void rebuild_boundary(TriMesh& mesh);

/// Checks orientation, edge-manifoldness and the Euler count
/// E = 3(n-1) - b. Throws std::runtime_error on violation.
void validate_mesh(const TriMesh& mesh);

/// All undirected edges (i < j), sorted lexicographically.
std::vector<std::array<int, 2>> mesh_edges(const TriMesh& mesh);

/// Piecewise-linear interpolation of a nodal field onto another mesh of the
/// same disk. Points that fall outside every source element (boundary
/// rounding) are evaluated with the linear extension of the nearest element,
/// so affine fields are reproduced exactly.
Eigen::VectorXd interpolate_field(const TriMesh& from, const TriMesh& to,
                                  const Eigen::VectorXd& field);
Eigen::VectorXd interpolate_field_serial(const TriMesh& from, const TriMesh& to,
                                         const Eigen::VectorXd& field);

void save_mesh(const TriMesh& mesh, const std::string& path);
TriMesh load_mesh(const std::string& path);

}  // namespace dot
