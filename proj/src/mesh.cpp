#include "dot/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dot {

namespace {

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                   const Eigen::Vector2d& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

}  // namespace

double TriMesh::element_area(int e) const {
    const auto& t = elements[e];
    return signed_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
}

TriMesh build_disk_mesh(double radius, double target_edge_length) {
    if (!(radius > 0.0) || !(target_edge_length > 0.0) || !(target_edge_length < radius)) {
        std::ostringstream msg;
        msg << "build_disk_mesh: degenerate parameters (radius=" << radius
            << ", target_edge_length=" << target_edge_length << ")";
        throw std::invalid_argument(msg.str());
    }

    const double pi = std::numbers::pi;
    const int n_rings = std::max<long>(1, std::lround(1.5 * radius / target_edge_length));

    TriMesh mesh;
    mesh.nodes.emplace_back(0.0, 0.0);

    std::vector<int> ring_start(n_rings + 1, 0);
    std::vector<int> ring_count(n_rings + 1, 0);
    for (int i = 1; i <= n_rings; ++i) {
        const int m = 2 * std::max<long>(3, std::lround(pi * i));
        const double r = radius * static_cast<double>(i) / n_rings;
        ring_start[i] = static_cast<int>(mesh.nodes.size());
        ring_count[i] = m;
        for (int k = 0; k < m; ++k) {
            const double a = 2.0 * pi * k / m;
            mesh.nodes.emplace_back(r * std::cos(a), r * std::sin(a));
        }
    }

    // Center fan.
    {
        const int s = ring_start[1], m = ring_count[1];
        for (int k = 0; k < m; ++k)
            mesh.elements.push_back({0, s + k, s + (k + 1) % m});
    }

    // Annulus strips: sweep both rings by angle, always bridging with the
    // ring whose next node comes first. Ties advance the outer ring, which
    // keeps the pattern invariant under the shared rotation symmetry.
    for (int i = 2; i <= n_rings; ++i) {
        const int si = ring_start[i - 1], p = ring_count[i - 1];
        const int so = ring_start[i], q = ring_count[i];
        int j = 0, k = 0;
        while (j < p || k < q) {
            const double next_in = 2.0 * pi * (j + 1) / p;
            const double next_out = 2.0 * pi * (k + 1) / q;
            const int ij = si + j % p;
            const int ok = so + k % q;
            if (k < q && (j >= p || next_out <= next_in)) {
                mesh.elements.push_back({ij, ok, so + (k + 1) % q});
                ++k;
            } else {
                mesh.elements.push_back({ij, ok, si + (j + 1) % p});
                ++j;
            }
        }
    }

    rebuild_boundary(mesh);
    validate_mesh(mesh);
    return mesh;
}

void rebuild_boundary(TriMesh& mesh) {
    std::map<std::array<int, 2>, int> edge_use;
    std::map<int, int> next_on_hull;
    for (const auto& t : mesh.elements) {
        for (int v = 0; v < 3; ++v) {
            int a = t[v], b = t[(v + 1) % 3];
            edge_use[{std::min(a, b), std::max(a, b)}]++;
        }
    }
    for (const auto& t : mesh.elements) {
        for (int v = 0; v < 3; ++v) {
            int a = t[v], b = t[(v + 1) % 3];
            if (edge_use[{std::min(a, b), std::max(a, b)}] == 1)
                next_on_hull[a] = b;  // boundary edge, oriented as in the element
        }
    }
    mesh.boundary_edges.clear();
    if (next_on_hull.empty()) return;
    const int start = next_on_hull.begin()->first;
    int cur = start;
    do {
        auto it = next_on_hull.find(cur);
        if (it == next_on_hull.end())
            throw std::runtime_error("rebuild_boundary: hull walk broke (open boundary)");
        mesh.boundary_edges.push_back({cur, it->second});
        cur = it->second;
    } while (cur != start && mesh.boundary_edges.size() <= next_on_hull.size());
    if (cur != start)
        throw std::runtime_error("rebuild_boundary: boundary is not a single loop");
}

void validate_mesh(const TriMesh& mesh) {
    const int n = mesh.n();
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& t = mesh.elements[e];
        for (int v : t)
            if (v < 0 || v >= n) throw std::runtime_error("validate_mesh: node index out of range");
        if (!(mesh.element_area(e) > 0.0))
            throw std::runtime_error("validate_mesh: nonpositive element area at element " +
                                     std::to_string(e));
    }
    std::map<std::array<int, 2>, int> edge_use;
    for (const auto& t : mesh.elements)
        for (int v = 0; v < 3; ++v) {
            int a = t[v], b = t[(v + 1) % 3];
            edge_use[{std::min(a, b), std::max(a, b)}]++;
        }
    int boundary = 0;
    for (const auto& [e, c] : edge_use) {
        if (c == 1)
            ++boundary;
        else if (c != 2)
            throw std::runtime_error("validate_mesh: edge shared by more than two elements");
    }
    const int b = mesh.boundary_node_count();
    if (boundary != b)
        throw std::runtime_error("validate_mesh: boundary edge list disagrees with adjacency");
    const long expected = 3L * (n - 1) - b;
    if (static_cast<long>(edge_use.size()) != expected)
        throw std::runtime_error("validate_mesh: Euler edge count violated");
}

std::vector<std::array<int, 2>> mesh_edges(const TriMesh& mesh) {
    std::vector<std::array<int, 2>> edges;
    edges.reserve(mesh.element_count() * 3);
    for (const auto& t : mesh.elements)
        for (int v = 0; v < 3; ++v) {
            int a = t[v], b = t[(v + 1) % 3];
            edges.push_back({std::min(a, b), std::max(a, b)});
        }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

namespace {

// Barycentric coordinates of p in element e; no clamping.
Eigen::Vector3d barycentric(const TriMesh& mesh, int e, const Eigen::Vector2d& p) {
    const auto& t = mesh.elements[e];
    const Eigen::Vector2d& a = mesh.nodes[t[0]];
    const Eigen::Vector2d& b = mesh.nodes[t[1]];
    const Eigen::Vector2d& c = mesh.nodes[t[2]];
    const double area = signed_area(a, b, c);
    return {signed_area(p, b, c) / area, signed_area(a, p, c) / area,
            signed_area(a, b, p) / area};
}

double interpolate_at(const TriMesh& from, const Eigen::VectorXd& field,
                      const Eigen::Vector2d& p) {
    int best = 0;
    double best_min = -std::numeric_limits<double>::infinity();
    Eigen::Vector3d best_bc = Eigen::Vector3d::Zero();
    for (int e = 0; e < from.element_count(); ++e) {
        const Eigen::Vector3d bc = barycentric(from, e, p);
        const double m = bc.minCoeff();
        if (m > best_min) {
            best_min = m;
            best = e;
            best_bc = bc;
            if (m >= 0.0) break;  // containing element found
        }
    }
    const auto& t = from.elements[best];
    return best_bc[0] * field[t[0]] + best_bc[1] * field[t[1]] + best_bc[2] * field[t[2]];
}

}  // namespace

Eigen::VectorXd interpolate_field(const TriMesh& from, const TriMesh& to,
                                  const Eigen::VectorXd& field) {
    if (field.size() != from.n())
        throw std::invalid_argument("interpolate_field: field length does not match mesh");
    Eigen::VectorXd out(to.n());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < to.n(); ++i) out[i] = interpolate_at(from, field, to.nodes[i]);
    return out;
}

Eigen::VectorXd interpolate_field_serial(const TriMesh& from, const TriMesh& to,
                                         const Eigen::VectorXd& field) {
    if (field.size() != from.n())
        throw std::invalid_argument("interpolate_field: field length does not match mesh");
    Eigen::VectorXd out(to.n());
    for (int i = 0; i < to.n(); ++i) out[i] = interpolate_at(from, field, to.nodes[i]);
    return out;
}

void save_mesh(const TriMesh& mesh, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("save_mesh: cannot open " + path);
    std::fprintf(f, "nodes %d elements %d\n", mesh.n(), mesh.element_count());
    for (const auto& p : mesh.nodes) std::fprintf(f, "%.17g %.17g\n", p.x(), p.y());
    for (const auto& t : mesh.elements) std::fprintf(f, "%d %d %d\n", t[0], t[1], t[2]);
    std::fclose(f);
}

TriMesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_mesh: cannot open " + path);
    std::string tok_nodes, tok_elems;
    int n = 0, m = 0;
    in >> tok_nodes >> n >> tok_elems >> m;
    if (tok_nodes != "nodes" || tok_elems != "elements" || !in)
        throw std::runtime_error("load_mesh: bad header in " + path);
    TriMesh mesh;
    mesh.nodes.resize(n);
    mesh.elements.resize(m);
    for (int i = 0; i < n; ++i) in >> mesh.nodes[i].x() >> mesh.nodes[i].y();
    for (int e = 0; e < m; ++e) in >> mesh.elements[e][0] >> mesh.elements[e][1] >> mesh.elements[e][2];
    if (!in) throw std::runtime_error("load_mesh: truncated file " + path);
    rebuild_boundary(mesh);
    return mesh;
}

}  // namespace dot
