#include "dot/layout.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dot {

namespace {

struct BoundaryArc {
    std::vector<double> cum;  // cumulative arc length at the start of each edge
    std::vector<double> len;  // edge lengths
    double total = 0.0;
};

BoundaryArc boundary_arc(const TriMesh& mesh) {
    BoundaryArc arc;
    arc.cum.reserve(mesh.boundary_edges.size());
    arc.len.reserve(mesh.boundary_edges.size());
    for (const auto& e : mesh.boundary_edges) {
        arc.cum.push_back(arc.total);
        const double l = (mesh.nodes[e[1]] - mesh.nodes[e[0]]).norm();
        arc.len.push_back(l);
        arc.total += l;
    }
    return arc;
}

// Arc-length position of the boundary point at polar angle `angle`.
double arc_position(const TriMesh& mesh, const BoundaryArc& arc, double angle) {
    const double two_pi = 2.0 * std::numbers::pi;
    double a = std::fmod(angle, two_pi);
    if (a < 0) a += two_pi;
    const int ne = static_cast<int>(arc.len.size());
    for (int e = 0; e < ne; ++e) {
        const auto& be = mesh.boundary_edges[e];
        double a0 = std::atan2(mesh.nodes[be[0]].y(), mesh.nodes[be[0]].x());
        double a1 = std::atan2(mesh.nodes[be[1]].y(), mesh.nodes[be[1]].x());
        if (a0 < 0) a0 += two_pi;
        if (a1 < 0) a1 += two_pi;
        if (a1 <= a0) a1 += two_pi;  // wrapping edge
        for (double shift : {0.0, two_pi}) {
            const double aa = a + shift;
            if (aa >= a0 && aa <= a1)
                return arc.cum[e] + (aa - a0) / (a1 - a0) * arc.len[e];
        }
    }
    throw std::runtime_error("arc_position: angle not bracketed by boundary edges");
}

Patch make_patch(const TriMesh& mesh, const BoundaryArc& arc, double center_angle,
                 double width) {
    Patch p;
    p.center_angle = center_angle;
    p.arc_length = 0.0;
    const double sc = arc_position(mesh, arc, center_angle);
    double lo = sc - 0.5 * width;
    double hi = sc + 0.5 * width;
    // Normalize to [0, total) and split a wrapping interval in two.
    auto wrap = [&](double s) {
        double v = std::fmod(s, arc.total);
        return v < 0 ? v + arc.total : v;
    };
    std::vector<std::pair<double, double>> spans;
    lo = wrap(lo);
    hi = lo + width;
    if (hi <= arc.total) {
        spans.push_back({lo, hi});
    } else {
        spans.push_back({lo, arc.total});
        spans.push_back({0.0, hi - arc.total});
    }
    const int ne = static_cast<int>(arc.len.size());
    for (int e = 0; e < ne; ++e) {
        const double s0 = arc.cum[e], s1 = arc.cum[e] + arc.len[e];
        for (const auto& [a, b] : spans) {
            const double c0 = std::max(s0, a), c1 = std::min(s1, b);
            if (c1 > c0 + 1e-14 * arc.total) {
                p.segments.push_back({e, (c0 - s0) / arc.len[e], (c1 - s0) / arc.len[e]});
                p.arc_length += c1 - c0;
            }
        }
    }
    return p;
}

}  // namespace

SourceDetectorLayout boundary_patches(const TriMesh& mesh, int n_src, int n_det,
                                      double width, double strength, double omega,
                                      double detector_offset) {
    if (n_src < 1 || n_det < 1)
        throw std::invalid_argument("boundary_patches: need at least one source and detector");
    const BoundaryArc arc = boundary_arc(mesh);
    const int n_max = std::max(n_src, n_det);
    if (!(width > 0.0) || width >= arc.total / n_max) {
        std::ostringstream msg;
        msg << "boundary_patches: width " << width << " too large for " << n_max
            << " patches on circumference " << arc.total;
        throw std::invalid_argument(msg.str());
    }

    SourceDetectorLayout layout;
    layout.width = width;
    layout.strength = strength;
    layout.omega = omega;
    layout.detector_offset = detector_offset;

    const double two_pi = 2.0 * std::numbers::pi;
    auto place = [&](int count, double offset) {
        std::vector<Patch> patches;
        for (int k = 0; k < count; ++k)
            patches.push_back(make_patch(mesh, arc, two_pi * k / count + offset, width));
        // Overlap within the family: equispaced intervals overlap when the
        // width exceeds the spacing.
        const double spacing = arc.total / count;
        if (count > 1 && width > spacing) {
            std::ostringstream msg;
            msg << "boundary_patches: patches 0 and 1 overlap (width " << width
                << " > spacing " << spacing << ")";
            throw std::invalid_argument(msg.str());
        }
        return patches;
    };
    layout.sources = place(n_src, 0.0);
    layout.detectors = place(n_det, detector_offset);
    return layout;
}

Eigen::VectorXd patch_basis_integrals(const TriMesh& mesh, const Patch& patch,
                                      double scale) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(mesh.n());
    for (const auto& seg : patch.segments) {
        const auto& e = mesh.boundary_edges[seg.edge];
        const double l = (mesh.nodes[e[1]] - mesh.nodes[e[0]]).norm();
        const double t0 = seg.t0, t1 = seg.t1;
        // P1 basis on the edge: phi_a = 1 - t, phi_b = t.
        const double ib = 0.5 * (t1 * t1 - t0 * t0);
        const double ia = (t1 - t0) - ib;
        v[e[0]] += scale * l * ia;
        v[e[1]] += scale * l * ib;
    }
    return v;
}

}  // namespace dot
