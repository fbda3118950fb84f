#pragma once

#include <vector>

#include "dot/mesh.hpp"

namespace dot {

/// Part of one boundary edge covered by a patch, as a parameter interval
/// [t0, t1] of the edge (t runs from the first to the second edge node).
struct PatchSegment {
    int edge;  // index into mesh.boundary_edges
    double t0;
    double t1;
};

/// Surface patch: a contiguous run of (partially) covered boundary edges.
struct Patch {
    double center_angle;  // rad
    double arc_length;    // mm, realized
    std::vector<PatchSegment> segments;
};

struct SourceDetectorLayout {
    std::vector<Patch> sources;
    std::vector<Patch> detectors;
    double width = 2.0;       // mm
    double strength = 1.0;    // source strength q
    double omega = 0.0;       // modulation frequency, rad/s
    double detector_offset = 0.0;  // angular offset of the detector grid, rad

    int n_src() const { return static_cast<int>(sources.size()); }
    int n_det() const { return static_cast<int>(detectors.size()); }
    int data_size() const { return 2 * n_src() * n_det(); }
};

/// Places n_src source and n_det detector patches of the given width at
/// equispaced boundary angles (detectors shifted by detector_offset).
/// Patches are cut exactly at the requested arc width; edges may be covered
/// partially.
SourceDetectorLayout boundary_patches(const TriMesh& mesh, int n_src, int n_det,
                                      double width, double strength, double omega,
                                      double detector_offset = 0.0);

/// Integrals of the P1 boundary basis over the patch: out[i] = integral of
/// basis_i along the covered arc, times `scale`. Length-n vector, sparse in
/// effect.
Eigen::VectorXd patch_basis_integrals(const TriMesh& mesh, const Patch& patch,
                                      double scale);

}  // namespace dot
