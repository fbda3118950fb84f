#pragma once

#include <Eigen/Sparse>

#include "dot/mesh.hpp"

namespace dot {

/// Difference parameterization of a nodal field: d = Bx over all mesh edges
/// plus one gauge entry d_q-1 = x_0 fixing the absolute level. P reconstructs
/// x = Pd for loop-consistent d via a BFS spanning tree rooted at node 0;
/// M stacks one zero-sum loop constraint per mesh element.
struct DifferenceStructure {
    std::vector<std::array<int, 2>> edge_set;  // (i, j) meaning d = x_i - x_j
    int gauge_index = 0;                       // row of the gauge difference
    Eigen::SparseMatrix<double> B;             // q x n
    Eigen::SparseMatrix<double> P;             // n x q
    Eigen::SparseMatrix<double> M;             // p x q

    int q() const { return static_cast<int>(B.rows()); }
    int p() const { return static_cast<int>(M.rows()); }
};

DifferenceStructure build_difference_structure(const TriMesh& mesh);

}  // namespace dot
