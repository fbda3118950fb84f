#include "dot/difference.hpp"

#include <deque>
#include <map>
#include <stdexcept>
#include <vector>

namespace dot {

DifferenceStructure build_difference_structure(const TriMesh& mesh) {
    const int n = mesh.n();
    const auto edges = mesh_edges(mesh);
    const int ne = static_cast<int>(edges.size());

    DifferenceStructure ds;
    ds.edge_set.assign(edges.begin(), edges.end());
    ds.edge_set.push_back({0, -1});  // gauge: d = x_0 - 0
    ds.gauge_index = ne;
    const int q = ne + 1;

    std::vector<Eigen::Triplet<double>> tb;
    tb.reserve(2 * q);
    for (int t = 0; t < ne; ++t) {
        tb.emplace_back(t, edges[t][0], 1.0);
        tb.emplace_back(t, edges[t][1], -1.0);
    }
    tb.emplace_back(ne, 0, 1.0);
    ds.B.resize(q, n);
    ds.B.setFromTriplets(tb.begin(), tb.end());

    // Loop rows: walking element (a,b,c) counterclockwise, each directed
    // step u->v contributes -d_(u,v) if u < v (d = x_u - x_v) and +d_(v,u)
    // otherwise, so the signed differences telescope to zero.
    std::map<std::array<int, 2>, int> edge_index;
    for (int t = 0; t < ne; ++t) edge_index[edges[t]] = t;
    std::vector<Eigen::Triplet<double>> tm;
    tm.reserve(3 * mesh.element_count());
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& tri = mesh.elements[e];
        for (int v = 0; v < 3; ++v) {
            const int a = tri[v], b = tri[(v + 1) % 3];
            const int idx = edge_index.at({std::min(a, b), std::max(a, b)});
            tm.emplace_back(e, idx, a < b ? -1.0 : 1.0);
        }
    }
    ds.M.resize(mesh.element_count(), q);
    ds.M.setFromTriplets(tm.begin(), tm.end());

    // BFS spanning tree from node 0. x_j = gauge + signed sum of tree-path
    // differences; P rows accumulate the path coefficients.
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge idx)
    for (int t = 0; t < ne; ++t) {
        adj[edges[t][0]].push_back({edges[t][1], t});
        adj[edges[t][1]].push_back({edges[t][0], t});
    }
    std::vector<int> parent(n, -2), parent_edge(n, -1);
    std::deque<int> queue;
    parent[0] = -1;
    queue.push_back(0);
    std::vector<int> order;
    order.reserve(n);
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        order.push_back(u);
        for (const auto& [v, t] : adj[u])
            if (parent[v] == -2) {
                parent[v] = u;
                parent_edge[v] = t;
                queue.push_back(v);
            }
    }
    if (static_cast<int>(order.size()) != n)
        throw std::runtime_error("build_difference_structure: mesh is disconnected");

    // Path coefficients by sparse accumulation in BFS order, so each row
    // extends its parent's.
    std::vector<std::vector<std::pair<int, double>>> row(n);
    row[0] = {{ne, 1.0}};
    for (int u : order) {
        if (u == 0) continue;
        row[u] = row[parent[u]];
        const int t = parent_edge[u];
        // d_t = x_i - x_j with (i,j) = edges[t]; stepping parent->u adds
        // +d_t when u == i, -d_t when u == j.
        row[u].push_back({t, edges[t][0] == u ? 1.0 : -1.0});
    }
    std::vector<Eigen::Triplet<double>> tp;
    for (int u = 0; u < n; ++u)
        for (const auto& [t, c] : row[u]) tp.emplace_back(u, t, c);
    ds.P.resize(n, q);
    ds.P.setFromTriplets(tp.begin(), tp.end());
    return ds;
}

}  // namespace dot
