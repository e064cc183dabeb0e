#pragma once

#include <Eigen/Sparse>
#include <algorithm>
#include <queue>
#include <vector>

namespace rbfheat {

/// Bijection on row indices; old_to_new[old] = new, new_to_old[new] = old.
struct Permutation {
    std::vector<int> old_to_new, new_to_old;

    int size() const { return static_cast<int>(old_to_new.size()); }
    static Permutation identity(int n) {
        Permutation p;
        p.old_to_new.resize(n);
        p.new_to_old.resize(n);
        for (int i = 0; i < n; ++i) p.old_to_new[i] = p.new_to_old[i] = i;
        return p;
    }
};

inline int bandwidth(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a) {
    int bw = 0;
    for (int i = 0; i < a.outerSize(); ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a, i); it; ++it)
            bw = std::max(bw, std::abs(static_cast<int>(it.row()) - static_cast<int>(it.col())));
    return bw;
}

/// Reverse Cuthill-McKee ordering of the symmetrized sparsity pattern.
/// BFS starts at the minimum-degree vertex of each connected component;
/// neighbors enqueue in ascending (degree, index) order; the final order is
/// reversed.
inline Permutation rcm_permutation(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a) {
    const int n = static_cast<int>(a.rows());
    // symmetrized adjacency, diagonal dropped
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < a.outerSize(); ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a, i); it; ++it) {
            int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
            if (r == c) continue;
            adj[r].push_back(c);
            adj[c].push_back(r);
        }
    for (auto& nb : adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }

    std::vector<int> degree(n);
    for (int i = 0; i < n; ++i) degree[i] = static_cast<int>(adj[i].size());

    std::vector<bool> visited(n, false);
    std::vector<int> cm;
    cm.reserve(n);
    for (int pass = 0; pass < n; ++pass) {
        // next unvisited vertex of minimum (degree, index): one BFS per component
        int start = -1;
        for (int i = 0; i < n; ++i)
            if (!visited[i] && (start < 0 || degree[i] < degree[start])) start = i;
        if (start < 0) break;
        std::queue<int> bfs;
        bfs.push(start);
        visited[start] = true;
        cm.push_back(start);
        while (!bfs.empty()) {
            int u = bfs.front();
            bfs.pop();
            std::vector<int> next;
            for (int v : adj[u])
                if (!visited[v]) {
                    visited[v] = true;
                    next.push_back(v);
                }
            std::sort(next.begin(), next.end(),
                      [&](int x, int y) { return std::tie(degree[x], x) < std::tie(degree[y], y); });
            for (int v : next) {
                cm.push_back(v);
                bfs.push(v);
            }
        }
    }

    Permutation p;
    p.old_to_new.assign(n, -1);
    p.new_to_old.assign(n, -1);
    for (int k = 0; k < n; ++k) {
        int old = cm[n - 1 - k];
        p.new_to_old[k] = old;
        p.old_to_new[old] = k;
    }
    return p;
}

/// P A P^T via triplet remap: entry (i, j) moves to (perm(i), perm(j)).
inline Eigen::SparseMatrix<double, Eigen::RowMajor> permute_symmetric(
    const Eigen::SparseMatrix<double, Eigen::RowMajor>& a, const Permutation& p) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(a.nonZeros());
    for (int i = 0; i < a.outerSize(); ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a, i); it; ++it)
            trips.emplace_back(p.old_to_new[it.row()], p.old_to_new[it.col()], it.value());
    Eigen::SparseMatrix<double, Eigen::RowMajor> out(a.rows(), a.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    out.makeCompressed();
    return out;
}

}  // namespace rbfheat
