// ============================================================================
// idm/shape.hpp — structural classification of instances
// ============================================================================
//
// The solver routing table keys on graph shape: the footprint (orientations
// and multiplicities forgotten), acyclicity of the collapsed digraph, and the
// out-tree / out-path special cases, plus the all-exact-due property
// (every debt has t1 == t2).

#pragma once

#include "idm/instance.hpp"

#include <queue>
#include <set>

namespace idm {

struct ShapeClass {
    bool is_multiditree = false; // footprint is a tree
    bool is_dag = false;         // collapsed digraph has no directed cycle
    bool is_out_tree = false;    // multiditree, all edges directed away from one root
    bool is_out_path = false;    // out-tree whose footprint is a path rooted at an end
    bool all_exact_due = false;  // every debt has t1 == t2
    int out_tree_root = -1;      // root index when is_out_tree
};

inline ShapeClass classify_shape(const IdmInstance& inst) {
    ShapeClass s;
    const int n = inst.node_count();

    s.all_exact_due = true;
    for (const Debt& d : inst.debts())
        if (d.terms.t1 != d.terms.t2) {
            s.all_exact_due = false;
            break;
        }

    std::set<std::pair<int, int>> arcs; // collapsed directed edges
    std::set<std::pair<int, int>> und;  // footprint edges, pair sorted
    for (const Debt& d : inst.debts()) {
        arcs.insert({d.debtor, d.creditor});
        und.insert({std::min(d.debtor, d.creditor), std::max(d.debtor, d.creditor)});
    }

    // footprint tree: connected with exactly n-1 edges
    if (n > 0 && static_cast<int>(und.size()) == n - 1) {
        std::vector<std::vector<int>> adj(n);
        for (auto [a, b] : und) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::vector<char> seen(n, 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int reached = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    q.push(w);
                }
        }
        s.is_multiditree = reached == n;
    }

    // acyclicity of the collapsed digraph (Kahn)
    {
        std::vector<int> indeg(n, 0);
        std::vector<std::vector<int>> adj(n);
        for (auto [a, b] : arcs) {
            adj[a].push_back(b);
            ++indeg[b];
        }
        std::queue<int> q;
        for (int v = 0; v < n; ++v)
            if (indeg[v] == 0) q.push(v);
        int done = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            ++done;
            for (int w : adj[v])
                if (--indeg[w] == 0) q.push(w);
        }
        s.is_dag = done == n;
    }

    if (s.is_multiditree) {
        // out-tree: no reciprocal pair, every node has collapsed in-degree <= 1,
        // and exactly one node (the root) has in-degree 0.
        bool ok = true;
        for (auto [a, b] : arcs)
            if (arcs.count({b, a})) {
                ok = false;
                break;
            }
        std::vector<int> indeg(n, 0);
        for (auto [a, b] : arcs) {
            (void)a;
            ++indeg[b];
        }
        int roots = 0, root = -1;
        for (int v = 0; v < n; ++v) {
            if (indeg[v] > 1) ok = false;
            if (indeg[v] == 0) {
                ++roots;
                root = v;
            }
        }
        if (ok && roots == 1) {
            s.is_out_tree = true;
            s.out_tree_root = root;
            std::vector<int> deg(n, 0);
            for (auto [a, b] : und) {
                ++deg[a];
                ++deg[b];
            }
            bool path = true;
            for (int v = 0; v < n; ++v)
                if (deg[v] > 2) path = false;
            s.is_out_path = path && (n == 1 || deg[root] <= 1);
        }
    }
    return s;
}

} // namespace idm
