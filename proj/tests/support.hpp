// Shared fixtures for the test suites: the worked examples used throughout,
// seeded random instance generators, small brute-force deciders for the
// source problems of the reductions, and a triage dump for solver/oracle
// disagreements.

#pragma once

#include "idm/instance.hpp"
#include "idm/io.hpp"
#include "idm/oracle.hpp"
#include "idm/reductions.hpp"
#include "idm/schedule.hpp"
#include "idm/validity.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace idm::testing {

// --- the worked examples -------------------------------------------------

// Three banks; u owes v 20@[1,3] and 15@[4,5], v owes w 25@2, w owes v
// 25@[4,6]; assets 30/20/10. Lifetime 6; u is insolvent by 5.
inline IdmInstance fig1() {
    return InstanceBuilder()
        .node("u", 30)
        .node("v", 20)
        .node("w", 10)
        .debt("u", "v", 20, 1, 3)
        .debt("u", "v", 15, 4, 5)
        .debt("v", "w", 25, 2)
        .debt("w", "v", 25, 4, 6)
        .build();
}

// u --1@[1,2]--> v --1@1--> w with a single unit of cash at u.
inline IdmInstance fig2() {
    return InstanceBuilder()
        .node("u", 1)
        .node("v", 0)
        .node("w", 0)
        .debt("u", "v", 1, 1, 2)
        .debt("v", "w", 1, 1)
        .build();
}

// Four-cycle of unit debts 1@[1,2]; assets per node configurable:
// 'a' all 1, 'b' only u holds 1, 'c' all 0.
inline IdmInstance fig3(char which) {
    long long ua = which == 'c' ? 0 : 1;
    long long rest = which == 'a' ? 1 : 0;
    return InstanceBuilder()
        .node("u", ua)
        .node("v", rest)
        .node("w", rest)
        .node("x", rest)
        .debt("u", "v", 1, 1, 2)
        .debt("v", "w", 1, 1, 2)
        .debt("w", "x", 1, 1, 2)
        .debt("x", "u", 1, 1, 2)
        .build();
}

// --- random instances ------------------------------------------------------

struct RandomSpec {
    int max_nodes = 5;
    int max_debts = 6;
    int max_amount = 3;
    int max_time = 4;
    int max_assets = 3;
};

inline IdmInstance random_instance(std::mt19937_64& rng, const RandomSpec& spec) {
    std::uniform_int_distribution<int> nodes_d(1, spec.max_nodes);
    const int n = nodes_d(rng);
    std::uniform_int_distribution<int> debts_d(0, spec.max_debts);
    std::uniform_int_distribution<int> amount_d(1, spec.max_amount);
    std::uniform_int_distribution<int> time_d(1, spec.max_time);
    std::uniform_int_distribution<int> asset_d(0, spec.max_assets);
    std::uniform_int_distribution<int> node_d(0, n - 1);
    InstanceBuilder b;
    for (int v = 0; v < n; ++v) b.node("n" + std::to_string(v), asset_d(rng));
    const int m = n >= 2 ? debts_d(rng) : 0;
    for (int e = 0; e < m; ++e) {
        int u = node_d(rng), v = node_d(rng);
        if (u == v) v = (v + 1) % n;
        int t1 = time_d(rng), t2 = time_d(rng);
        if (t1 > t2) std::swap(t1, t2);
        b.debt("n" + std::to_string(u), "n" + std::to_string(v), amount_d(rng), t1, t2);
    }
    return b.build();
}

inline IdmInstance random_exact_due_instance(std::mt19937_64& rng, const RandomSpec& spec) {
    std::uniform_int_distribution<int> nodes_d(1, spec.max_nodes);
    const int n = nodes_d(rng);
    std::uniform_int_distribution<int> debts_d(0, spec.max_debts);
    std::uniform_int_distribution<int> amount_d(1, spec.max_amount);
    std::uniform_int_distribution<int> time_d(1, spec.max_time);
    std::uniform_int_distribution<int> asset_d(0, spec.max_assets);
    std::uniform_int_distribution<int> node_d(0, n - 1);
    InstanceBuilder b;
    for (int v = 0; v < n; ++v) b.node("n" + std::to_string(v), asset_d(rng));
    const int m = n >= 2 ? debts_d(rng) : 0;
    for (int e = 0; e < m; ++e) {
        int u = node_d(rng), v = node_d(rng);
        if (u == v) v = (v + 1) % n;
        int t = time_d(rng);
        b.debt("n" + std::to_string(u), "n" + std::to_string(v), amount_d(rng), t, t);
    }
    return b.build();
}

// Uniform random out-tree: node 0 is the root, every other node attaches to a
// random earlier node; debts run parent to child along tree edges only.
inline IdmInstance random_out_tree(std::mt19937_64& rng, int max_nodes, int max_debts,
                                   int max_amount, int max_time, int max_assets) {
    std::uniform_int_distribution<int> nodes_d(1, max_nodes);
    const int n = nodes_d(rng);
    std::vector<int> parent(n, -1);
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> p_d(0, v - 1);
        parent[v] = p_d(rng);
    }
    std::uniform_int_distribution<int> amount_d(1, max_amount);
    std::uniform_int_distribution<int> time_d(1, max_time);
    std::uniform_int_distribution<int> asset_d(0, max_assets);
    InstanceBuilder b;
    for (int v = 0; v < n; ++v) b.node("n" + std::to_string(v), asset_d(rng));
    if (n > 1) {
        std::uniform_int_distribution<int> debts_d(0, max_debts);
        std::uniform_int_distribution<int> child_d(1, n - 1);
        int m = debts_d(rng);
        for (int e = 0; e < m; ++e) {
            int v = child_d(rng);
            int t1 = time_d(rng), t2 = time_d(rng);
            if (t1 > t2) std::swap(t1, t2);
            b.debt("n" + std::to_string(parent[v]), "n" + std::to_string(v), amount_d(rng), t1,
                   t2);
        }
        // every child keeps at least one incoming debt so the footprint stays
        // a tree spanning the declared nodes
        for (int v = 1; v < n; ++v) {
            int t1 = time_d(rng), t2 = time_d(rng);
            if (t1 > t2) std::swap(t1, t2);
            b.debt("n" + std::to_string(parent[v]), "n" + std::to_string(v), amount_d(rng), t1,
                   t2);
        }
    }
    return b.build();
}

// Multiplies every timestamp by a per-instance random factor (with jitter per
// extremal time, order preserving) to exercise compaction.
inline IdmInstance dilate_timestamps(std::mt19937_64& rng, const IdmInstance& inst,
                                     int max_factor = 50) {
    std::uniform_int_distribution<int> factor_d(2, max_factor);
    const int factor = factor_d(rng);
    std::uniform_int_distribution<int> jitter_d(0, factor - 1);
    std::map<int, int> remap;
    for (int t : extremal_timestamps(inst)) remap[t] = t * factor + jitter_d(rng);
    std::vector<DebtSpec> specs;
    for (const Debt& d : inst.debts())
        specs.push_back(DebtSpec{inst.node_id(d.debtor), inst.node_id(d.creditor), d.label,
                                 d.terms.amount, remap.at(d.terms.t1), remap.at(d.terms.t2)});
    return IdmInstance::build(inst.nodes(), specs, inst.initial_assets());
}

// --- brute-force deciders for the reduction sources -------------------------

inline bool sat_brute_force(const Sat3Formula& phi) {
    for (int mask = 0; mask < (1 << phi.variables); ++mask) {
        bool ok = true;
        for (const auto& clause : phi.clauses) {
            bool sat = false;
            for (int lit : clause) {
                bool value = (mask >> (std::abs(lit) - 1)) & 1;
                if ((lit > 0) == value) sat = true;
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

// Partition into two equal-size halves of equal sum.
inline bool equal_cardinality_partitionable(const std::vector<long long>& s) {
    const int n = static_cast<int>(s.size());
    if (n % 2 != 0) return false;
    long long sum = 0;
    for (long long v : s) sum += v;
    if (sum % 2 != 0) return false;
    for (int mask = 0; mask < (1 << n); ++mask) {
        if (__builtin_popcount(mask) != n / 2) continue;
        long long part = 0;
        for (int i = 0; i < n; ++i)
            if ((mask >> i) & 1) part += s[i];
        if (part * 2 == sum) return true;
    }
    return false;
}

inline bool partitionable(const std::vector<long long>& s) {
    long long sum = 0;
    for (long long v : s) sum += v;
    if (sum % 2 != 0) return false;
    for (int mask = 0; mask < (1 << s.size()); ++mask) {
        long long part = 0;
        for (size_t i = 0; i < s.size(); ++i)
            if ((mask >> i) & 1) part += s[i];
        if (part * 2 == sum) return true;
    }
    return false;
}

inline bool subset_summable(const std::vector<long long>& s, long long k) {
    for (int mask = 0; mask < (1 << s.size()); ++mask) {
        long long part = 0;
        for (size_t i = 0; i < s.size(); ++i)
            if ((mask >> i) & 1) part += s[i];
        if (part == k) return true;
    }
    return false;
}

inline bool sourced_hampath_exists(const SourcedDigraph& h) {
    std::vector<int> rest;
    for (int v = 1; v <= h.vertices; ++v)
        if (v != h.source) rest.push_back(v);
    std::set<std::pair<int, int>> arcs(h.edges.begin(), h.edges.end());
    std::sort(rest.begin(), rest.end());
    do {
        int at = h.source;
        bool ok = true;
        for (int v : rest) {
            if (!arcs.count({at, v})) {
                ok = false;
                break;
            }
            at = v;
        }
        if (ok) return true;
    } while (std::next_permutation(rest.begin(), rest.end()));
    return false;
}

// --- canonical 3-SAT-3 enumeration ------------------------------------------

// All clause multisets over n variables in which every variable occurs
// exactly three times with both polarities present, clauses hold 1..3
// distinct, non-complementary literals, and the clause list is sorted
// (canonical up to clause reordering).
inline std::vector<Sat3Formula> enumerate_canonical_3sat3(int n) {
    std::vector<std::vector<int>> types;
    std::vector<int> lits;
    for (int v = 1; v <= n; ++v) {
        lits.push_back(v);
        lits.push_back(-v);
    }
    const int L = static_cast<int>(lits.size());
    for (int a = 0; a < L; ++a) {
        types.push_back({lits[a]});
        for (int b = a + 1; b < L; ++b) {
            if (lits[a] == -lits[b]) continue;
            types.push_back({lits[a], lits[b]});
            for (int c = b + 1; c < L; ++c) {
                if (lits[a] == -lits[c] || lits[b] == -lits[c]) continue;
                types.push_back({lits[a], lits[b], lits[c]});
            }
        }
    }
    std::sort(types.begin(), types.end());

    std::vector<Sat3Formula> out;
    std::vector<int> pos(n + 1, 0), neg(n + 1, 0);
    std::vector<std::vector<int>> chosen;
    std::function<void(size_t)> rec = [&](size_t idx) {
        bool complete = true;
        for (int v = 1; v <= n; ++v) {
            if (pos[v] + neg[v] > 3 || pos[v] > 2 || neg[v] > 2) return;
            if (pos[v] + neg[v] != 3) complete = false;
        }
        if (complete) {
            bool polarities = true;
            for (int v = 1; v <= n; ++v)
                if (pos[v] == 0 || neg[v] == 0) polarities = false;
            if (polarities) {
                Sat3Formula phi;
                phi.variables = n;
                phi.clauses = chosen;
                phi.check();
                out.push_back(std::move(phi));
            }
            return;
        }
        if (idx == types.size()) return;
        // skip this type entirely, or take one more copy of it
        rec(idx + 1);
        for (int lit : types[idx]) (lit > 0 ? pos : neg)[std::abs(lit)]++;
        chosen.push_back(types[idx]);
        rec(idx); // multisets: the same clause may repeat
        chosen.pop_back();
        for (int lit : types[idx]) (lit > 0 ? pos : neg)[std::abs(lit)]--;
    };
    rec(0);
    return out;
}

// --- disagreement triage ------------------------------------------------------

// Serializes an instance and both sides of a disagreement for offline triage;
// returns the directory used.
inline std::string dump_disagreement(const std::string& tag, const IdmInstance& inst,
                                     const std::string& left, const std::string& right) {
    namespace fs = std::filesystem;
    fs::path dir = fs::path("triage") / tag;
    fs::create_directories(dir);
    std::ofstream(dir / "instance.idm") << emit_instance(inst);
    std::ofstream(dir / "left.txt") << left;
    std::ofstream(dir / "right.txt") << right;
    return dir.string();
}

} // namespace idm::testing
