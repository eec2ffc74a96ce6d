// ============================================================================
// idm/reductions.hpp — hardness-reduction instance generators
// ============================================================================
//
// Each generator maps a combinatorial object (bounded-occurrence CNF, number
// multiset, sourced digraph) to a debt-network instance whose optimum answers
// the source question. They serve two roles: cross-validation targets for the
// exhaustive oracle at tiny scale, and a reproducible instance corpus for the
// CLI. Structural properties promised per family (node counts, lifetime,
// amount bounds, acyclicity) are asserted on every build and throw on
// mismatch.

#pragma once

#include "idm/instance.hpp"
#include "idm/shape.hpp"

#include <optional>
#include <sstream>

namespace idm {

class MalformedFormula : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};
class MalformedInput : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};
class OddSum : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// CNF with at most 3 literals per clause and exactly 3 occurrences of every
// variable, both polarities present, no clause holding a literal twice or
// together with its negation. Literals are +i / -i over 1-based variables.
struct Sat3Formula {
    int variables = 0;
    std::vector<std::vector<int>> clauses;

    void check() const {
        if (variables <= 0) throw MalformedFormula("no variables");
        std::vector<int> pos(variables + 1, 0), neg(variables + 1, 0);
        for (const auto& clause : clauses) {
            if (clause.empty() || clause.size() > 3)
                throw MalformedFormula("clause size must be 1..3");
            std::set<int> seen;
            for (int lit : clause) {
                int var = std::abs(lit);
                if (lit == 0 || var > variables) throw MalformedFormula("literal out of range");
                if (!seen.insert(lit).second) throw MalformedFormula("duplicate literal");
                if (seen.count(-lit)) throw MalformedFormula("clause holds both polarities");
                (lit > 0 ? pos : neg)[var]++;
            }
        }
        for (int v = 1; v <= variables; ++v) {
            if (pos[v] + neg[v] != 3)
                throw MalformedFormula("variable " + std::to_string(v) +
                                       " must occur exactly 3 times");
            if (pos[v] == 0 || neg[v] == 0)
                throw MalformedFormula("variable " + std::to_string(v) +
                                       " needs both polarities");
        }
    }

    [[nodiscard]] int count_pos(int var) const {
        int c = 0;
        for (const auto& clause : clauses)
            for (int lit : clause)
                if (lit == var) ++c;
        return c;
    }
    [[nodiscard]] int count_neg(int var) const {
        int c = 0;
        for (const auto& clause : clauses)
            for (int lit : clause)
                if (lit == -var) ++c;
        return c;
    }

    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        os << "vars=" << variables;
        for (const auto& clause : clauses) {
            os << " (";
            for (size_t i = 0; i < clause.size(); ++i) os << (i ? " " : "") << clause[i];
            os << ")";
        }
        return os.str();
    }
};

struct NumberMultiset {
    std::vector<long long> values;
    std::optional<long long> target;

    void check_positive() const {
        if (values.empty()) throw MalformedInput("empty multiset");
        for (long long v : values)
            if (v <= 0) throw MalformedInput("values must be positive");
    }

    [[nodiscard]] long long sum() const {
        long long s = 0;
        for (long long v : values) s += v;
        return s;
    }

    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        os << "values=";
        for (size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
        if (target) os << " k=" << *target;
        return os.str();
    }
};

struct SourcedDigraph {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges; // 1-based
    int source = 1;

    void check() const {
        if (vertices <= 0) throw MalformedInput("no vertices");
        if (source < 1 || source > vertices) throw MalformedInput("source out of range");
        std::set<std::pair<int, int>> seen;
        for (auto [a, b] : edges) {
            if (a < 1 || a > vertices || b < 1 || b > vertices)
                throw MalformedInput("edge endpoint out of range");
            if (a == b) throw MalformedInput("self-loop");
            if (!seen.insert({a, b}).second) throw MalformedInput("duplicate edge");
        }
    }

    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        os << "vertices=" << vertices << " source=" << source << " edges=";
        for (size_t i = 0; i < edges.size(); ++i)
            os << (i ? "," : "") << edges[i].first << "->" << edges[i].second;
        return os.str();
    }
};

struct GeneratedInstance {
    IdmInstance instance;
    std::optional<long long> threshold; // bankruptcy threshold where applicable
    std::string note;                   // sidecar body, line oriented
};

namespace detail {

inline void structural_assert(bool cond, const std::string& what) {
    if (!cond) throw std::logic_error("generator structural assertion failed: " + what);
}

inline int longest_path_edges(const IdmInstance& inst) {
    // longest directed path in the collapsed digraph; instance must be a DAG
    const int n = inst.node_count();
    std::set<std::pair<int, int>> arcs;
    for (const Debt& d : inst.debts()) arcs.insert({d.debtor, d.creditor});
    std::vector<std::vector<int>> adj(n);
    std::vector<int> indeg(n, 0);
    for (auto [a, b] : arcs) {
        adj[a].push_back(b);
        ++indeg[b];
    }
    std::vector<int> order, dist(n, 0);
    std::vector<int> q;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) q.push_back(v);
    while (!q.empty()) {
        int v = q.back();
        q.pop_back();
        order.push_back(v);
        for (int w : adj[v])
            if (--indeg[w] == 0) q.push_back(w);
    }
    structural_assert(static_cast<int>(order.size()) == n, "cycle in expected DAG");
    int best = 0;
    for (int v : order)
        for (int w : adj[v]) {
            dist[w] = std::max(dist[w], dist[v] + 1);
            best = std::max(best, dist[w]);
        }
    return best;
}

inline int footprint_diameter(const IdmInstance& inst) {
    const int n = inst.node_count();
    std::set<std::pair<int, int>> und;
    for (const Debt& d : inst.debts())
        und.insert({std::min(d.debtor, d.creditor), std::max(d.debtor, d.creditor)});
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : und) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    int diameter = 0;
    for (int s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        std::vector<int> q{s};
        dist[s] = 0;
        for (size_t i = 0; i < q.size(); ++i) {
            int v = q[i];
            for (int w : adj[v])
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
        }
        for (int v = 0; v < n; ++v) diameter = std::max(diameter, dist[v]);
    }
    return diameter;
}

} // namespace detail

// --- bankruptcy minimization from 3-SAT-3 ------------------------------------
//
// n source nodes holding 3 each, two literal nodes per variable, one node per
// clause, one sink; every debt due at time 1. Minimum bankruptcies is 2n for
// satisfiable formulas and larger otherwise. The published statement bounds
// the out-degree by 2, but a literal with two clause occurrences also owes
// the sink and thus has three distinct heads; the generator asserts the
// bounds that actually hold (<= 3, longest path <= 4).
inline GeneratedInstance gen_bankmin_3sat3(const Sat3Formula& phi) {
    phi.check();
    const int n = phi.variables;
    const int m = static_cast<int>(phi.clauses.size());
    InstanceBuilder b;
    auto xname = [](int v) { return "x" + std::to_string(v); };
    auto nxname = [](int v) { return "nx" + std::to_string(v); };
    for (int v = 1; v <= n; ++v) b.node("s" + std::to_string(v), 3);
    for (int v = 1; v <= n; ++v) {
        b.node(xname(v));
        b.node(nxname(v));
    }
    for (int j = 1; j <= m; ++j) b.node("q" + std::to_string(j));
    b.node("d");
    for (int v = 1; v <= n; ++v) {
        b.debt("s" + std::to_string(v), xname(v), 3, 1);
        b.debt("s" + std::to_string(v), nxname(v), 3, 1);
        b.debt(xname(v), "d", phi.count_neg(v), 1);
        b.debt(nxname(v), "d", phi.count_pos(v), 1);
    }
    for (int j = 1; j <= m; ++j) {
        b.debt("q" + std::to_string(j), "d", 1, 1);
        for (int lit : phi.clauses[j - 1]) {
            const std::string from = lit > 0 ? xname(lit) : nxname(-lit);
            b.debt(from, "q" + std::to_string(j), 1, 1);
        }
    }
    GeneratedInstance g{b.build(), 2LL * n, ""};
    detail::structural_assert(g.instance.node_count() == 3 * n + m + 1, "node count 3n+m+1");
    detail::structural_assert(g.instance.lifetime() == 1, "T == 1");
    for (const Debt& d : g.instance.debts())
        detail::structural_assert(d.terms.amount <= Money(3), "amounts <= 3");
    detail::structural_assert(classify_shape(g.instance).is_dag, "DAG");
    detail::structural_assert(detail::longest_path_edges(g.instance) <= 4, "longest path <= 4");
    g.note = "reduction bankmin-3sat3\nthreshold " + std::to_string(2 * n) + "\nsource " +
             phi.str() + "\n";
    return g;
}

// --- bankruptcy minimization on the fixed 32-node graph ----------------------
//
// Equal-cardinality-partition on a fixed footprint: the 14 dashed nodes owe an
// unpayable amount at time 1 and are bankrupt in every schedule; two more
// bankruptcies are forced, and a 16-bankruptcy schedule exists exactly when
// the multiset splits into two equal-size halves of equal sum. The
// "practically infinite" amount is 2k+n+1 and the lifetime is 10n+7.
inline GeneratedInstance gen_bankmin_fixed32_ecp(const NumberMultiset& s) {
    s.check_positive();
    const int n = static_cast<int>(s.values.size());
    if (n % 2 != 0) throw MalformedInput("even cardinality required");
    const long long two_k = s.sum();
    if (two_k % 2 != 0) throw OddSum("sum must be even");
    const long long k = two_k / 2;
    const long long inf = two_k + n + 1;
    const int T = 10 * n + 7;

    InstanceBuilder b;
    b.node("s", two_k);
    b.node("m1").node("m2").node("m3");
    for (char side : {'A', 'B'})
        for (int i = 4; i <= 16; ++i) {
            std::string id = "m" + std::to_string(i) + std::string(1, side);
            if (i == 12)
                b.node(id, n / 2);
            else
                b.node(id);
        }
    b.node("p").node("d");

    auto mm = [](int i, char side) { return "m" + std::to_string(i) + std::string(1, side); };
    for (int i = 1; i <= n; ++i) b.debt("s", "m1", s.values[i - 1], 10 * i, 10 * i + 5);
    b.debt("m1", "p", inf, 1);
    b.debt("m3", "m1", inf, 1);
    for (int i = 1; i <= n; ++i) {
        b.debt("m1", "m2", s.values[i - 1], 10 * i);
        b.debt("m1", "m2", s.values[i - 1], 10 * i + 5);
        b.debt("m2", "m3", s.values[i - 1], 10 * i);
        b.debt("m2", "m3", s.values[i - 1], 10 * i + 5);
    }
    for (char side : {'A', 'B'}) {
        const int off = side == 'A' ? 0 : 5;
        b.debt("m3", mm(4, side), inf, 1);
        b.debt(mm(4, side), "p", inf, 1);
        b.debt(mm(6, side), mm(4, side), inf, 1);
        for (int i = 1; i <= n; ++i) {
            b.debt(mm(4, side), mm(5, side), s.values[i - 1], 10 * i + off);
            b.debt(mm(5, side), mm(6, side), s.values[i - 1], 10 * i + off);
        }
        b.debt(mm(6, side), mm(7, side), inf, 1);
        for (int i = 1; i <= n; ++i) b.debt(mm(7, side), mm(8, side), 1, 10 * i + off);
        b.debt(mm(8, side), "p", inf, 1);
        for (int i = 1; i <= n; ++i) {
            b.debt(mm(8, side), mm(9, side), 1, 10 * i + 1 + off);
            b.debt(mm(9, side), mm(10, side), 1, 10 * i + 1 + off);
            b.debt(mm(10, side), mm(11, side), 1, 10 * i + 1 + off);
        }
        b.debt(mm(11, side), mm(8, side), inf, 1);
        b.debt(mm(11, side), mm(12, side), inf, 1);
        for (int i = 1; i <= n; ++i) b.debt(mm(12, side), mm(7, side), 1, 10 * i + 1 + off);
        b.debt(mm(7, side), mm(13, side), k, 1, T);
        b.debt(mm(13, side), "p", inf, 1);
        for (int i = 1; i <= n; ++i) {
            b.debt(mm(13, side), mm(14, side), s.values[i - 1], 10 * i + 2 + off);
            b.debt(mm(14, side), mm(15, side), s.values[i - 1], 10 * i + 2 + off);
        }
        b.debt(mm(15, side), mm(13, side), inf, 1);
        b.debt(mm(15, side), mm(16, side), inf, 1);
        b.debt(mm(16, side), "d", k, T);
    }

    GeneratedInstance g{b.build(), 16, ""};
    detail::structural_assert(g.instance.node_count() == 32, "32 nodes");
    detail::structural_assert(g.instance.lifetime() == T, "T == 10n+7");
    std::set<int> inf_debtors;
    for (const Debt& d : g.instance.debts())
        if (d.terms.amount == Money(inf) && d.terms.t1 == 1 && d.terms.t2 == 1)
            inf_debtors.insert(d.debtor);
    detail::structural_assert(inf_debtors.size() == 14, "14 unpayable debtors");
    g.note = "reduction bankmin-ecp32\nthreshold 16\nsource " + s.str() + "\n";
    return g;
}

// --- perfect scheduling on DAGs from 3-SAT-3 ---------------------------------
//
// Doubling gadget: with one unit fed into `in` by time 2, the gadget can emit
// two units from m0 to `out` at time 1; with no feed, nothing leaves at time
// 1. One gadget per literal turns the single unit at a-type nodes into an
// exclusive choice of polarity; clause nodes owe the sink at time 1 and can
// only pay if some chosen literal feeds them.
inline GeneratedInstance gen_perfsched_dag_3sat3(const Sat3Formula& phi) {
    phi.check();
    const int n = phi.variables;
    const int m = static_cast<int>(phi.clauses.size());
    InstanceBuilder b;
    auto g_ = [](int v, char side, const char* part) {
        return "g" + std::to_string(v) + std::string(1, side) + "_" + part;
    };
    auto xname = [](int v) { return "x" + std::to_string(v); };
    auto nxname = [](int v) { return "nx" + std::to_string(v); };
    for (int v = 1; v <= n; ++v) {
        b.node("s" + std::to_string(v), 1);
        b.node("a" + std::to_string(v), 1);
        for (char side : {'T', 'F'}) {
            b.node(g_(v, side, "m0"), 2);
            b.node(g_(v, side, "s"), 2);
            b.node(g_(v, side, "m1"));
            b.node(g_(v, side, "m2"));
            b.node(g_(v, side, "m3"));
        }
        b.node(xname(v));
        b.node(nxname(v));
    }
    for (int j = 1; j <= m; ++j) b.node("q" + std::to_string(j));
    b.node("d");

    for (int v = 1; v <= n; ++v) {
        b.debt("s" + std::to_string(v), "a" + std::to_string(v), 1, 3);
        for (char side : {'T', 'F'}) {
            const std::string out = side == 'T' ? xname(v) : nxname(v);
            b.debt("a" + std::to_string(v), g_(v, side, "m1"), 1, 1, 3);
            b.debt(g_(v, side, "m0"), out, 2, 1, 3);
            b.debt(g_(v, side, "s"), g_(v, side, "m0"), 2, 3);
            b.debt(g_(v, side, "m0"), g_(v, side, "m1"), 1, 2, 3);
            b.debt(g_(v, side, "m0"), g_(v, side, "m2"), 1, 1, 3);
            b.debt(g_(v, side, "m1"), g_(v, side, "m2"), 1, 1, 2);
            b.debt(g_(v, side, "m2"), g_(v, side, "m3"), 1, 1);
        }
    }
    for (int j = 1; j <= m; ++j) {
        b.debt("q" + std::to_string(j), "d", 1, 1);
        for (int lit : phi.clauses[j - 1]) {
            const std::string from = lit > 0 ? xname(lit) : nxname(-lit);
            b.debt(from, "q" + std::to_string(j), 1, 1, 3);
        }
    }
    GeneratedInstance g{b.build(), std::nullopt, ""};
    detail::structural_assert(g.instance.lifetime() == 3, "T == 3");
    detail::structural_assert(classify_shape(g.instance).is_dag, "DAG");
    for (const Debt& d : g.instance.debts())
        detail::structural_assert(d.terms.amount <= Money(2), "amounts <= 2");
    for (int v = 0; v < g.instance.node_count(); ++v)
        detail::structural_assert(g.instance.initial_asset(v) <= Money(3), "assets <= 3");
    g.note = "reduction perfsched-dag-3sat3\nsource " + phi.str() + "\n";
    return g;
}

// --- perfect scheduling on multiditrees from 3-SAT-3 -------------------------
//
// Unit-debt tree of diameter 6 around a hub r. Each variable gadget lets its
// single unit visit the hub during exactly one of two disjoint time windows
// (the polarity choice); each clause gadget holds one unit of its own and
// needs one outside visit during one of its literals' windows. All debts have
// amount 1, so PP and AoN schedules coincide; clause pair debts are emitted
// as |c|-1 parallel unit debts in each direction.
inline GeneratedInstance gen_perfsched_multiditree_3sat3(const Sat3Formula& phi) {
    phi.check();
    const int n = phi.variables;
    const int m = static_cast<int>(phi.clauses.size());
    const int T = 10 * (n - 1) + 9;
    InstanceBuilder b;
    b.node("r");
    for (int v = 1; v <= n; ++v) {
        b.node("u" + std::to_string(v), 1);
        b.node("y" + std::to_string(v));
        b.node("w" + std::to_string(v));
    }
    for (int j = 1; j <= m; ++j) {
        b.node("a" + std::to_string(j));
        b.node("b" + std::to_string(j), 1);
        b.node("dd" + std::to_string(j));
        b.node("e" + std::to_string(j));
    }
    for (int v = 1; v <= n; ++v) {
        const int base = 10 * (v - 1);
        const std::string u = "u" + std::to_string(v), y = "y" + std::to_string(v),
                          w = "w" + std::to_string(v);
        b.debt(u, y, 1, base + 1);
        b.debt(u, y, 1, base + 6);
        b.debt(y, u, 1, base + 4);
        b.debt(y, u, 1, base + 9);
        b.debt(y, w, 1, base + 1, base + 9);
        b.debt(w, y, 1, base + 1, base + 9);
        b.debt(w, "r", 1, base + 1, base + 9);
        b.debt("r", w, 1, base + 1, base + 9);
    }
    std::map<int, int> occurrences_so_far; // literal -> count seen
    for (int j = 1; j <= m; ++j) {
        const std::string a = "a" + std::to_string(j), bb = "b" + std::to_string(j),
                          dd = "dd" + std::to_string(j), e = "e" + std::to_string(j);
        b.debt("r", e, 1, 1, T);
        b.debt(e, "r", 1, 1, T);
        const int pairs = static_cast<int>(phi.clauses[j - 1].size()) - 1;
        for (int p = 0; p < pairs; ++p) {
            b.debt(a, e, 1, 1, T);
            b.debt(e, a, 1, 1, T);
        }
        for (int lit : phi.clauses[j - 1]) {
            const int rank = ++occurrences_so_far[lit]; // 1 or 2
            const int base = 10 * (std::abs(lit) - 1);
            int o1 = lit > 0 ? (rank == 1 ? 1 : 3) : (rank == 1 ? 6 : 8);
            b.debt(bb, a, 1, base + o1);
            b.debt(e, dd, 1, base + o1);
            b.debt(a, bb, 1, base + o1 + 1);
            b.debt(dd, e, 1, base + o1 + 1);
        }
    }
    GeneratedInstance g{b.build(), std::nullopt, ""};
    detail::structural_assert(g.instance.lifetime() == T, "T == 10(n-1)+9");
    detail::structural_assert(classify_shape(g.instance).is_multiditree, "multiditree");
    detail::structural_assert(detail::footprint_diameter(g.instance) == 6, "diameter 6");
    for (const Debt& d : g.instance.debts())
        detail::structural_assert(d.terms.amount == Money(1), "unit amounts");
    std::map<std::pair<int, int>, int> per_pair;
    for (const Debt& d : g.instance.debts())
        ++per_pair[{std::min(d.debtor, d.creditor), std::max(d.debtor, d.creditor)}];
    for (const auto& [pair, count] : per_pair) {
        (void)pair;
        detail::structural_assert(count <= 6, "at most 6 debts per node pair");
    }
    g.note = "reduction perfsched-multiditree-3sat3\nsource " + phi.str() + "\n";
    return g;
}

// --- perfect scheduling from sourced Hamiltonian path ------------------------
//
// One three-node relay gadget per digraph vertex and a single unit of cash in
// the whole network. The unit must service one forward debt in some gadget at
// every time step, which walks it through every gadget exactly once along
// digraph edges: a Hamiltonian path from the source.
inline GeneratedInstance gen_perfsched_hampath(const SourcedDigraph& h) {
    h.check();
    const int n = h.vertices;
    const int T = 2 * n + 1;
    InstanceBuilder b;
    auto L = [](int i) { return "L" + std::to_string(i); };
    auto C = [](int i) { return "C" + std::to_string(i); };
    auto R = [](int i) { return "R" + std::to_string(i); };
    for (int i = 1; i <= n; ++i) {
        b.node(L(i), i == h.source ? 1 : 0);
        b.node(C(i));
        b.node(R(i));
    }
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            b.debt(L(i), C(i), 1, 2 * j - 1);
            b.debt(C(i), R(i), 1, 2 * j);
        }
        for (int j = 0; j < n - 1; ++j) {
            b.debt(C(i), L(i), 1, 1, T - 1);
            b.debt(R(i), C(i), 1, 1, T - 1);
        }
        b.debt(R(i), L(i), 1, T);
    }
    for (auto [i, j] : h.edges) {
        b.debt(R(i), L(j), 1, 1, T);
        b.debt(L(j), R(i), 1, T);
    }
    GeneratedInstance g{b.build(), std::nullopt, ""};
    Money total = 0;
    for (int v = 0; v < g.instance.node_count(); ++v) total += g.instance.initial_asset(v);
    detail::structural_assert(total == Money(1), "total initial assets == 1");
    detail::structural_assert(g.instance.lifetime() == T, "T == 2n+1");
    g.note = "reduction perfsched-hampath\nsource " + h.str() + "\n";
    return g;
}

// --- AoN perfect scheduling from Partition ------------------------------------
inline GeneratedInstance gen_aon_perfsched_partition(const NumberMultiset& s) {
    s.check_positive();
    const long long sum = s.sum();
    if (sum % 2 != 0) throw OddSum("sum must be even");
    const long long k = sum / 2;
    InstanceBuilder b;
    b.node("s", 2 * k).node("v").node("w").node("x");
    b.debt("s", "v", k, 1);
    b.debt("s", "v", k, 2);
    for (long long a : s.values) b.debt("v", "w", a, 1, 2);
    b.debt("w", "x", k, 1);
    b.debt("w", "x", k, 2);
    GeneratedInstance g{b.build(), std::nullopt, ""};
    detail::structural_assert(classify_shape(g.instance).is_out_path, "directed path");
    detail::structural_assert(g.instance.lifetime() == 2, "T == 2");
    g.note = "reduction aon-perfsched-partition\nsource " + s.str() + "\n";
    return g;
}

// --- AoN perfect scheduling from 3-Partition ----------------------------------
//
// Values and target are scaled by 4 so that a time step can absorb exactly
// three debts: k+3 is 3 mod 4 while any one or two scaled values plus their
// unit paddings are not. The target defaults to sum/m.
inline GeneratedInstance gen_aon_perfsched_3partition(const NumberMultiset& s) {
    s.check_positive();
    if (s.values.size() % 3 != 0) throw MalformedInput("|S| must be 3m");
    const long long m = static_cast<long long>(s.values.size()) / 3;
    long long k;
    if (s.target) {
        k = *s.target;
        if (k <= 0) throw MalformedInput("target must be positive");
    } else {
        if (s.sum() % m != 0) throw MalformedInput("sum not divisible by m and no target given");
        k = s.sum() / m;
    }
    const long long k4 = 4 * k;
    InstanceBuilder b;
    b.node("s", m * (k4 + 3)).node("v").node("w").node("x");
    for (long long t = 1; t <= m; ++t) b.debt("s", "v", k4 + 3, static_cast<int>(t));
    for (long long a : s.values) b.debt("v", "w", 4 * a + 1, 1, static_cast<int>(m));
    for (long long t = 1; t <= m; ++t) b.debt("w", "x", k4 + 3, static_cast<int>(t));
    GeneratedInstance g{b.build(), std::nullopt, ""};
    detail::structural_assert(classify_shape(g.instance).is_out_path, "directed path");
    detail::structural_assert(g.instance.lifetime() == static_cast<int>(m), "T == m");
    g.note = "reduction aon-perfsched-3partition\nsource " + s.str() + "\n";
    return g;
}

// --- bankruptcy maximization from 3-SAT-3 ------------------------------------
//
// Each literal node feeds a fresh chain of m+1 unit debts all due at time 1:
// starve the chain and its every node defaults, feed it and none does. A
// worst-case schedule starves one chain per variable and every clause node;
// the threshold 2n + n(m+1) + m is attainable exactly for satisfiable
// formulas. Clause wiring is crossed: x_i owes the clauses that contain the
// negated literal.
inline GeneratedInstance gen_bankmax_3sat3(const Sat3Formula& phi) {
    phi.check();
    const int n = phi.variables;
    const int m = static_cast<int>(phi.clauses.size());
    InstanceBuilder b;
    auto xname = [](int v) { return "x" + std::to_string(v); };
    auto nxname = [](int v) { return "nx" + std::to_string(v); };
    auto chain = [](const std::string& owner, int r) {
        return "c_" + owner + "_" + std::to_string(r);
    };
    for (int v = 1; v <= n; ++v) b.node("s" + std::to_string(v), 3);
    for (int v = 1; v <= n; ++v) {
        b.node(xname(v));
        b.node(nxname(v));
    }
    for (int v = 1; v <= n; ++v)
        for (const std::string& lit : {xname(v), nxname(v)})
            for (int r = 1; r <= m + 1; ++r) b.node(chain(lit, r));
    for (int j = 1; j <= m; ++j) b.node("q" + std::to_string(j));
    b.node("d");

    for (int v = 1; v <= n; ++v) {
        b.debt("s" + std::to_string(v), xname(v), 3, 1);
        b.debt("s" + std::to_string(v), nxname(v), 3, 1);
        for (const std::string& lit : {xname(v), nxname(v)}) {
            b.debt(lit, chain(lit, 1), 1, 1);
            for (int r = 1; r <= m; ++r) b.debt(chain(lit, r), chain(lit, r + 1), 1, 1);
        }
    }
    for (int j = 1; j <= m; ++j) {
        b.debt("q" + std::to_string(j), "d",
               static_cast<long long>(phi.clauses[j - 1].size()), 2);
        for (int lit : phi.clauses[j - 1]) {
            // crossed: the node for the opposite literal owes this clause
            const std::string from = lit > 0 ? nxname(lit) : xname(-lit);
            b.debt(from, "q" + std::to_string(j), 1, 2);
        }
    }
    const long long threshold = 2LL * n + static_cast<long long>(n) * (m + 1) + m;
    GeneratedInstance g{b.build(), threshold, ""};
    detail::structural_assert(g.instance.lifetime() == 2, "T == 2");
    detail::structural_assert(
        g.instance.node_count() == 3 * n + 2 * n * (m + 1) + m + 1, "node count");
    detail::structural_assert(classify_shape(g.instance).is_dag, "DAG");
    g.note = "reduction bankmax-3sat3\nthreshold " + std::to_string(threshold) + "\nsource " +
             phi.str() + "\n";
    return g;
}

// --- AoN bankruptcy maximization from Subset Sum -----------------------------
//
// v must dodge its unit debt at time 1 without withholding, which in AoN
// means spending its k of cash exactly on a subset of the big debts. Values
// (and the target) are doubled when any value is 1 so that no single debt is
// payable by the leftover unit.
inline GeneratedInstance gen_aon_bankmax_subset_sum(const NumberMultiset& s, long long k) {
    s.check_positive();
    if (k < 0) throw MalformedInput("negative target");
    std::vector<long long> values = s.values;
    long long target = k;
    bool doubled = false;
    for (long long v : values)
        if (v < 2) doubled = true;
    if (doubled) {
        for (long long& v : values) v *= 2;
        target *= 2;
    }
    long long total = 0;
    for (long long v : values) total += v;
    InstanceBuilder b;
    b.node("u", total).node("v", target).node("w");
    b.debt("u", "v", total, 2);
    for (long long a : values) b.debt("v", "w", a, 1, 2);
    b.debt("v", "w", 1, 1);
    GeneratedInstance g{b.build(), 1, ""};
    detail::structural_assert(g.instance.lifetime() == 2, "T == 2");
    NumberMultiset src{s.values, k};
    g.note = "reduction aon-bankmax-subset-sum\nthreshold 1\nsource " + src.str() +
             (doubled ? "\nnormalized doubled\n" : "\n");
    return g;
}

} // namespace idm
