// ============================================================================
// idm/tree_bailout.hpp — the two specialised polynomial bailout solvers
// ============================================================================
//
// exact_due_bailout_min: when every debt has t1 == t2 there is only one
// candidate schedule — pay everything at its deadline. Run it, find each
// node's lowest cash point, and top the node up by exactly that shortfall.
// Valid in all three variants (payments are full integral amounts at one
// time), and pointwise minimal for that schedule.
//
// pp_bailout_min_out_tree: PP bailout minimization on out-trees by instance
// rewriting. Debts are held as bundles of parallel unit debts (multiplicity
// counts, so the run time is polynomial in bit-size), and the instance is
// simplified step by step, each step preserving the minimum bailout:
//
//   prefix repair   charge every node's worst prefix shortfall and add it to
//                   the node's assets (a per-node lower bound in any perfect
//                   schedule of an equivalent instance);
//   leaf snap       a unit debt 1@[t1,t2] into a leaf becomes 1@t2;
//   sibling merge   leaf children of a common parent merge into one leaf;
//   asset spend     a unit-debt chain parent's own assets pay its earliest
//                   child debts;
//   count repair    with child due times sorted, if fewer parent debts can
//                   have opened than child debts have fallen due, the
//                   shortfall is charged at the parent and the earliest
//                   child debts are deleted;
//   reroute         the matched parent debt is redirected to a fresh spill
//                   leaf of the grandparent — at its own deadline when it
//                   closes by the child's due date, at the child's due date
//                   when it straddles it — and one child unit is cancelled.
//
// The "no parent debt opens by the child's due date" case cannot occur once
// prefix shortfalls are repaired; it is asserted unreachable. Every step is
// logged in an audit trail; the witness schedule for the ORIGINAL instance
// is rebuilt by replaying the trail and re-validated (PP, perfect) before
// being returned. Only the charged total is canonical — the paper-level
// argument permits shifting bailout money between a parent and child, so the
// returned vector is one minimiser among possibly many.

#pragma once

#include "idm/instance.hpp"
#include "idm/schedule.hpp"
#include "idm/shape.hpp"
#include "idm/validity.hpp"

#include <deque>
#include <map>
#include <optional>
#include <sstream>

namespace idm {

class NotExactDue : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};
class NotOutTree : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct TreeBailoutResult {
    Money min_total;
    BailoutVector bailout;
    Schedule schedule;
    std::vector<std::string> audit_trail; // one rewrite per line
};

// --- exact-due solver --------------------------------------------------------

inline TreeBailoutResult exact_due_bailout_min(const IdmInstance& inst, Variant variant) {
    for (const Debt& d : inst.debts())
        if (d.terms.t1 != d.terms.t2)
            throw NotExactDue("exact_due_bailout_min: debt with t1 < t2");

    Schedule sched(inst);
    for (int e = 0; e < inst.debt_count(); ++e)
        sched.add(e, inst.debt(e).terms.t2, inst.debt(e).terms.amount);

    CashTrajectory tr = derive_cash(inst, sched);
    BailoutVector bailout(inst.node_count());
    Money total = 0;
    for (int v = 0; v < inst.node_count(); ++v) {
        Money worst = 0;
        for (int t = 0; t <= inst.lifetime(); ++t)
            if (tr.cash[t][v] < worst) worst = tr.cash[t][v];
        if (worst.is_negative()) {
            bailout.set(v, -worst);
            total += -worst;
        }
    }
    ValidationReport rep = validate(inst, sched, variant, &bailout);
    if (!rep.valid || !rep.perfect)
        throw std::logic_error("exact_due_bailout_min: repaired schedule failed validation");
    return TreeBailoutResult{total, std::move(bailout), std::move(sched), {}};
}

// --- out-tree rewriter -------------------------------------------------------

// Aggregated form of `multiplicity` parallel unit debts 1@[t1,t2] that all
// descend from one original debt.
struct UnitDebtBundle {
    int origin = -1; // original debt index (provenance for the witness)
    int t1 = 1;
    int t2 = 1;
    BigInt multiplicity;
};

namespace detail {

struct RewriteTrace {
    std::vector<std::string> lines;
    // witness contributions
    std::map<std::pair<int, int>, BigInt> payments; // (origin debt, time) -> units
    std::vector<BigInt> charges;                    // per original node

    void pay(int origin, int t, const BigInt& units) {
        if (units != 0) payments[{origin, t}] += units;
    }
    void log(const std::string& s) { lines.push_back(s); }
};

class OutTreeRewriter {
  public:
    explicit OutTreeRewriter(const IdmInstance& inst) : inst_(inst) {
        ShapeClass shape = classify_shape(inst);
        if (!shape.is_out_tree) throw NotOutTree("pp_bailout_min_out_tree: not an out-tree");
        root_ = shape.out_tree_root;
        const int n = inst.node_count();
        parent_.assign(n, -1);
        children_.resize(n);
        assets_.resize(n);
        bundles_.resize(n);
        alive_.assign(n, true);
        names_.resize(n);
        spill_.assign(n, -1);
        trace_.charges.assign(n, BigInt(0));
        for (int v = 0; v < n; ++v) {
            assets_[v] = inst.initial_asset(v).to_integer();
            names_[v] = inst.node_id(v);
        }
        for (int e = 0; e < inst.debt_count(); ++e) {
            const Debt& d = inst.debt(e);
            parent_[d.creditor] = d.debtor;
            bundles_[d.creditor].push_back(
                UnitDebtBundle{e, d.terms.t1, d.terms.t2, d.terms.amount.to_integer()});
        }
        for (int v = 0; v < n; ++v)
            if (parent_[v] >= 0) children_[parent_[v]].push_back(v);
    }

    TreeBailoutResult run() {
        for (;;) {
            repair_prefix_shortfalls();
            snap_leaf_bundles();
            merge_sibling_leaves();
            drop_empty_leaves();
            int w = deepest_leaf_below_level_one();
            if (w < 0) break; // nothing deeper than the root's own leaves
            process_chain(w);
        }
        terminal_pay();
        return finish();
    }

  private:
    [[nodiscard]] bool is_leaf(int v) const { return children_[v].empty(); }

    [[nodiscard]] BigInt bundle_total(int v) const {
        BigInt s = 0;
        for (const UnitDebtBundle& b : bundles_[v]) s += b.multiplicity;
        return s;
    }

    void sort_bundles(int v) {
        std::sort(bundles_[v].begin(), bundles_[v].end(),
                  [](const UnitDebtBundle& a, const UnitDebtBundle& b) {
                      return std::tie(a.t2, a.t1, a.origin) < std::tie(b.t2, b.t1, b.origin);
                  });
    }

    // Prefix shortfall of a node over the current tree: obligations due by t
    // minus receivables that may have opened by t minus assets.
    void repair_prefix_shortfalls() {
        for (size_t v = 0; v < alive_.size(); ++v) {
            if (!alive_[v] || is_leaf(static_cast<int>(v))) continue;
            std::set<int> stamps;
            for (int c : children_[v])
                for (const UnitDebtBundle& b : bundles_[c]) stamps.insert(b.t2);
            BigInt worst = 0;
            for (int t : stamps) {
                BigInt due = 0, avail = assets_[v];
                for (int c : children_[v])
                    for (const UnitDebtBundle& b : bundles_[c])
                        if (b.t2 <= t) due += b.multiplicity;
                for (const UnitDebtBundle& b : bundles_[v])
                    if (b.t1 <= t) avail += b.multiplicity;
                if (due - avail > worst) worst = due - avail;
            }
            if (worst > 0) {
                charge(static_cast<int>(v), worst);
                assets_[v] += worst;
                trace_.log("prefix-repair " + names_[v] + " +" + worst.str());
            }
        }
    }

    void snap_leaf_bundles() {
        for (size_t v = 0; v < alive_.size(); ++v) {
            if (!alive_[v] || !is_leaf(static_cast<int>(v)) || parent_[v] < 0) continue;
            for (UnitDebtBundle& b : bundles_[v])
                if (b.t1 != b.t2) {
                    trace_.log("leaf-snap " + names_[parent_[v]] + "->" + names_[v] + " [" +
                               std::to_string(b.t1) + "," + std::to_string(b.t2) + "]x" +
                               b.multiplicity.str() + " -> @" + std::to_string(b.t2));
                    b.t1 = b.t2;
                }
        }
    }

    void merge_sibling_leaves() {
        for (size_t u = 0; u < alive_.size(); ++u) {
            if (!alive_[u]) continue;
            std::vector<int> leaves;
            for (int c : children_[u])
                if (is_leaf(c)) leaves.push_back(c);
            if (leaves.size() < 2) continue;
            int keep = *std::min_element(leaves.begin(), leaves.end());
            for (int c : leaves) {
                if (c == keep) continue;
                for (UnitDebtBundle& b : bundles_[c]) bundles_[keep].push_back(b);
                bundles_[c].clear();
                alive_[c] = false;
                trace_.log("merge-leaves " + names_[c] + " into " + names_[keep]);
            }
            std::vector<int> rest;
            for (int c : children_[u])
                if (alive_[c]) rest.push_back(c);
            children_[u] = rest;
            sort_bundles(keep);
        }
    }

    void drop_empty_leaves() {
        bool again = true;
        while (again) {
            again = false;
            for (size_t v = 0; v < alive_.size(); ++v) {
                if (!alive_[v] || static_cast<int>(v) == root_) continue;
                if (is_leaf(static_cast<int>(v)) && bundles_[v].empty()) {
                    int p = parent_[v];
                    children_[p].erase(
                        std::find(children_[p].begin(), children_[p].end(), static_cast<int>(v)));
                    alive_[v] = false;
                    again = true;
                }
            }
        }
    }

    // Deepest leaf whose parent is not the root; -1 when the tree is flat.
    int deepest_leaf_below_level_one() {
        std::vector<std::pair<int, int>> frontier; // (depth, node)
        std::deque<std::pair<int, int>> q;
        q.emplace_back(0, root_);
        int best = -1, best_depth = 1;
        while (!q.empty()) {
            auto [d, v] = q.front();
            q.pop_front();
            if (is_leaf(v) && d > best_depth) {
                best = v;
                best_depth = d;
            }
            for (int c : children_[v]) q.emplace_back(d + 1, c);
        }
        return best;
    }

    void charge(int v, const BigInt& amount) {
        trace_.charges.at(v) += amount;
        total_ += amount;
    }

    int spill_leaf(int u) {
        if (spill_[u] >= 0 && alive_[spill_[u]]) return spill_[u];
        int id = static_cast<int>(alive_.size());
        parent_.push_back(u);
        children_.emplace_back();
        assets_.emplace_back(0);
        bundles_.emplace_back();
        alive_.push_back(true);
        names_.push_back("~spill:" + names_[u]);
        spill_.push_back(-1);
        children_[u].push_back(id);
        spill_[u] = id;
        return id;
    }

    // Chain processing for deepest leaf w, its parent v, grandparent u.
    void process_chain(int w) {
        int v = parent_[w];
        if (children_[v].size() != 1)
            throw std::logic_error("out-tree rewriter: deepest leaf has unmerged siblings");
        int u = parent_[v];
        if (u < 0) throw std::logic_error("out-tree rewriter: chain parent is the root");
        sort_bundles(w); // by stamp (all singular after snapping)
        sort_bundles(v);

        // (1) spend v's own assets on the earliest child debts
        if (assets_[v] > 0) {
            for (UnitDebtBundle& b : bundles_[w]) {
                if (assets_[v] == 0) break;
                BigInt q = boost::multiprecision::min(assets_[v], b.multiplicity);
                if (q == 0) continue;
                trace_.pay(b.origin, b.t2, q);
                trace_.log("asset-spend " + names_[v] + " pays " + q.str() + "x@" +
                           std::to_string(b.t2));
                b.multiplicity -= q;
                assets_[v] -= q;
            }
            prune_empty(w);
            if (bundles_[w].empty()) {
                drop_leaf(w);
                return;
            }
        }

        // (2) count repair: child units due by tau vs parent windows open by tau
        {
            BigInt shortfall = 0;
            BigInt p_units = 0;
            for (const UnitDebtBundle& b : bundles_[w]) {
                p_units += b.multiplicity;
                BigInt h_units = 0;
                for (const UnitDebtBundle& pb : bundles_[v])
                    if (pb.t1 <= b.t2) h_units += pb.multiplicity;
                if (p_units - h_units > shortfall) shortfall = p_units - h_units;
            }
            if (shortfall > 0) {
                charge(v, shortfall);
                trace_.log("count-repair " + names_[v] + " +" + shortfall.str());
                BigInt left = shortfall;
                for (UnitDebtBundle& b : bundles_[w]) {
                    if (left == 0) break;
                    BigInt q = boost::multiprecision::min(left, b.multiplicity);
                    trace_.pay(b.origin, b.t2, q);
                    b.multiplicity -= q;
                    left -= q;
                }
                prune_empty(w);
                if (bundles_[w].empty()) {
                    drop_leaf(w);
                    return;
                }
            }
        }

        // (3) cascade: match the earliest child unit against a parent debt
        while (!bundles_[w].empty()) {
            UnitDebtBundle& child = bundles_[w].front();
            const int t_prime = child.t2;
            // closing candidate: smallest t2 among parent bundles with t2 <= t'
            int pick = -1;
            for (size_t i = 0; i < bundles_[v].size(); ++i) {
                const UnitDebtBundle& pb = bundles_[v][i];
                if (pb.multiplicity == 0) continue;
                if (pb.t2 <= t_prime) {
                    pick = static_cast<int>(i);
                    break; // bundles_[v] sorted by (t2, t1, origin)
                }
            }
            bool straddle = false;
            if (pick < 0) {
                for (size_t i = 0; i < bundles_[v].size(); ++i) {
                    const UnitDebtBundle& pb = bundles_[v][i];
                    if (pb.multiplicity == 0) continue;
                    if (pb.t1 <= t_prime && t_prime <= pb.t2) {
                        pick = static_cast<int>(i);
                        straddle = true;
                        break;
                    }
                }
            }
            if (pick < 0)
                throw std::logic_error(
                    "out-tree rewriter: no parent debt opens in time (unreachable after "
                    "prefix and count repair)");
            UnitDebtBundle& pb = bundles_[v][pick];
            BigInt q = boost::multiprecision::min(pb.multiplicity, child.multiplicity);
            const int fresh_stamp = straddle ? t_prime : pb.t2;
            trace_.pay(child.origin, t_prime, q);
            int spill = spill_leaf(u);
            bundles_[spill].push_back(UnitDebtBundle{pb.origin, fresh_stamp, fresh_stamp, q});
            trace_.log(std::string(straddle ? "reroute-straddle " : "reroute-early ") +
                       names_[u] + "->" + names_[v] + " [" + std::to_string(pb.t1) + "," +
                       std::to_string(pb.t2) + "]x" + q.str() + " => ~spill@" +
                       std::to_string(fresh_stamp) + ", cancel " + q.str() + "x@" +
                       std::to_string(t_prime));
            pb.multiplicity -= q;
            child.multiplicity -= q;
            prune_empty(v);
            prune_empty(w);
            sort_bundles(v);
        }
        drop_leaf(w);
    }

    void prune_empty(int v) {
        auto& bs = bundles_[v];
        bs.erase(std::remove_if(bs.begin(), bs.end(),
                                [](const UnitDebtBundle& b) { return b.multiplicity == 0; }),
                 bs.end());
    }

    void drop_leaf(int w) {
        int p = parent_[w];
        children_[p].erase(std::find(children_[p].begin(), children_[p].end(), w));
        alive_[w] = false;
        trace_.log("drop-leaf " + names_[w]);
    }

    // Flat tree: the (repaired) root pays every remaining bundle at its stamp.
    void terminal_pay() {
        for (size_t v = 0; v < alive_.size(); ++v) {
            if (!alive_[v]) continue;
            for (const UnitDebtBundle& b : bundles_[v]) {
                if (b.t1 != b.t2)
                    throw std::logic_error("out-tree rewriter: unsnapped terminal bundle");
                trace_.pay(b.origin, b.t2, b.multiplicity);
                trace_.log("terminal-pay " + names_[v] + " " + b.multiplicity.str() + "x@" +
                           std::to_string(b.t2));
            }
        }
    }

    TreeBailoutResult finish() {
        TreeBailoutResult result;
        result.min_total = Money(total_);
        result.bailout = BailoutVector(inst_.node_count());
        for (int v = 0; v < inst_.node_count(); ++v)
            result.bailout.set(v, Money(trace_.charges[v]));
        result.schedule = Schedule(inst_);
        for (const auto& [key, units] : trace_.payments)
            result.schedule.add(key.first, key.second, Money(units));
        result.audit_trail = trace_.lines;
        ValidationReport rep = validate(inst_, result.schedule, Variant::PP, &result.bailout);
        if (!rep.valid || !rep.perfect)
            throw std::logic_error("pp_bailout_min_out_tree: witness failed re-validation");
        return result;
    }

    const IdmInstance& inst_;
    int root_ = -1;
    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
    std::vector<BigInt> assets_;
    std::vector<std::vector<UnitDebtBundle>> bundles_; // bundles on (parent(v), v)
    std::vector<char> alive_;
    std::vector<std::string> names_;
    std::vector<int> spill_;
    RewriteTrace trace_;
    BigInt total_ = 0;
};

} // namespace detail

inline TreeBailoutResult pp_bailout_min_out_tree(const IdmInstance& inst) {
    return detail::OutTreeRewriter(inst).run();
}

} // namespace idm
