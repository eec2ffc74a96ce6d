// ============================================================================
// idm/instance.hpp — the temporal debt network model
// ============================================================================
//
// An instance is a labelled multidigraph of debts over a finite node set,
// together with non-negative integral initial assets per node. Each debt
// carries terms a@[t1,t2]: an integral amount a > 0 payable at integer times
// in the window [t1,t2]. The instance lifetime T is the largest t2 (0 when
// there are no debts) and is immutable after construction, as is everything
// else here.
//
// Node ids are opaque strings; dense indices are assigned in declaration
// order and used throughout the toolkit.

#pragma once

#include "idm/money.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace idm {

using NodeId = std::string;

enum class ModelError {
    NonContiguousLabels,
    NegativeAsset,
    NonIntegralAmount,
    NonPositiveAmount,
    UnknownEndpoint,
    SelfLoop,
    BadInterval,
    UnknownNode,
    DuplicateNode,
};

inline const char* to_string(ModelError e) {
    switch (e) {
        case ModelError::NonContiguousLabels: return "NonContiguousLabels";
        case ModelError::NegativeAsset: return "NegativeAsset";
        case ModelError::NonIntegralAmount: return "NonIntegralAmount";
        case ModelError::NonPositiveAmount: return "NonPositiveAmount";
        case ModelError::UnknownEndpoint: return "UnknownEndpoint";
        case ModelError::SelfLoop: return "SelfLoop";
        case ModelError::BadInterval: return "BadInterval";
        case ModelError::UnknownNode: return "UnknownNode";
        case ModelError::DuplicateNode: return "DuplicateNode";
    }
    return "?";
}

class ModelViolation : public std::runtime_error {
  public:
    ModelViolation(ModelError kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    [[nodiscard]] ModelError kind() const { return kind_; }

  private:
    ModelError kind_;
};

struct DebtTerms {
    Money amount; // > 0, integral
    int t1 = 1;   // 1 <= t1 <= t2
    int t2 = 1;
};

struct Debt {
    int debtor = -1;   // dense node index
    int creditor = -1; // dense node index
    int label = 0;     // contiguous 0,1,2,... per ordered (debtor,creditor) pair
    DebtTerms terms;
};

// Debt expressed with node ids, used as construction input.
struct DebtSpec {
    NodeId debtor;
    NodeId creditor;
    int label = 0;
    Money amount;
    int t1 = 1;
    int t2 = 1;
};

class IdmInstance {
  public:
    // Checks every structural invariant; throws ModelViolation on the first
    // failure. The instance is immutable afterwards.
    static IdmInstance build(std::vector<NodeId> nodes,
                             const std::vector<DebtSpec>& debts,
                             std::vector<Money> initial_assets);

    [[nodiscard]] int node_count() const { return static_cast<int>(nodes_.size()); }
    [[nodiscard]] int debt_count() const { return static_cast<int>(debts_.size()); }
    [[nodiscard]] int lifetime() const { return lifetime_; }

    [[nodiscard]] const std::vector<NodeId>& nodes() const { return nodes_; }
    [[nodiscard]] const NodeId& node_id(int v) const { return nodes_.at(v); }
    [[nodiscard]] const std::vector<Debt>& debts() const { return debts_; }
    [[nodiscard]] const Debt& debt(int e) const { return debts_.at(e); }
    [[nodiscard]] const std::vector<Money>& initial_assets() const { return assets_; }
    [[nodiscard]] const Money& initial_asset(int v) const { return assets_.at(v); }

    [[nodiscard]] bool has_node(const NodeId& id) const { return index_.count(id) != 0; }
    [[nodiscard]] int node_index(const NodeId& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw ModelViolation(ModelError::UnknownNode, id);
        return it->second;
    }

    // Debt indices grouped by endpoint, in construction order.
    [[nodiscard]] const std::vector<int>& out_debts(int v) const { return out_.at(v); }
    [[nodiscard]] const std::vector<int>& in_debts(int v) const { return in_.at(v); }

    // Index of the debt (debtor,creditor,label); -1 when absent.
    [[nodiscard]] int find_debt(const NodeId& debtor, const NodeId& creditor, int label) const {
        if (!has_node(debtor) || !has_node(creditor)) return -1;
        auto it = by_key_.find(key(node_index(debtor), node_index(creditor), label));
        return it == by_key_.end() ? -1 : it->second;
    }

    // Structural equality: same node set with the same assets and the same
    // debt multiset. Declaration order is not significant.
    friend bool operator==(const IdmInstance& a, const IdmInstance& b) {
        if (a.node_count() != b.node_count() || a.debt_count() != b.debt_count()) return false;
        std::map<NodeId, Money> am, bm;
        for (int v = 0; v < a.node_count(); ++v) am[a.node_id(v)] = a.initial_asset(v);
        for (int v = 0; v < b.node_count(); ++v) bm[b.node_id(v)] = b.initial_asset(v);
        if (am != bm) return false;
        using Row = std::tuple<NodeId, NodeId, int, Money, int, int>;
        std::vector<Row> ar, br;
        for (const Debt& d : a.debts_)
            ar.emplace_back(a.node_id(d.debtor), a.node_id(d.creditor), d.label,
                            d.terms.amount, d.terms.t1, d.terms.t2);
        for (const Debt& d : b.debts_)
            br.emplace_back(b.node_id(d.debtor), b.node_id(d.creditor), d.label,
                            d.terms.amount, d.terms.t1, d.terms.t2);
        std::sort(ar.begin(), ar.end());
        std::sort(br.begin(), br.end());
        return ar == br;
    }

  private:
    static long long key(int u, int v, int label) {
        return (static_cast<long long>(u) << 40) | (static_cast<long long>(v) << 20) | label;
    }

    std::vector<NodeId> nodes_;
    std::unordered_map<NodeId, int> index_;
    std::vector<Debt> debts_;
    std::vector<Money> assets_;
    std::vector<std::vector<int>> out_, in_;
    std::unordered_map<long long, int> by_key_;
    int lifetime_ = 0;
};

inline IdmInstance IdmInstance::build(std::vector<NodeId> nodes,
                                      const std::vector<DebtSpec>& debts,
                                      std::vector<Money> initial_assets) {
    IdmInstance inst;
    inst.nodes_ = std::move(nodes);
    for (int v = 0; v < static_cast<int>(inst.nodes_.size()); ++v) {
        if (!inst.index_.emplace(inst.nodes_[v], v).second)
            throw ModelViolation(ModelError::DuplicateNode, inst.nodes_[v]);
    }
    if (initial_assets.size() != inst.nodes_.size())
        throw ModelViolation(ModelError::NegativeAsset, "asset vector size mismatch");
    for (size_t v = 0; v < initial_assets.size(); ++v) {
        const Money& a = initial_assets[v];
        if (a.is_negative())
            throw ModelViolation(ModelError::NegativeAsset, inst.nodes_[v] + " = " + a.str());
        if (!a.is_integral())
            throw ModelViolation(ModelError::NonIntegralAmount, "asset of " + inst.nodes_[v]);
    }
    inst.assets_ = std::move(initial_assets);

    inst.out_.resize(inst.nodes_.size());
    inst.in_.resize(inst.nodes_.size());
    std::map<std::pair<int, int>, std::set<int>> labels;
    for (const DebtSpec& s : debts) {
        auto du = inst.index_.find(s.debtor);
        auto dv = inst.index_.find(s.creditor);
        if (du == inst.index_.end())
            throw ModelViolation(ModelError::UnknownEndpoint, s.debtor);
        if (dv == inst.index_.end())
            throw ModelViolation(ModelError::UnknownEndpoint, s.creditor);
        if (du->second == dv->second)
            throw ModelViolation(ModelError::SelfLoop, s.debtor);
        if (!s.amount.is_integral())
            throw ModelViolation(ModelError::NonIntegralAmount,
                                 s.debtor + "->" + s.creditor + " " + s.amount.str());
        if (!s.amount.is_positive())
            throw ModelViolation(ModelError::NonPositiveAmount,
                                 s.debtor + "->" + s.creditor + " " + s.amount.str());
        if (s.t1 < 1 || s.t1 > s.t2)
            throw ModelViolation(ModelError::BadInterval,
                                 "[" + std::to_string(s.t1) + "," + std::to_string(s.t2) + "]");
        Debt d;
        d.debtor = du->second;
        d.creditor = dv->second;
        d.label = s.label;
        d.terms = DebtTerms{s.amount, s.t1, s.t2};
        if (!labels[{d.debtor, d.creditor}].insert(d.label).second)
            throw ModelViolation(ModelError::NonContiguousLabels,
                                 "duplicate label " + std::to_string(d.label));
        int e = static_cast<int>(inst.debts_.size());
        inst.debts_.push_back(d);
        inst.out_[d.debtor].push_back(e);
        inst.in_[d.creditor].push_back(e);
        inst.by_key_[key(d.debtor, d.creditor, d.label)] = e;
        inst.lifetime_ = std::max(inst.lifetime_, d.terms.t2);
    }
    for (const auto& [pair, set] : labels) {
        int want = 0;
        for (int l : set)
            if (l != want++)
                throw ModelViolation(ModelError::NonContiguousLabels,
                                     inst.nodes_[pair.first] + "->" + inst.nodes_[pair.second]);
    }
    return inst;
}

// Incremental construction convenience: labels are assigned per ordered pair
// in insertion order, which keeps them contiguous by construction.
class InstanceBuilder {
  public:
    InstanceBuilder& node(const NodeId& id, Money assets = 0) {
        nodes_.push_back(id);
        assets_.push_back(std::move(assets));
        return *this;
    }
    InstanceBuilder& debt(const NodeId& u, const NodeId& v, Money amount, int t1, int t2) {
        int label = next_label_[{u, v}]++;
        debts_.push_back(DebtSpec{u, v, label, std::move(amount), t1, t2});
        return *this;
    }
    InstanceBuilder& debt(const NodeId& u, const NodeId& v, Money amount, int t) {
        return debt(u, v, std::move(amount), t, t);
    }
    [[nodiscard]] IdmInstance build() const { return IdmInstance::build(nodes_, debts_, assets_); }

  private:
    std::vector<NodeId> nodes_;
    std::vector<Money> assets_;
    std::vector<DebtSpec> debts_;
    std::map<std::pair<NodeId, NodeId>, int> next_label_;
};

// --- timestamp canonicalization ---------------------------------------------

// Every time that appears as some debt's t1 or t2, in increasing order.
inline std::vector<int> extremal_timestamps(const IdmInstance& inst) {
    std::set<int> ts;
    for (const Debt& d : inst.debts()) {
        ts.insert(d.terms.t1);
        ts.insert(d.terms.t2);
    }
    return {ts.begin(), ts.end()};
}

struct CompactResult {
    IdmInstance instance;
    std::map<int, int> time_map; // extremal old time -> new time in 1..T'
};

// Relabels the extremal timestamps to 1..T' (order preserving), dropping the
// gaps. Amounts, assets and the node set are untouched. Schedules translate
// through the map (see translate_schedule in schedule.hpp) with identical
// validity verdicts and bankrupt sets in both directions.
inline CompactResult compact(const IdmInstance& inst) {
    CompactResult r;
    int next = 1;
    for (int t : extremal_timestamps(inst)) r.time_map[t] = next++;
    std::vector<DebtSpec> specs;
    specs.reserve(inst.debt_count());
    for (const Debt& d : inst.debts())
        specs.push_back(DebtSpec{inst.node_id(d.debtor), inst.node_id(d.creditor), d.label,
                                 d.terms.amount, r.time_map.at(d.terms.t1),
                                 r.time_map.at(d.terms.t2)});
    r.instance = IdmInstance::build(inst.nodes(), specs, inst.initial_assets());
    return r;
}

// --- solvency predicates -----------------------------------------------------

// True when assets plus every possible receivable still fall short of the
// node's total obligations. An insolvent node defaults under every schedule.
inline bool is_insolvent(const IdmInstance& inst, int v) {
    if (v < 0 || v >= inst.node_count()) throw ModelViolation(ModelError::UnknownNode, "index");
    Money in = inst.initial_asset(v);
    for (int e : inst.in_debts(v)) in += inst.debt(e).terms.amount;
    Money out = 0;
    for (int e : inst.out_debts(v)) out += inst.debt(e).terms.amount;
    return in < out;
}

struct PrefixDeficit {
    bool prefix_insolvent = false;
    Money max_deficit;                        // largest positive shortfall; 0 if none
    std::vector<std::pair<int, Money>> by_time; // deficit at each extremal time, ascending
};

// Time-prefix refinement of insolvency: at each time t compare the
// obligations due by t against assets plus everything that could possibly
// have arrived by t. The deficit is a step function of t that only changes at
// extremal timestamps, so it is evaluated there. A positive deficit at any t
// rules out a perfect schedule; max_deficit is the minimal asset supplement
// that repairs the node.
inline PrefixDeficit prefix_deficit(const IdmInstance& inst, int v) {
    if (v < 0 || v >= inst.node_count()) throw ModelViolation(ModelError::UnknownNode, "index");
    PrefixDeficit r;
    r.max_deficit = 0;
    for (int t : extremal_timestamps(inst)) {
        Money due = 0, receivable = 0;
        for (int e : inst.out_debts(v))
            if (inst.debt(e).terms.t2 <= t) due += inst.debt(e).terms.amount;
        for (int e : inst.in_debts(v))
            if (inst.debt(e).terms.t1 <= t) receivable += inst.debt(e).terms.amount;
        Money deficit = due - receivable - inst.initial_asset(v);
        r.by_time.emplace_back(t, deficit);
        if (deficit > r.max_deficit) r.max_deficit = deficit;
    }
    r.prefix_insolvent = r.max_deficit.is_positive();
    return r;
}

inline bool is_prefix_insolvent(const IdmInstance& inst, int v) {
    return prefix_deficit(inst, v).prefix_insolvent;
}

} // namespace idm
