// ============================================================================
// idm/schedule.hpp — sparse payment schedules and bailout vectors
// ============================================================================
//
// A schedule is logically an |E| x T matrix of non-negative payments; only
// the nonzero entries are stored, keyed by (debt index, time). Entries are
// validated against the owning instance at insertion: payments outside
// [1, lifetime] or on unknown debts are construction errors, everything else
// (early payment, overpayment, withholding, ...) is the validator's business.

#pragma once

#include "idm/instance.hpp"

#include <map>

namespace idm {

class Schedule {
  public:
    Schedule() = default;
    explicit Schedule(const IdmInstance& inst)
        : debt_count_(inst.debt_count()), lifetime_(inst.lifetime()) {}

    // Sets p_e^t (amount 0 erases the entry). Negative amounts are rejected.
    Schedule& set(int debt, int time, Money amount) {
        check(debt, time);
        if (amount.is_negative())
            throw std::invalid_argument("Schedule: negative payment");
        if (amount.is_zero())
            payments_.erase({debt, time});
        else
            payments_[{debt, time}] = std::move(amount);
        return *this;
    }

    Schedule& add(int debt, int time, const Money& amount) {
        check(debt, time);
        return set(debt, time, amount_at(debt, time) + amount);
    }

    [[nodiscard]] Money amount_at(int debt, int time) const {
        auto it = payments_.find({debt, time});
        return it == payments_.end() ? Money(0) : it->second;
    }

    [[nodiscard]] Money total_paid(int debt) const {
        Money s = 0;
        for (auto it = payments_.lower_bound({debt, 0});
             it != payments_.end() && it->first.first == debt; ++it)
            s += it->second;
        return s;
    }

    [[nodiscard]] Money total_paid_through(int debt, int time) const {
        Money s = 0;
        for (auto it = payments_.lower_bound({debt, 0});
             it != payments_.end() && it->first.first == debt && it->first.second <= time; ++it)
            s += it->second;
        return s;
    }

    // Nonzero entries ordered by (debt, time).
    [[nodiscard]] const std::map<std::pair<int, int>, Money>& payments() const {
        return payments_;
    }

    [[nodiscard]] size_t size() const { return payments_.size(); }
    [[nodiscard]] bool empty() const { return payments_.empty(); }

    friend bool operator==(const Schedule& a, const Schedule& b) {
        return a.payments_ == b.payments_;
    }

  private:
    void check(int debt, int time) const {
        if (debt < 0 || debt >= debt_count_)
            throw std::out_of_range("Schedule: unknown debt index");
        if (time < 1 || time > lifetime_)
            throw std::out_of_range("Schedule: time outside [1, lifetime]");
    }

    int debt_count_ = 0;
    int lifetime_ = 0;
    std::map<std::pair<int, int>, Money> payments_;
};

// Per-node non-negative asset supplements applied at time 0.
class BailoutVector {
  public:
    BailoutVector() = default;
    explicit BailoutVector(int node_count) : supplement_(node_count, Money(0)) {}

    BailoutVector& set(int node, Money amount) {
        if (amount.is_negative())
            throw std::invalid_argument("BailoutVector: negative supplement");
        supplement_.at(node) = std::move(amount);
        return *this;
    }
    BailoutVector& add(int node, const Money& amount) {
        return set(node, supplement_.at(node) + amount);
    }

    [[nodiscard]] const Money& at(int node) const { return supplement_.at(node); }
    [[nodiscard]] int node_count() const { return static_cast<int>(supplement_.size()); }
    [[nodiscard]] Money total() const {
        Money s = 0;
        for (const Money& m : supplement_) s += m;
        return s;
    }
    [[nodiscard]] bool all_integral() const {
        for (const Money& m : supplement_)
            if (!m.is_integral()) return false;
        return true;
    }
    [[nodiscard]] const std::vector<Money>& entries() const { return supplement_; }

    friend bool operator==(const BailoutVector& a, const BailoutVector& b) {
        return a.supplement_ == b.supplement_;
    }

  private:
    std::vector<Money> supplement_;
};

// Maps a schedule of `from` into one of `to` through the compaction time map.
// Payment times that are not extremal are moved to the next extremal time
// (never earlier than the debt's window start, and unpaid-at-due states are
// unchanged because every t2 is extremal), which preserves validity verdicts
// and bankrupt sets. When expanding (inverse map), every payment time is an
// image time, so the translation is exact.
inline Schedule translate_schedule(const IdmInstance& from, const IdmInstance& to,
                                   const std::map<int, int>& time_map, const Schedule& sched) {
    (void)from;
    Schedule out(to);
    for (const auto& [key, amount] : sched.payments()) {
        auto [debt, t] = key;
        auto it = time_map.lower_bound(t); // first extremal time >= t
        if (it == time_map.end())
            throw std::out_of_range("translate_schedule: payment after last extremal time");
        out.add(debt, it->second, amount);
    }
    return out;
}

inline Schedule translate_schedule_back(const IdmInstance& compacted, const IdmInstance& original,
                                        const std::map<int, int>& time_map,
                                        const Schedule& sched) {
    (void)compacted;
    std::map<int, int> inverse;
    for (const auto& [oldt, newt] : time_map) inverse[newt] = oldt;
    Schedule out(original);
    for (const auto& [key, amount] : sched.payments()) {
        auto [debt, t] = key;
        out.add(debt, inverse.at(t), amount);
    }
    return out;
}

} // namespace idm
