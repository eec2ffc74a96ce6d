// ============================================================================
// idm/validity.hpp — cash trajectories, schedule validity, bankruptcies
// ============================================================================
//
// Semantics implemented here:
//
//  * All payments that share a time step execute simultaneously (clearing
//    house netting). Cash non-negativity and withholding are judged AFTER
//    the whole step, which is what makes zero-asset payment cycles valid.
//  * A debt is overdue at t when t >= t2 and the cumulative payment through
//    t (including payments made at t2 itself) is below the amount.
//  * Withholding: a node with an overdue debt may not sit on usable cash.
//    In FP and PP "usable" means any positive amount (the check asserts
//    cash == 0 exactly); in AoN it means enough to cover the full amount of
//    some overdue debt.
//  * A node is bankrupt if one of its debts is overdue at any time; later
//    recovery does not remove it from the bankrupt set. The earliest such
//    time is reported for diagnostics.
//
// validate() never throws on bad schedules: every problem becomes a tagged
// violation in the report. It runs in O((payments + debts) log + checks)
// by visiting only the times where something can change.

#pragma once

#include "idm/instance.hpp"
#include "idm/schedule.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace idm {

enum class Variant { AoN, PP, FP };

inline const char* to_string(Variant v) {
    switch (v) {
        case Variant::AoN: return "aon";
        case Variant::PP: return "pp";
        case Variant::FP: return "fp";
    }
    return "?";
}

enum class DebtStatus { Inactive, Payable, Due, Overdue, Settled };

inline const char* to_string(DebtStatus s) {
    switch (s) {
        case DebtStatus::Inactive: return "inactive";
        case DebtStatus::Payable: return "payable";
        case DebtStatus::Due: return "due";
        case DebtStatus::Overdue: return "overdue";
        case DebtStatus::Settled: return "settled";
    }
    return "?";
}

struct CashTrajectory {
    // cash[t][v] for t in 0..T; income[t-1][v], outgo[t-1][v] for t in 1..T.
    std::vector<std::vector<Money>> cash;
    std::vector<std::vector<Money>> income;
    std::vector<std::vector<Money>> outgo;

    [[nodiscard]] const Money& at(int node, int t) const { return cash.at(t).at(node); }
};

enum class ViolationKind {
    NegativePayment,
    NegativeCash,
    Overpaid,
    PaidEarly,
    WrongShape,
    Withholding,
};

inline const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::NegativePayment: return "NegativePayment";
        case ViolationKind::NegativeCash: return "NegativeCash";
        case ViolationKind::Overpaid: return "Overpaid";
        case ViolationKind::PaidEarly: return "PaidEarly";
        case ViolationKind::WrongShape: return "WrongShape";
        case ViolationKind::Withholding: return "Withholding";
    }
    return "?";
}

struct Violation {
    ViolationKind kind;
    int node = -1; // -1 when not node-scoped
    int debt = -1; // -1 when not debt-scoped
    int time = -1;
};

struct ValidationReport {
    bool valid = true;
    bool perfect = true;
    std::vector<Violation> violations;
    std::map<int, int> bankrupt; // node -> earliest bankrupt time
};

inline int count_bankruptcies(const ValidationReport& r) {
    return static_cast<int>(r.bankrupt.size());
}

namespace detail {

inline void check_schedule_indices(const IdmInstance& inst, const Schedule& sched) {
    for (const auto& [key, amount] : sched.payments()) {
        (void)amount;
        if (key.first < 0 || key.first >= inst.debt_count())
            throw std::out_of_range("schedule references unknown debt");
        if (key.second < 1 || key.second > inst.lifetime())
            throw std::out_of_range("schedule payment outside [1, lifetime]");
    }
}

} // namespace detail

// Full cash/income/outgoing matrices under the schedule, with the optional
// bailout added at time 0. Memory is Theta(|V| * T); validate() below does
// not use this.
inline CashTrajectory derive_cash(const IdmInstance& inst, const Schedule& sched,
                                  const BailoutVector* bailout = nullptr) {
    detail::check_schedule_indices(inst, sched);
    const int n = inst.node_count();
    const int T = inst.lifetime();
    CashTrajectory tr;
    tr.cash.assign(T + 1, std::vector<Money>(n, Money(0)));
    tr.income.assign(T, std::vector<Money>(n, Money(0)));
    tr.outgo.assign(T, std::vector<Money>(n, Money(0)));
    for (int v = 0; v < n; ++v) {
        tr.cash[0][v] = inst.initial_asset(v);
        if (bailout) tr.cash[0][v] += bailout->at(v);
    }
    for (const auto& [key, amount] : sched.payments()) {
        const Debt& d = inst.debt(key.first);
        tr.income[key.second - 1][d.creditor] += amount;
        tr.outgo[key.second - 1][d.debtor] += amount;
    }
    for (int t = 1; t <= T; ++t)
        for (int v = 0; v < n; ++v)
            tr.cash[t][v] = tr.cash[t - 1][v] + tr.income[t - 1][v] - tr.outgo[t - 1][v];
    return tr;
}

// Status of one debt at time t in [0, T], judged after the time-t payments.
// The Due status marks the boundary case of a debt discharged exactly at its
// deadline; from t2+1 on it reports Settled.
inline DebtStatus debt_status(const IdmInstance& inst, const Schedule& sched, int debt, int t) {
    const Debt& d = inst.debt(debt);
    Money cum = sched.total_paid_through(debt, t);
    if (cum >= d.terms.amount) {
        if (t == d.terms.t2 && sched.total_paid_through(debt, t - 1) < d.terms.amount)
            return DebtStatus::Due;
        return DebtStatus::Settled;
    }
    if (t < d.terms.t1) return DebtStatus::Inactive;
    if (t < d.terms.t2) return DebtStatus::Payable;
    return DebtStatus::Overdue;
}

inline ValidationReport validate(const IdmInstance& inst, const Schedule& sched, Variant variant,
                                 const BailoutVector* bailout = nullptr) {
    detail::check_schedule_indices(inst, sched);
    ValidationReport report;
    const int n = inst.node_count();

    // Event times: payment times and due dates; nothing changes in between.
    std::map<int, std::vector<std::pair<int, Money>>> by_time; // t -> (debt, amount)
    for (const auto& [key, amount] : sched.payments())
        by_time[key.second].emplace_back(key.first, amount);
    std::set<int> events;
    for (const auto& [t, list] : by_time) {
        (void)list;
        events.insert(t);
    }
    for (const Debt& d : inst.debts()) events.insert(d.terms.t2);

    std::vector<Money> cash(n);
    for (int v = 0; v < n; ++v) {
        cash[v] = inst.initial_asset(v);
        if (bailout) cash[v] += bailout->at(v);
    }
    std::vector<Money> paid(inst.debt_count(), Money(0));
    std::set<int> overdue_debts;

    for (int t : events) {
        // 1. per-payment checks, then simultaneous netting
        auto it = by_time.find(t);
        if (it != by_time.end()) {
            for (const auto& [e, amount] : it->second) {
                const Debt& d = inst.debt(e);
                if (amount.is_negative())
                    report.violations.push_back({ViolationKind::NegativePayment, d.debtor, e, t});
                if (t < d.terms.t1)
                    report.violations.push_back({ViolationKind::PaidEarly, d.debtor, e, t});
                switch (variant) {
                    case Variant::PP:
                        if (!amount.is_integral())
                            report.violations.push_back(
                                {ViolationKind::WrongShape, d.debtor, e, t});
                        break;
                    case Variant::AoN:
                        if (amount != d.terms.amount)
                            report.violations.push_back(
                                {ViolationKind::WrongShape, d.debtor, e, t});
                        break;
                    case Variant::FP:
                        break;
                }
                Money before = paid[e];
                paid[e] += amount;
                if (paid[e] > d.terms.amount && before <= d.terms.amount)
                    report.violations.push_back({ViolationKind::Overpaid, d.debtor, e, t});
                cash[d.debtor] -= amount;
                cash[d.creditor] += amount;
            }
            for (const auto& [e, amount] : it->second) {
                (void)amount;
                const Debt& d = inst.debt(e);
                if (cash[d.debtor].is_negative())
                    report.violations.push_back({ViolationKind::NegativeCash, d.debtor, -1, t});
                // a previously overdue debt may have been discharged now
                if (overdue_debts.count(e) && paid[e] >= d.terms.amount) overdue_debts.erase(e);
            }
            // dedupe NegativeCash per (node, t)
            if (!report.violations.empty()) {
                auto& v = report.violations;
                std::sort(v.begin(), v.end(), [](const Violation& a, const Violation& b) {
                    return std::tie(a.time, a.kind, a.node, a.debt) <
                           std::tie(b.time, b.kind, b.node, b.debt);
                });
                v.erase(std::unique(v.begin(), v.end(),
                                    [](const Violation& a, const Violation& b) {
                                        return a.kind == b.kind && a.node == b.node &&
                                               a.debt == b.debt && a.time == b.time;
                                    }),
                        v.end());
            }
        }

        // 2. debts falling overdue at this time
        for (int e = 0; e < inst.debt_count(); ++e) {
            const Debt& d = inst.debt(e);
            if (d.terms.t2 == t && paid[e] < d.terms.amount) {
                overdue_debts.insert(e);
                auto [pos, inserted] = report.bankrupt.emplace(d.debtor, t);
                (void)pos;
                (void)inserted;
                report.perfect = false;
            }
        }

        // 3. withholding, judged on post-netting cash
        std::set<int> overdue_nodes;
        for (int e : overdue_debts) overdue_nodes.insert(inst.debt(e).debtor);
        for (int u : overdue_nodes) {
            bool withholding = false;
            if (variant == Variant::AoN) {
                for (int e : overdue_debts)
                    if (inst.debt(e).debtor == u && cash[u] >= inst.debt(e).terms.amount) {
                        withholding = true;
                        break;
                    }
            } else {
                withholding = cash[u].is_positive();
            }
            if (withholding)
                report.violations.push_back({ViolationKind::Withholding, u, -1, t});
        }
    }

    report.valid = report.violations.empty();
    return report;
}

} // namespace idm
