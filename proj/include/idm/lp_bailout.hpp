// ============================================================================
// idm/lp_bailout.hpp — FP bailout minimization as an exact LP
// ============================================================================
//
// A perfect FP schedule for (G, D, A0 + B) is exactly a feasible point of a
// linear program over bailout variables B[v] and payment variables p[e][t]:
// cash stays non-negative at every node and time, every debt is paid in full
// inside its window, and nothing is paid early. Withholding needs no row: a
// perfect schedule has no overdue debt, so the condition is vacuous.
//
// build_bailout_lp() emits the full variable registry (B, p, I, O, c) with
// the definitional rows, which is the documented public artifact (dump-able,
// row-for-row testable). The solvers below pivot on an equivalent reduced
// tableau instead: I, O and c are definitional equalities, so they are
// substituted away and only B and the in-window payment variables remain.
// Payment variables outside [t1, t2] are fixed to zero rather than left
// free: a positive payment past t2 combined with the full-payment row would
// overpay the debt and the extracted schedule would not validate.
//
// Instances are compacted before LP construction (T <= 2|E| afterwards) and
// the schedule is mapped back to original times on extraction. Every result
// is re-validated before it is returned.

#pragma once

#include "idm/instance.hpp"
#include "idm/lp.hpp"
#include "idm/schedule.hpp"
#include "idm/validity.hpp"

#include <optional>

namespace idm {

struct FpBailoutResult {
    Money min_total;
    BailoutVector bailout;
    Schedule schedule;
};

// Full-registry LP per the model definition. With a budget, the row
// sum(B) <= budget is emitted; without one the LP is the pure minimization.
// Variable order: B by node, p by (debt, time), I, O by (node, time), c by
// (node, time 0..T). All variables are implicitly non-negative, which covers
// the c >= 0 and B >= 0 families.
inline LinearProgram build_bailout_lp(const IdmInstance& inst,
                                      const std::optional<Money>& budget = std::nullopt) {
    LinearProgram lp;
    const int n = inst.node_count();
    const int m = inst.debt_count();
    const int T = inst.lifetime();

    std::vector<int> B(n);
    for (int v = 0; v < n; ++v) B[v] = lp.add_variable("B[" + inst.node_id(v) + "]");
    std::vector<std::vector<int>> p(m, std::vector<int>(T + 1, -1));
    for (int e = 0; e < m; ++e)
        for (int t = 1; t <= T; ++t)
            p[e][t] = lp.add_variable("p[" + std::to_string(e) + "][" + std::to_string(t) + "]");
    std::vector<std::vector<int>> I(n, std::vector<int>(T + 1, -1));
    std::vector<std::vector<int>> O(n, std::vector<int>(T + 1, -1));
    std::vector<std::vector<int>> c(n, std::vector<int>(T + 1, -1));
    for (int v = 0; v < n; ++v)
        for (int t = 1; t <= T; ++t) {
            I[v][t] = lp.add_variable("I[" + inst.node_id(v) + "][" + std::to_string(t) + "]");
            O[v][t] = lp.add_variable("O[" + inst.node_id(v) + "][" + std::to_string(t) + "]");
        }
    for (int v = 0; v < n; ++v)
        for (int t = 0; t <= T; ++t)
            c[v][t] = lp.add_variable("c[" + inst.node_id(v) + "][" + std::to_string(t) + "]");

    for (int v = 0; v < n; ++v) lp.set_objective(B[v], 1);

    if (budget) {
        LpRow row;
        row.name = "budget";
        for (int v = 0; v < n; ++v) row.terms.emplace_back(B[v], 1);
        row.rel = Relation::LessEq;
        row.rhs = *budget;
        lp.add_row(std::move(row));
    }
    for (int v = 0; v < n; ++v) {
        LpRow row;
        row.name = "c0[" + inst.node_id(v) + "]";
        row.terms.emplace_back(c[v][0], 1);
        row.terms.emplace_back(B[v], -1);
        row.rel = Relation::Equal;
        row.rhs = inst.initial_asset(v);
        lp.add_row(std::move(row));
    }
    for (int e = 0; e < m; ++e) {
        const DebtTerms& terms = inst.debt(e).terms;
        for (int t = 1; t <= T; ++t) {
            if (t >= terms.t1 && t <= terms.t2) continue;
            LpRow row;
            row.name = "window[" + std::to_string(e) + "][" + std::to_string(t) + "]";
            row.terms.emplace_back(p[e][t], 1);
            row.rel = Relation::Equal;
            row.rhs = 0;
            lp.add_row(std::move(row));
        }
        LpRow full;
        full.name = "paid[" + std::to_string(e) + "]";
        for (int t = terms.t1; t <= terms.t2; ++t) full.terms.emplace_back(p[e][t], 1);
        full.rel = Relation::Equal;
        full.rhs = terms.amount;
        lp.add_row(std::move(full));
    }
    for (int v = 0; v < n; ++v)
        for (int t = 1; t <= T; ++t) {
            LpRow inc;
            inc.name = "I[" + inst.node_id(v) + "][" + std::to_string(t) + "]";
            inc.terms.emplace_back(I[v][t], 1);
            for (int e : inst.in_debts(v)) inc.terms.emplace_back(p[e][t], -1);
            inc.rel = Relation::Equal;
            inc.rhs = 0;
            lp.add_row(std::move(inc));
            LpRow out;
            out.name = "O[" + inst.node_id(v) + "][" + std::to_string(t) + "]";
            out.terms.emplace_back(O[v][t], 1);
            for (int e : inst.out_debts(v)) out.terms.emplace_back(p[e][t], -1);
            out.rel = Relation::Equal;
            out.rhs = 0;
            lp.add_row(std::move(out));
            LpRow rec;
            rec.name = "cash[" + inst.node_id(v) + "][" + std::to_string(t) + "]";
            rec.terms.emplace_back(c[v][t], 1);
            rec.terms.emplace_back(c[v][t - 1], -1);
            rec.terms.emplace_back(I[v][t], -1);
            rec.terms.emplace_back(O[v][t], 1);
            rec.rel = Relation::Equal;
            rec.rhs = 0;
            lp.add_row(std::move(rec));
        }
    return lp;
}

namespace detail {

// Reduced formulation: variables are B (optional) and in-window payments;
// cash non-negativity becomes one >= row per (node, time) with the prefix
// payment sums written out.
struct ReducedBailoutLp {
    LinearProgram lp;
    std::vector<int> bailout_vars;                  // per node, -1 when fixed to 0
    std::vector<std::vector<std::pair<int, int>>> payment_vars; // per debt: (time, var)
};

inline ReducedBailoutLp build_reduced(const IdmInstance& inst, bool with_bailout,
                                      const std::optional<Money>& budget) {
    ReducedBailoutLp r;
    const int n = inst.node_count();
    const int T = inst.lifetime();
    r.bailout_vars.assign(n, -1);
    if (with_bailout)
        for (int v = 0; v < n; ++v) {
            r.bailout_vars[v] = r.lp.add_variable("B[" + inst.node_id(v) + "]");
            r.lp.set_objective(r.bailout_vars[v], 1);
        }
    r.payment_vars.resize(inst.debt_count());
    for (int e = 0; e < inst.debt_count(); ++e)
        for (int t = inst.debt(e).terms.t1; t <= inst.debt(e).terms.t2; ++t)
            r.payment_vars[e].emplace_back(
                t, r.lp.add_variable("p[" + std::to_string(e) + "][" + std::to_string(t) + "]"));

    if (budget && with_bailout) {
        LpRow row;
        row.name = "budget";
        for (int v = 0; v < n; ++v) row.terms.emplace_back(r.bailout_vars[v], 1);
        row.rel = Relation::LessEq;
        row.rhs = *budget;
        r.lp.add_row(std::move(row));
    }
    for (int e = 0; e < inst.debt_count(); ++e) {
        LpRow full;
        full.name = "paid[" + std::to_string(e) + "]";
        for (auto [t, var] : r.payment_vars[e]) {
            (void)t;
            full.terms.emplace_back(var, 1);
        }
        full.rel = Relation::Equal;
        full.rhs = inst.debt(e).terms.amount;
        r.lp.add_row(std::move(full));
    }
    for (int v = 0; v < n; ++v)
        for (int t = 1; t <= T; ++t) {
            LpRow row;
            row.name = "cash[" + inst.node_id(v) + "][" + std::to_string(t) + "]";
            if (r.bailout_vars[v] >= 0) row.terms.emplace_back(r.bailout_vars[v], 1);
            for (int e : inst.in_debts(v))
                for (auto [s, var] : r.payment_vars[e])
                    if (s <= t) row.terms.emplace_back(var, 1);
            for (int e : inst.out_debts(v))
                for (auto [s, var] : r.payment_vars[e])
                    if (s <= t) row.terms.emplace_back(var, -1);
            row.rel = Relation::GreaterEq;
            row.rhs = -inst.initial_asset(v);
            r.lp.add_row(std::move(row));
        }
    return r;
}

struct ReducedOutcome {
    bool feasible = false;
    BailoutVector bailout;
    Schedule schedule; // against the original (uncompacted) instance
    Money total;
};

inline ReducedOutcome solve_reduced(const IdmInstance& inst, bool with_bailout,
                                    const std::optional<Money>& budget) {
    CompactResult comp = compact(inst);
    ReducedBailoutLp reduced = build_reduced(comp.instance, with_bailout, budget);
    LpSolution sol = solve_lp(reduced.lp);
    ReducedOutcome out;
    out.bailout = BailoutVector(inst.node_count());
    out.total = 0;
    if (sol.status != LpStatus::Optimal) return out;
    out.feasible = true;
    for (int v = 0; v < inst.node_count(); ++v)
        if (reduced.bailout_vars[v] >= 0)
            out.bailout.set(v, sol.assignment[reduced.bailout_vars[v]]);
    Schedule compacted_sched(comp.instance);
    for (int e = 0; e < comp.instance.debt_count(); ++e)
        for (auto [t, var] : reduced.payment_vars[e])
            if (sol.assignment[var].is_positive()) compacted_sched.add(e, t, sol.assignment[var]);
    out.schedule = translate_schedule_back(comp.instance, inst, comp.time_map, compacted_sched);
    out.total = sol.objective;
    return out;
}

} // namespace detail

// Least total bailout that admits a perfect FP schedule, with a witness
// schedule. Always optimal: repairing every node's worst prefix shortfall is
// feasible and the objective is bounded below by zero. The witness is
// re-validated (FP, perfect) before return.
inline FpBailoutResult fp_bailout_min(const IdmInstance& inst) {
    detail::ReducedOutcome out = detail::solve_reduced(inst, /*with_bailout=*/true, std::nullopt);
    if (!out.feasible) throw std::logic_error("fp_bailout_min: LP unexpectedly infeasible");
    ValidationReport rep = validate(inst, out.schedule, Variant::FP, &out.bailout);
    if (!rep.valid || !rep.perfect)
        throw std::logic_error("fp_bailout_min: witness failed re-validation");
    return FpBailoutResult{out.total, std::move(out.bailout), std::move(out.schedule)};
}

// Decision form: is there a perfect FP schedule with total bailout <= budget?
inline bool fp_bailout_decision(const IdmInstance& inst, const Money& budget) {
    return detail::solve_reduced(inst, /*with_bailout=*/true, budget).feasible;
}

// A perfect FP schedule when one exists (the zero-bailout special case).
// Which schedule is returned is an arbitrary LP vertex and may change with
// the pivot rule; only existence is contractual.
inline std::optional<Schedule> fp_perfect_scheduling(const IdmInstance& inst) {
    detail::ReducedOutcome out = detail::solve_reduced(inst, /*with_bailout=*/false, std::nullopt);
    if (!out.feasible) return std::nullopt;
    ValidationReport rep = validate(inst, out.schedule, Variant::FP);
    if (!rep.valid || !rep.perfect)
        throw std::logic_error("fp_perfect_scheduling: witness failed re-validation");
    return out.schedule;
}

} // namespace idm
