// ============================================================================
// idm/lp.hpp — exact rational linear programming
// ============================================================================
//
// A small dense simplex over exact rationals. All variables are implicitly
// >= 0; rows are linear relations sum(coeff * var) {<=,==,>=} rhs; the
// objective is minimized. Two-phase method with Bland's pivoting rule, so
// cycling cannot occur; the worst case is exponential, which is irrelevant at
// the instance sizes this toolkit targets. Every optimal assignment is
// re-checked against the original rows before it is returned.

#pragma once

#include "idm/money.hpp"

#include <cassert>
#include <ostream>
#include <string>
#include <vector>

namespace idm {

enum class Relation { LessEq, Equal, GreaterEq };

inline const char* to_string(Relation r) {
    switch (r) {
        case Relation::LessEq: return "<=";
        case Relation::Equal: return "==";
        case Relation::GreaterEq: return ">=";
    }
    return "?";
}

struct LpRow {
    std::vector<std::pair<int, Money>> terms; // (variable index, coefficient)
    Relation rel = Relation::LessEq;
    Money rhs;
    std::string name;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<Money> assignment; // per variable, when Optimal
    Money objective;
};

class LinearProgram {
  public:
    int add_variable(std::string name) {
        names_.push_back(std::move(name));
        objective_.emplace_back(0);
        return static_cast<int>(names_.size()) - 1;
    }

    void set_objective(int var, Money coeff) { objective_.at(var) = std::move(coeff); }

    void add_row(LpRow row) {
        for (auto& [v, c] : row.terms) {
            (void)c;
            assert(v >= 0 && v < variable_count());
        }
        rows_.push_back(std::move(row));
    }

    [[nodiscard]] int variable_count() const { return static_cast<int>(names_.size()); }
    [[nodiscard]] int row_count() const { return static_cast<int>(rows_.size()); }
    [[nodiscard]] const std::string& variable_name(int v) const { return names_.at(v); }
    [[nodiscard]] const std::vector<LpRow>& rows() const { return rows_; }
    [[nodiscard]] const std::vector<Money>& objective() const { return objective_; }

    // Human-readable listing in declaration order.
    void dump(std::ostream& os) const {
        os << "minimize";
        bool first = true;
        for (int v = 0; v < variable_count(); ++v)
            if (!objective_[v].is_zero()) {
                os << (first ? " " : " + ") << objective_[v].str() << "*" << names_[v];
                first = false;
            }
        if (first) os << " 0";
        os << "\n";
        for (const LpRow& r : rows_) {
            if (!r.name.empty()) os << r.name << ": ";
            bool f = true;
            for (const auto& [v, c] : r.terms) {
                os << (f ? "" : " + ") << c.str() << "*" << names_[v];
                f = false;
            }
            if (f) os << "0";
            os << " " << to_string(r.rel) << " " << r.rhs.str() << "\n";
        }
    }

  private:
    std::vector<std::string> names_;
    std::vector<Money> objective_;
    std::vector<LpRow> rows_;
};

namespace detail {

// Dense two-phase simplex tableau over Money.
class SimplexTableau {
  public:
    // cols: structural variables first, then one slack per inequality row,
    // then artificials; the last column is the rhs.
    SimplexTableau(const LinearProgram& lp) : n_struct_(lp.variable_count()) {
        const int m = lp.row_count();
        int n_slack = 0;
        for (const LpRow& r : lp.rows())
            if (r.rel != Relation::Equal) ++n_slack;
        n_cols_ = n_struct_ + n_slack + m; // worst case one artificial per row
        rows_.assign(m, std::vector<Money>(n_cols_ + 1, Money(0)));
        basis_.assign(m, -1);

        int slack_at = n_struct_;
        int art_at = n_struct_ + n_slack;
        n_art_begin_ = art_at;
        for (int i = 0; i < m; ++i) {
            const LpRow& r = lp.rows()[i];
            auto& row = rows_[i];
            for (const auto& [v, c] : r.terms) row[v] += c;
            row[n_cols_] = r.rhs;
            Money slack_sign = 0;
            if (r.rel == Relation::LessEq) slack_sign = 1;
            if (r.rel == Relation::GreaterEq) slack_sign = -1;
            int slack_col = -1;
            if (!slack_sign.is_zero()) {
                slack_col = slack_at++;
                row[slack_col] = slack_sign;
            }
            if (row[n_cols_].is_negative()) {
                for (auto& c : row) c = -c;
                slack_sign = -slack_sign;
            }
            if (slack_col >= 0 && slack_sign == Money(1)) {
                basis_[i] = slack_col; // slack is a valid starting basic var
            } else {
                int a = art_at++;
                rows_[i][a] = 1;
                basis_[i] = a;
                artificial_.push_back(a);
            }
        }
        n_cols_used_ = art_at;
    }

    LpStatus solve(const std::vector<Money>& objective, std::vector<Money>* solution,
                   Money* objective_value) {
        // phase 1: minimize the sum of artificials
        if (!artificial_.empty()) {
            std::vector<Money> phase1(n_cols_used_, Money(0));
            for (int a : artificial_) phase1[a] = 1;
            build_cost_row(phase1);
            run();
            if (cost_row_[n_cols_].is_negative())
                return LpStatus::Infeasible; // positive residual infeasibility
            // pivot artificials out of the basis where possible
            for (int i = 0; i < row_count(); ++i) {
                if (basis_[i] < n_art_begin_) continue;
                int enter = -1;
                for (int j = 0; j < n_art_begin_; ++j)
                    if (!rows_[i][j].is_zero()) {
                        enter = j;
                        break;
                    }
                if (enter >= 0) pivot(i, enter);
                // a row with no structural/slack coefficients is redundant;
                // its artificial stays basic at value 0, which is harmless.
            }
        }
        // phase 2
        std::vector<Money> cost(n_cols_used_, Money(0));
        for (size_t v = 0; v < objective.size(); ++v) cost[v] = objective[v];
        for (int a : artificial_) cost[a] = 0;
        forbid_artificials_ = true;
        build_cost_row(cost);
        if (!run()) return LpStatus::Unbounded;
        if (solution) {
            solution->assign(n_struct_, Money(0));
            for (int i = 0; i < row_count(); ++i)
                if (basis_[i] >= 0 && basis_[i] < n_struct_)
                    (*solution)[basis_[i]] = rows_[i][n_cols_];
        }
        if (objective_value) *objective_value = -cost_row_[n_cols_];
        return LpStatus::Optimal;
    }

  private:
    [[nodiscard]] int row_count() const { return static_cast<int>(rows_.size()); }

    void build_cost_row(const std::vector<Money>& cost) {
        cost_row_.assign(n_cols_ + 1, Money(0));
        for (int j = 0; j < n_cols_used_; ++j) cost_row_[j] = cost[j];
        // reduce against the current basis
        for (int i = 0; i < row_count(); ++i) {
            int b = basis_[i];
            if (b < 0 || cost_row_[b].is_zero()) continue;
            Money f = cost_row_[b];
            for (int j = 0; j <= n_cols_; ++j) cost_row_[j] -= f * rows_[i][j];
        }
    }

    // Bland: entering = lowest-index column with negative reduced cost;
    // leaving = lexicographically smallest ratio, ties by lowest basis index.
    bool run() {
        for (;;) {
            int enter = -1;
            int limit = forbid_artificials_ ? n_art_begin_ : n_cols_used_;
            for (int j = 0; j < limit; ++j)
                if (cost_row_[j].is_negative()) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true; // optimal
            int leave = -1;
            Money best;
            for (int i = 0; i < row_count(); ++i) {
                if (!rows_[i][enter].is_positive()) continue;
                Money ratio = rows_[i][n_cols_] / rows_[i][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false; // unbounded
            pivot(leave, enter);
        }
    }

    void pivot(int row, int col) {
        Money p = rows_[row][col];
        for (auto& c : rows_[row]) c /= p;
        for (int i = 0; i < row_count(); ++i) {
            if (i == row || rows_[i][col].is_zero()) continue;
            Money f = rows_[i][col];
            for (int j = 0; j <= n_cols_; ++j) rows_[i][j] -= f * rows_[row][j];
        }
        if (!cost_row_.empty() && !cost_row_[col].is_zero()) {
            Money f = cost_row_[col];
            for (int j = 0; j <= n_cols_; ++j) cost_row_[j] -= f * rows_[row][j];
        }
        basis_[row] = col;
    }

    int n_struct_;
    int n_cols_ = 0;
    int n_cols_used_ = 0;
    int n_art_begin_ = 0;
    bool forbid_artificials_ = false;
    std::vector<std::vector<Money>> rows_;
    std::vector<Money> cost_row_;
    std::vector<int> basis_;
    std::vector<int> artificial_;
};

} // namespace detail

// Exact optimum of the LP. When Optimal, the assignment is certified: it is
// re-checked against every row (exact arithmetic, zero tolerance) before
// being returned.
inline LpSolution solve_lp(const LinearProgram& lp) {
    detail::SimplexTableau tab(lp);
    LpSolution sol;
    std::vector<Money> x;
    Money obj;
    sol.status = tab.solve(lp.objective(), &x, &obj);
    if (sol.status != LpStatus::Optimal) return sol;
    for (const Money& v : x)
        if (v.is_negative()) throw std::logic_error("simplex: negative variable");
    for (const LpRow& r : lp.rows()) {
        Money lhs = 0;
        for (const auto& [v, c] : r.terms) lhs += c * x[v];
        bool ok = (r.rel == Relation::LessEq && lhs <= r.rhs) ||
                  (r.rel == Relation::Equal && lhs == r.rhs) ||
                  (r.rel == Relation::GreaterEq && lhs >= r.rhs);
        if (!ok) throw std::logic_error("simplex: assignment violates row " + r.name);
    }
    Money check = 0;
    for (int v = 0; v < lp.variable_count(); ++v) check += lp.objective()[v] * x[v];
    if (check != obj) throw std::logic_error("simplex: objective mismatch");
    sol.assignment = std::move(x);
    sol.objective = std::move(obj);
    return sol;
}

} // namespace idm
