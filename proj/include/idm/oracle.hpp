// ============================================================================
// idm/oracle.hpp — exhaustive reference solvers for small instances
// ============================================================================
//
// Ground truth for everything else in the toolkit: depth-first search over
// time steps, enumerating at each time every payment matrix for the active
// debts (AoN: full amount or nothing; PP: every integer up to the remainder),
// with a branch pruned as soon as the completed step violates validity.
// Everything here works in exact integers (PP/AoN payments, amounts and
// assets are all integral); FP problems are out of scope by design — the
// rational search space is not enumerable and the withholding constraint is
// disjunctive, so FP questions are answered by the LP module instead.
//
// The optimizing searches (perfect / bank-min / bank-max / bailout-min) keep
// the enumeration sound while cutting equivalent branches:
//
//  * identical parallel debts (same endpoints, window, amount and current
//    remainder) receive payments in label order with non-increasing values;
//    permuting such payments never changes cash, validity or bankrupt sets;
//  * a reciprocal debt pair is never paid in both directions within one time
//    step before the pair's joint deadline min(t2, t2'): such a zero-net
//    "cycle fire" can be postponed to that deadline without touching any
//    cash value or any overdue status;
//  * states are deduplicated on (time, remainders, cash, bankrupt set) —
//    two prefixes reaching the same state have identical futures;
//  * perfect-mode branches additionally die when some node's remaining
//    obligations due by a future time exceed its cash plus everything its
//    unpaid in-debts could still deliver by then.
//
// oracle_schedules(), the raw enumerator, applies none of these reductions:
// it visits every valid schedule exactly once and is only meant for very
// small instances.

#pragma once

#include "idm/instance.hpp"
#include "idm/schedule.hpp"
#include "idm/validity.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_set>
#include <variant>

namespace idm {

class BudgetExhausted : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SearchBudget {
    long long max_states = 2'000'000;
    long long max_payment_granularity = 1'000'000;
    double timeout_seconds = 600.0;

    void check() const {
        if (max_states <= 0 || max_payment_granularity <= 0 || timeout_seconds <= 0)
            throw std::invalid_argument("SearchBudget: all fields must be positive");
    }
};

struct OracleAnswer {
    std::variant<long long, Money> value;
    std::optional<Schedule> witness;
    std::optional<BailoutVector> bailout;
    bool exhausted = true; // true iff the search space was fully explored

    [[nodiscard]] long long count() const { return std::get<long long>(value); }
    [[nodiscard]] bool truth() const { return std::get<long long>(value) != 0; }
    [[nodiscard]] const Money& money() const { return std::get<Money>(value); }
};

namespace detail {

struct NodeMask {
    std::array<std::uint64_t, 2> bits{0, 0};
    void set(int v) { bits[v >> 6] |= (std::uint64_t{1} << (v & 63)); }
    [[nodiscard]] bool test(int v) const { return (bits[v >> 6] >> (v & 63)) & 1u; }
    [[nodiscard]] int popcount() const {
        return __builtin_popcountll(bits[0]) + __builtin_popcountll(bits[1]);
    }
};

enum class SearchMode { Perfect, MinBank, MaxBank, Enumerate };

struct Hash128 {
    size_t operator()(unsigned __int128 x) const {
        return static_cast<size_t>(static_cast<std::uint64_t>(x) ^
                                   static_cast<std::uint64_t>(x >> 64));
    }
};

class ScheduleSearch {
  public:
    ScheduleSearch(const IdmInstance& inst, Variant variant, SearchMode mode,
                   const SearchBudget& budget, const BailoutVector* bailout = nullptr)
        : inst_(inst), variant_(variant), mode_(mode), budget_(budget) {
        budget_.check();
        if (variant == Variant::FP)
            throw std::invalid_argument("oracle: FP search is not enumerable");
        n_ = inst.node_count();
        m_ = inst.debt_count();
        T_ = inst.lifetime();
        if (n_ > 128) throw std::invalid_argument("oracle: more than 128 nodes");
        amount_.resize(m_);
        t1_.resize(m_);
        t2_.resize(m_);
        debtor_.resize(m_);
        creditor_.resize(m_);
        for (int e = 0; e < m_; ++e) {
            const Debt& d = inst.debt(e);
            amount_[e] = d.terms.amount.to_int64();
            t1_[e] = d.terms.t1;
            t2_[e] = d.terms.t2;
            debtor_[e] = d.debtor;
            creditor_[e] = d.creditor;
        }
        cash_.resize(n_);
        for (int v = 0; v < n_; ++v) {
            Money c = inst.initial_asset(v);
            if (bailout) {
                if (!bailout->at(v).is_integral())
                    throw std::invalid_argument("oracle: bailout must be integral");
                c += bailout->at(v);
            }
            cash_[v] = c.to_int64();
        }
        rem_ = amount_;
        pay_.assign(m_, 0);
        out_c_.assign(n_, 0);
        in_c_.assign(n_, 0);
        in_pending_.assign(n_, 0);
        reverse_.resize(m_);
        same_shape_prev_.assign(m_, -1);
        for (int e = 0; e < m_; ++e) {
            for (int f = 0; f < m_; ++f)
                if (debtor_[e] == creditor_[f] && creditor_[e] == debtor_[f])
                    reverse_[e].push_back(f);
            for (int f = e - 1; f >= 0; --f)
                if (debtor_[e] == debtor_[f] && creditor_[e] == creditor_[f] &&
                    t1_[e] == t1_[f] && t2_[e] == t2_[f] && amount_[e] == amount_[f]) {
                    same_shape_prev_[e] = f;
                    break;
                }
        }
        out_by_due_.resize(n_);
        in_by_start_.resize(n_);
        for (int e = 0; e < m_; ++e) {
            out_by_due_[debtor_[e]].push_back(e);
            in_by_start_[creditor_[e]].push_back(e);
        }
        for (int v = 0; v < n_; ++v) {
            std::sort(out_by_due_[v].begin(), out_by_due_[v].end(),
                      [&](int a, int b) { return t2_[a] < t2_[b]; });
            std::sort(in_by_start_[v].begin(), in_by_start_[v].end(),
                      [&](int a, int b) { return t1_[a] < t1_[b]; });
        }
        start_ = std::chrono::steady_clock::now();
    }

    std::optional<Schedule> find_perfect() {
        run();
        return best_witness_;
    }

    std::pair<long long, std::optional<Schedule>> optimize() {
        best_count_ = mode_ == SearchMode::MinBank ? n_ + 1 : -1;
        run();
        return {best_count_, best_witness_};
    }

    void enumerate(const std::function<void(const Schedule&)>& visitor) {
        visitor_ = &visitor;
        run();
    }

    [[nodiscard]] bool exhausted() const { return !stopped_early_; }
    [[nodiscard]] bool truncated() const { return truncated_; }
    [[nodiscard]] long long states_visited() const { return states_; }

  private:
    enum class Stop { None, Done, Budget };

    void run() {
        trail_.clear();
        Stop s = T_ == 0 ? leaf() : step(1);
        (void)s;
    }

    [[nodiscard]] bool canonical_rules() const { return mode_ != SearchMode::Enumerate; }

    bool budget_ok() {
        if (++states_ > budget_.max_states) {
            stopped_early_ = true;
            return false;
        }
        if ((states_ & 0xfff) == 0) {
            auto now = std::chrono::steady_clock::now();
            if (std::chrono::duration<double>(now - start_).count() > budget_.timeout_seconds) {
                stopped_early_ = true;
                return false;
            }
        }
        return true;
    }

    // Perfect-mode necessary condition: for every node and every future due
    // time tau, obligations due by tau must not exceed cash plus in-debt
    // remainders whose windows open by tau.
    bool prefix_feasible() const {
        for (int v = 0; v < n_; ++v) {
            long long due = 0;
            long long avail = cash_[v];
            size_t ip = 0;
            for (int e : out_by_due_[v]) {
                if (rem_[e] == 0) continue;
                due += rem_[e];
                int tau = t2_[e];
                while (ip < in_by_start_[v].size()) {
                    int f = in_by_start_[v][ip];
                    if (t1_[f] > tau) break;
                    avail += rem_[f];
                    ++ip;
                }
                if (due > avail) return false;
            }
        }
        return true;
    }

    Stop step(int t) {
        if (!budget_ok()) return Stop::Budget;
        if (mode_ == SearchMode::Perfect && !prefix_feasible()) return Stop::None;
        std::vector<int> active;
        for (int e = 0; e < m_; ++e)
            if (rem_[e] > 0 && t1_[e] <= t) active.push_back(e);
        std::fill(out_c_.begin(), out_c_.end(), 0);
        std::fill(in_c_.begin(), in_c_.end(), 0);
        std::fill(in_pending_.begin(), in_pending_.end(), 0);
        for (int e : active) {
            in_pending_[creditor_[e]] += rem_[e];
            pay_[e] = 0;
        }
        return assign(t, active, 0);
    }

    Stop assign(int t, const std::vector<int>& active, size_t idx) {
        if (idx == active.size()) return complete(t, active);
        const int e = active[idx];
        const int u = debtor_[e], w = creditor_[e];
        const long long saved_rem = rem_[e];
        in_pending_[w] -= saved_rem;

        long long cap = std::min(saved_rem, budget_.max_payment_granularity);
        if (cap < saved_rem) truncated_ = true;
        const bool forced_full = mode_ == SearchMode::Perfect && t == t2_[e];

        bool positive_ok = true;
        if (canonical_rules()) {
            for (int f : reverse_[e])
                if (pay_[f] > 0 && t < std::min(t2_[e], t2_[f])) {
                    positive_ok = false;
                    break;
                }
            int f = same_shape_prev_[e];
            if (f >= 0 && rem_[f] + pay_[f] == saved_rem) cap = std::min(cap, pay_[f]);
        }
        // largest amount the debtor could ever justify this step
        const long long max_x = cash_[u] + in_c_[u] + in_pending_[u] - out_c_[u];

        auto try_value = [&](long long x) -> Stop {
            pay_[e] = x;
            rem_[e] = saved_rem - x;
            out_c_[u] += x;
            in_c_[w] += x;
            if (x > 0) trail_.push_back({e, t, x});
            Stop s = assign(t, active, idx + 1);
            if (x > 0) trail_.pop_back();
            pay_[e] = 0;
            rem_[e] = saved_rem;
            out_c_[u] -= x;
            in_c_[w] -= x;
            return s;
        };

        Stop result = Stop::None;
        if (variant_ == Variant::AoN) {
            if (!forced_full) result = try_value(0);
            if (result == Stop::None && saved_rem == amount_[e] && amount_[e] <= cap &&
                amount_[e] <= max_x && positive_ok)
                result = try_value(amount_[e]);
        } else { // PP
            const long long lo = forced_full ? saved_rem : 0;
            long long hi = forced_full ? saved_rem : cap;
            if (!positive_ok) hi = std::min(hi, 0LL);
            hi = std::min(hi, max_x);
            for (long long x = lo; x <= hi; ++x) {
                result = try_value(x);
                if (result != Stop::None) break;
            }
        }
        in_pending_[w] += saved_rem;
        return result;
    }

    Stop complete(int t, const std::vector<int>& active) {
        // simultaneous netting, then post-step checks
        std::vector<long long> delta(n_);
        for (int v = 0; v < n_; ++v) {
            delta[v] = in_c_[v] - out_c_[v];
            cash_[v] += delta[v];
        }
        auto restore = [&] {
            for (int v = 0; v < n_; ++v) cash_[v] -= delta[v];
        };

        for (int v = 0; v < n_; ++v)
            if (cash_[v] < 0) {
                restore();
                return Stop::None;
            }

        NodeMask newly;
        bool any_overdue = false;
        for (int e = 0; e < m_; ++e)
            if (rem_[e] > 0 && t2_[e] <= t) {
                any_overdue = true;
                newly.set(debtor_[e]);
            }
        if (any_overdue) {
            if (mode_ == SearchMode::Perfect) {
                restore();
                return Stop::None;
            }
            for (int v = 0; v < n_; ++v) {
                if (!newly.test(v)) continue;
                bool withholding = false;
                if (variant_ == Variant::AoN) {
                    for (int e : out_by_due_[v])
                        if (rem_[e] > 0 && t2_[e] <= t && cash_[v] >= amount_[e]) {
                            withholding = true;
                            break;
                        }
                } else {
                    withholding = cash_[v] > 0;
                }
                if (withholding) {
                    restore();
                    return Stop::None;
                }
            }
        }

        const NodeMask saved_mask = mask_;
        mask_.bits[0] |= newly.bits[0];
        mask_.bits[1] |= newly.bits[1];

        Stop result = Stop::None;
        if (bounds_dead() || (canonical_rules() && seen_state(t))) {
            result = Stop::None;
        } else if (t == T_) {
            result = leaf();
        } else {
            // the deeper step reuses the shared per-step scratch arrays;
            // save this level's view and restore it for the unwind
            std::vector<long long> s_out = out_c_, s_in = in_c_, s_pend = in_pending_;
            std::vector<long long> s_pay;
            s_pay.reserve(active.size());
            for (int e : active) s_pay.push_back(pay_[e]);
            result = step(t + 1);
            out_c_ = std::move(s_out);
            in_c_ = std::move(s_in);
            in_pending_ = std::move(s_pend);
            for (size_t i = 0; i < active.size(); ++i) pay_[active[i]] = s_pay[i];
        }
        mask_ = saved_mask;
        restore();
        return result;
    }

    bool bounds_dead() const {
        if (mode_ == SearchMode::MinBank) return mask_.popcount() >= best_count_;
        if (mode_ == SearchMode::MaxBank) {
            int possible = mask_.popcount();
            for (int v = 0; v < n_; ++v) {
                if (mask_.test(v)) continue;
                for (int e : out_by_due_[v])
                    if (rem_[e] > 0) {
                        ++possible;
                        break;
                    }
            }
            return possible <= best_count_;
        }
        return false;
    }

    bool seen_state(int t) {
        auto mix = [](std::uint64_t& h, std::uint64_t x) {
            h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        };
        std::uint64_t h1 = 0xcbf29ce484222325ULL, h2 = 0x84222325cbf29ce4ULL;
        mix(h1, static_cast<std::uint64_t>(t));
        mix(h2, static_cast<std::uint64_t>(t) * 0x100000001b3ULL);
        for (int e = 0; e < m_; ++e) {
            mix(h1, static_cast<std::uint64_t>(rem_[e]));
            mix(h2, static_cast<std::uint64_t>(rem_[e]) * 0x100000001b3ULL + 1);
        }
        for (int v = 0; v < n_; ++v) {
            mix(h1, static_cast<std::uint64_t>(cash_[v]));
            mix(h2, static_cast<std::uint64_t>(cash_[v]) * 0xa24baed4963ee407ULL + 2);
        }
        if (mode_ != SearchMode::Perfect) {
            mix(h1, mask_.bits[0]);
            mix(h1, mask_.bits[1]);
            mix(h2, ~mask_.bits[0]);
            mix(h2, ~mask_.bits[1]);
        }
        unsigned __int128 key = (static_cast<unsigned __int128>(h1) << 64) | h2;
        return !seen_.insert(key).second;
    }

    Stop leaf() {
        switch (mode_) {
            case SearchMode::Perfect:
                best_witness_ = make_schedule();
                return Stop::Done;
            case SearchMode::MinBank:
                if (mask_.popcount() < best_count_) {
                    best_count_ = mask_.popcount();
                    best_witness_ = make_schedule();
                }
                return Stop::None;
            case SearchMode::MaxBank:
                if (mask_.popcount() > best_count_) {
                    best_count_ = mask_.popcount();
                    best_witness_ = make_schedule();
                }
                return Stop::None;
            case SearchMode::Enumerate: {
                Schedule s = make_schedule();
                (*visitor_)(s);
                return Stop::None;
            }
        }
        return Stop::None;
    }

    Schedule make_schedule() const {
        Schedule s(inst_);
        for (const auto& p : trail_) s.add(p.debt, p.time, Money(p.amount));
        return s;
    }

    struct Payment {
        int debt;
        int time;
        long long amount;
    };

    const IdmInstance& inst_;
    Variant variant_;
    SearchMode mode_;
    SearchBudget budget_;
    int n_ = 0, m_ = 0, T_ = 0;
    std::vector<long long> amount_, rem_, cash_, pay_;
    std::vector<int> t1_, t2_, debtor_, creditor_;
    std::vector<long long> out_c_, in_c_, in_pending_;
    std::vector<std::vector<int>> reverse_;
    std::vector<int> same_shape_prev_;
    std::vector<std::vector<int>> out_by_due_, in_by_start_;
    std::vector<Payment> trail_;
    NodeMask mask_;
    std::unordered_set<unsigned __int128, Hash128> seen_;
    const std::function<void(const Schedule&)>* visitor_ = nullptr;
    std::optional<Schedule> best_witness_;
    long long best_count_ = -1;
    long long states_ = 0;
    bool stopped_early_ = false;
    bool truncated_ = false;
    std::chrono::steady_clock::time_point start_;
};

} // namespace detail

// Visits every valid schedule (integral payments) exactly once, depth-first
// over times. No symmetry reduction of any kind. Small instances only.
inline void oracle_schedules(const IdmInstance& inst, Variant variant,
                             const std::function<void(const Schedule&)>& visitor,
                             const SearchBudget& budget = {}) {
    detail::ScheduleSearch s(inst, variant, detail::SearchMode::Enumerate, budget);
    s.enumerate(visitor);
    if (!s.exhausted() || s.truncated())
        throw BudgetExhausted("oracle_schedules: search budget exhausted");
}

inline OracleAnswer oracle_perfect_scheduling(const IdmInstance& inst, Variant variant,
                                              const SearchBudget& budget = {},
                                              const BailoutVector* bailout = nullptr) {
    detail::ScheduleSearch s(inst, variant, detail::SearchMode::Perfect, budget, bailout);
    OracleAnswer a;
    a.witness = s.find_perfect();
    a.value = static_cast<long long>(a.witness.has_value() ? 1 : 0);
    a.exhausted = a.witness.has_value() || (s.exhausted() && !s.truncated());
    return a;
}

inline OracleAnswer oracle_bankruptcy_min(const IdmInstance& inst, Variant variant,
                                          const SearchBudget& budget = {}) {
    detail::ScheduleSearch s(inst, variant, detail::SearchMode::MinBank, budget);
    auto [count, witness] = s.optimize();
    OracleAnswer a;
    a.value = count;
    a.witness = std::move(witness);
    a.exhausted = s.exhausted() && !s.truncated();
    return a;
}

inline OracleAnswer oracle_bankruptcy_max(const IdmInstance& inst, Variant variant,
                                          const SearchBudget& budget = {}) {
    detail::ScheduleSearch s(inst, variant, detail::SearchMode::MaxBank, budget);
    auto [count, witness] = s.optimize();
    OracleAnswer a;
    a.value = count;
    a.witness = std::move(witness);
    a.exhausted = s.exhausted() && !s.truncated();
    return a;
}

// Minimum total integral bailout admitting a perfect schedule. Budgets are
// tried in increasing order; within a budget every composition over the
// nodes that owe anything is tried (bailing out a node with no out-debts
// cannot help). Each node's worst prefix shortfall is a per-node lower bound
// in every feasible bailout, so it both floors the loop and anchors the
// composition enumeration; the upper bound repairs the pay-at-deadline
// trajectory, which always yields a perfect schedule in PP and AoN alike.
inline OracleAnswer oracle_bailout_min(const IdmInstance& inst, Variant variant,
                                       const SearchBudget& budget = {}) {
    if (variant == Variant::FP)
        throw std::invalid_argument("oracle_bailout_min: FP is handled by the LP solver");
    const int n = inst.node_count();

    std::vector<long long> floor_v(n, 0);
    long long floor_total = 0;
    for (int v = 0; v < n; ++v) {
        floor_v[v] = prefix_deficit(inst, v).max_deficit.to_int64();
        floor_total += floor_v[v];
    }
    long long ub = 0;
    {
        Schedule due(inst);
        for (int e = 0; e < inst.debt_count(); ++e)
            due.add(e, inst.debt(e).terms.t2, inst.debt(e).terms.amount);
        CashTrajectory tr = derive_cash(inst, due);
        for (int v = 0; v < n; ++v) {
            Money worst = 0;
            for (int t = 0; t <= inst.lifetime(); ++t)
                if (tr.cash[t][v] < worst) worst = tr.cash[t][v];
            ub += (-worst).to_int64();
        }
    }

    std::vector<int> candidates;
    for (int v = 0; v < n; ++v)
        if (!inst.out_debts(v).empty()) candidates.push_back(v);

    OracleAnswer answer;
    bool complete_so_far = true;
    for (long long total = floor_total; total <= ub; ++total) {
        std::vector<long long> add(candidates.size(), 0);
        std::function<std::optional<std::pair<BailoutVector, Schedule>>(size_t, long long)> rec =
            [&](size_t i, long long left) -> std::optional<std::pair<BailoutVector, Schedule>> {
            if (i == candidates.size()) {
                if (left != 0) return std::nullopt;
                BailoutVector b(n);
                for (int v = 0; v < n; ++v) b.set(v, Money(floor_v[v]));
                for (size_t j = 0; j < candidates.size(); ++j)
                    b.add(candidates[j], Money(add[j]));
                detail::ScheduleSearch s(inst, variant, detail::SearchMode::Perfect, budget, &b);
                auto w = s.find_perfect();
                if (!w && (!s.exhausted() || s.truncated())) complete_so_far = false;
                if (w) return std::make_pair(std::move(b), std::move(*w));
                return std::nullopt;
            }
            for (long long x = 0; x <= left; ++x) {
                add[i] = x;
                auto r = rec(i + 1, left - x);
                add[i] = 0;
                if (r) return r;
            }
            return std::nullopt;
        };
        auto found = rec(0, total - floor_total);
        if (found) {
            answer.value = Money(total);
            answer.bailout = std::move(found->first);
            answer.witness = std::move(found->second);
            answer.exhausted = complete_so_far;
            return answer;
        }
        if (!complete_so_far) break;
    }
    if (complete_so_far)
        throw std::logic_error("oracle_bailout_min: upper bound was not feasible");
    answer.value = Money(-1);
    answer.exhausted = false;
    return answer;
}

} // namespace idm
