#include "idm/lp.hpp"
#include "idm/lp_bailout.hpp"
#include "idm/oracle.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <sstream>

using namespace idm;
using namespace idm::testing;

TEST_CASE("simplex: minimize x subject to x >= 3") {
    LinearProgram lp;
    int x = lp.add_variable("x");
    lp.set_objective(x, 1);
    lp.add_row({{{x, 1}}, Relation::GreaterEq, 3, "lb"});
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.assignment[x] == Money(3));
    CHECK(sol.objective == Money(3));
}

TEST_CASE("simplex: infeasible bounds") {
    LinearProgram lp;
    int x = lp.add_variable("x");
    lp.add_row({{{x, 1}}, Relation::LessEq, -1, "ub"}); // x >= 0 implicitly
    CHECK(solve_lp(lp).status == LpStatus::Infeasible);
}

TEST_CASE("simplex: unbounded objective") {
    LinearProgram lp;
    int x = lp.add_variable("x");
    lp.set_objective(x, -1); // minimize -x with x free upward
    lp.add_row({{{x, 1}}, Relation::GreaterEq, 0, "lb"});
    CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("simplex: equality system with fractional optimum") {
    // min x + y  s.t.  2x + y == 3, x + 3y >= 4
    LinearProgram lp;
    int x = lp.add_variable("x");
    int y = lp.add_variable("y");
    lp.set_objective(x, 1);
    lp.set_objective(y, 1);
    lp.add_row({{{x, 2}, {y, 1}}, Relation::Equal, 3, "eq"});
    lp.add_row({{{x, 1}, {y, 3}}, Relation::GreaterEq, 4, "ge"});
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == Money(2)); // x = 1, y = 1
}

TEST_CASE("full bailout LP: variable accounting and dump") {
    IdmInstance inst = fig2();
    LinearProgram lp = build_bailout_lp(inst);
    const int V = inst.node_count(), E = inst.debt_count(), T = inst.lifetime();
    CHECK(lp.variable_count() == V + E * T + 3 * V * T + V);
    std::ostringstream os;
    lp.dump(os);
    CHECK(os.str().find("B[u]") != std::string::npos);
    CHECK(os.str().find("minimize") != std::string::npos);
}

TEST_CASE("full bailout LP agrees with the reduced solver on the worked examples") {
    SECTION("fig2 is feasible at budget zero") {
        LpSolution sol = solve_lp(build_bailout_lp(fig2(), Money(0)));
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.objective == Money(0));
    }
    SECTION("fig1 is infeasible at budget zero and optimal at 5") {
        CHECK(solve_lp(build_bailout_lp(fig1(), Money(0))).status == LpStatus::Infeasible);
        LpSolution sol = solve_lp(build_bailout_lp(fig1()));
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.objective == Money(5));
    }
    SECTION("debt-free instance optimizes to zero") {
        IdmInstance inst = IdmInstance::build({"solo"}, {}, {Money(0)});
        LpSolution sol = solve_lp(build_bailout_lp(inst));
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.objective == Money(0));
    }
}

TEST_CASE("fp_bailout_min on the worked examples") {
    SECTION("fig1 needs exactly 5") {
        FpBailoutResult r = fp_bailout_min(fig1());
        CHECK(r.min_total == Money(5));
        auto rep = validate(fig1(), r.schedule, Variant::FP, &r.bailout);
        CHECK(rep.valid);
        CHECK(rep.perfect);
    }
    SECTION("fig2 needs nothing") {
        FpBailoutResult r = fp_bailout_min(fig2());
        CHECK(r.min_total == Money(0));
    }
    SECTION("isolated node needs nothing") {
        IdmInstance inst = IdmInstance::build({"solo"}, {}, {Money(0)});
        CHECK(fp_bailout_min(inst).min_total == Money(0));
    }
}

TEST_CASE("fp_perfect_scheduling presence on the worked examples") {
    CHECK(fp_perfect_scheduling(fig3('c')).has_value());
    CHECK(fp_perfect_scheduling(fig2()).has_value());
    CHECK_FALSE(fp_perfect_scheduling(fig1()).has_value());
}

TEST_CASE("budget binary-search consistency around the optimum") {
    std::mt19937_64 rng(43);
    for (int round = 0; round < 25; ++round) {
        IdmInstance inst = random_instance(rng, RandomSpec{});
        FpBailoutResult r = fp_bailout_min(inst);
        CHECK(fp_bailout_decision(inst, r.min_total));
        if (r.min_total.is_positive())
            CHECK_FALSE(fp_bailout_decision(inst, r.min_total - Money::ratio(1, 1000)));
    }
}

TEST_CASE("zero optimum iff a perfect schedule exists") {
    std::mt19937_64 rng(47);
    for (int round = 0; round < 30; ++round) {
        IdmInstance inst = random_instance(rng, RandomSpec{});
        bool zero = fp_bailout_min(inst).min_total.is_zero();
        CHECK(zero == fp_perfect_scheduling(inst).has_value());
    }
}

TEST_CASE("adding assets never increases the optimum") {
    std::mt19937_64 rng(53);
    for (int round = 0; round < 20; ++round) {
        IdmInstance inst = random_instance(rng, RandomSpec{});
        Money base = fp_bailout_min(inst).min_total;
        std::uniform_int_distribution<int> node_d(0, inst.node_count() - 1);
        std::vector<Money> assets = inst.initial_assets();
        assets[node_d(rng)] += Money(1 + round % 3);
        std::vector<DebtSpec> specs;
        for (const Debt& d : inst.debts())
            specs.push_back(DebtSpec{inst.node_id(d.debtor), inst.node_id(d.creditor), d.label,
                                     d.terms.amount, d.terms.t1, d.terms.t2});
        IdmInstance richer = IdmInstance::build(inst.nodes(), specs, assets);
        CHECK(fp_bailout_min(richer).min_total <= base);
    }
}

TEST_CASE("compaction invariance of the optimum") {
    std::mt19937_64 rng(59);
    for (int round = 0; round < 20; ++round) {
        IdmInstance inst = random_instance(rng, RandomSpec{});
        IdmInstance dilated = dilate_timestamps(rng, inst);
        CHECK(fp_bailout_min(inst).min_total == fp_bailout_min(dilated).min_total);
    }
}

TEST_CASE("a perfect PP certificate implies FP feasibility") {
    std::mt19937_64 rng(61);
    for (int round = 0; round < 40; ++round) {
        IdmInstance inst = random_instance(rng, RandomSpec{});
        OracleAnswer pp = oracle_perfect_scheduling(inst, Variant::PP);
        if (pp.exhausted && pp.truth()) {
            bool fp = fp_perfect_scheduling(inst).has_value();
            if (!fp)
                dump_disagreement("pp-implies-fp", inst, "pp oracle: perfect exists",
                                  "lp: infeasible");
            CHECK(fp);
        }
    }
}
