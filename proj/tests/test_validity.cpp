#include "idm/validity.hpp"
#include "idm/oracle.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace idm;
using namespace idm::testing;

namespace {

Schedule sched_of(const IdmInstance& inst,
                  std::initializer_list<std::tuple<const char*, const char*, int, int, Money>> payments) {
    Schedule s(inst);
    for (const auto& [u, v, label, t, amount] : payments)
        s.add(inst.find_debt(u, v, label), t, amount);
    return s;
}

} // namespace

TEST_CASE("fig2: instant forwarding keeps v at zero cash") {
    IdmInstance inst = fig2();
    Schedule s = sched_of(inst, {{"u", "v", 0, 1, 1}, {"v", "w", 0, 1, 1}});
    CashTrajectory tr = derive_cash(inst, s);
    const int v = inst.node_index("v");
    for (int t = 0; t <= inst.lifetime(); ++t) CHECK(tr.at(v, t) == Money(0));
}

TEST_CASE("fig3(c): the zero-asset payment cycle nets to zero everywhere") {
    IdmInstance inst = fig3('c');
    Schedule s(inst);
    for (int e = 0; e < inst.debt_count(); ++e) s.add(e, 1, 1);
    CashTrajectory tr = derive_cash(inst, s);
    for (int v = 0; v < inst.node_count(); ++v)
        for (int t = 0; t <= 2; ++t) CHECK(tr.at(v, t) == Money(0));
}

TEST_CASE("empty schedule leaves assets in place") {
    IdmInstance inst = fig1();
    CashTrajectory tr = derive_cash(inst, Schedule(inst));
    for (int t = 0; t <= 6; ++t) {
        CHECK(tr.at(inst.node_index("u"), t) == Money(30));
        CHECK(tr.at(inst.node_index("v"), t) == Money(20));
        CHECK(tr.at(inst.node_index("w"), t) == Money(10));
    }
}

TEST_CASE("debt status boundaries") {
    IdmInstance inst = fig2();
    const int vw = inst.find_debt("v", "w", 0);
    CHECK(debt_status(inst, Schedule(inst), vw, 1) == DebtStatus::Overdue);

    IdmInstance window =
        InstanceBuilder().node("a", 5).node("b", 0).debt("a", "b", 5, 2, 4).build();
    Schedule paid(window);
    paid.add(0, 3, 5);
    CHECK(debt_status(window, paid, 0, 4) == DebtStatus::Settled);
    CHECK(debt_status(window, Schedule(window), 0, 1) == DebtStatus::Inactive);
    CHECK(debt_status(window, Schedule(window), 0, 2) == DebtStatus::Payable);
    CHECK(debt_status(window, Schedule(window), 0, 4) == DebtStatus::Overdue);
    // discharged exactly at the deadline
    Schedule at_deadline(window);
    at_deadline.add(0, 4, 5);
    CHECK(debt_status(window, at_deadline, 0, 4) == DebtStatus::Due);
}

TEST_CASE("settled is terminal as time advances") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 30; ++round) {
        IdmInstance inst = random_instance(rng, RandomSpec{4, 4, 3, 3, 3});
        if (inst.debt_count() == 0) continue;
        std::vector<Schedule> samples;
        try {
            oracle_schedules(inst, Variant::PP,
                             [&](const Schedule& s) {
                                 if (samples.size() < 3) samples.push_back(s);
                             },
                             SearchBudget{100000, 1000000, 30.0});
        } catch (const BudgetExhausted&) {
            continue;
        }
        for (const Schedule& s : samples)
            for (int e = 0; e < inst.debt_count(); ++e) {
                bool settled_seen = false;
                for (int t = 0; t <= inst.lifetime(); ++t) {
                    DebtStatus st = debt_status(inst, s, e, t);
                    if (settled_seen) CHECK(st == DebtStatus::Settled);
                    if (st == DebtStatus::Settled) settled_seen = true;
                }
            }
    }
}

TEST_CASE("fig2 golden verdicts") {
    IdmInstance inst = fig2();

    SECTION("both debts paid at time 1: valid and perfect") {
        auto rep = validate(inst, sched_of(inst, {{"u", "v", 0, 1, 1}, {"v", "w", 0, 1, 1}}),
                            Variant::PP);
        CHECK(rep.valid);
        CHECK(rep.perfect);
        CHECK(rep.bankrupt.empty());
    }
    SECTION("both debts paid at time 2: valid, v bankrupt at 1") {
        auto rep = validate(inst, sched_of(inst, {{"u", "v", 0, 2, 1}, {"v", "w", 0, 2, 1}}),
                            Variant::PP);
        CHECK(rep.valid);
        CHECK_FALSE(rep.perfect);
        REQUIRE(rep.bankrupt.size() == 1);
        CHECK(rep.bankrupt.begin()->first == inst.node_index("v"));
        CHECK(rep.bankrupt.begin()->second == 1);
        CHECK(count_bankruptcies(rep) == 1);
    }
    SECTION("v sits on the received unit: withholding") {
        auto rep = validate(inst, sched_of(inst, {{"u", "v", 0, 1, 1}}), Variant::PP);
        CHECK_FALSE(rep.valid);
        REQUIRE_FALSE(rep.violations.empty());
        bool withholding_v_at_1 = false;
        for (const Violation& v : rep.violations)
            if (v.kind == ViolationKind::Withholding && v.node == inst.node_index("v") &&
                v.time == 1)
                withholding_v_at_1 = true;
        CHECK(withholding_v_at_1);
    }
    SECTION("fractional split: valid under FP, v bankrupt") {
        for (Money a : {Money::ratio(1, 3), Money::ratio(1, 2)}) {
            Schedule s = sched_of(inst, {{"u", "v", 0, 1, a},
                                         {"v", "w", 0, 1, a},
                                         {"u", "v", 0, 2, Money(1) - a},
                                         {"v", "w", 0, 2, Money(1) - a}});
            auto rep = validate(inst, s, Variant::FP);
            CHECK(rep.valid);
            CHECK_FALSE(rep.perfect);
            REQUIRE(rep.bankrupt.size() == 1);
            CHECK(rep.bankrupt.begin()->first == inst.node_index("v"));
            // the same schedule is malformed under PP
            auto pp = validate(inst, s, Variant::PP);
            CHECK_FALSE(pp.valid);
            bool shape = false;
            for (const Violation& v : pp.violations)
                if (v.kind == ViolationKind::WrongShape) shape = true;
            CHECK(shape);
        }
    }
}

TEST_CASE("fig3(c) golden verdicts") {
    IdmInstance inst = fig3('c');
    SECTION("all-zero schedule: valid, all four bankrupt") {
        auto rep = validate(inst, Schedule(inst), Variant::PP);
        CHECK(rep.valid);
        CHECK(count_bankruptcies(rep) == 4);
    }
    SECTION("full simultaneous cycle at time 1: valid and perfect") {
        Schedule s(inst);
        for (int e = 0; e < inst.debt_count(); ++e) s.add(e, 1, 1);
        for (Variant variant : {Variant::AoN, Variant::PP, Variant::FP}) {
            auto rep = validate(inst, s, variant);
            CHECK(rep.valid);
            CHECK(rep.perfect);
        }
    }
}

TEST_CASE("aon shape and withholding rules") {
    IdmInstance inst =
        InstanceBuilder().node("a", 3).node("b", 0).node("c", 0).debt("a", "b", 2, 1).debt(
            "a", "c", 3, 1).build();
    SECTION("partial payment is the wrong shape") {
        Schedule s(inst);
        s.add(0, 1, 1);
        auto rep = validate(inst, s, Variant::AoN);
        bool shape = false;
        for (const Violation& v : rep.violations)
            if (v.kind == ViolationKind::WrongShape) shape = true;
        CHECK(shape);
    }
    SECTION("a holds 3 >= both overdue amounts: withholding") {
        auto rep = validate(inst, Schedule(inst), Variant::AoN);
        CHECK_FALSE(rep.valid);
        bool withholding = false;
        for (const Violation& v : rep.violations)
            if (v.kind == ViolationKind::Withholding && v.node == 0) withholding = true;
        CHECK(withholding);
    }
    SECTION("after paying the 2-debt, 1 in cash < any overdue amount: no withholding") {
        Schedule s(inst);
        s.add(0, 1, 2);
        auto rep = validate(inst, s, Variant::AoN);
        CHECK(rep.valid); // cash 1 cannot cover the overdue 3
        CHECK(count_bankruptcies(rep) == 1);
    }
}

TEST_CASE("overpay, early payment and negative cash are reported") {
    IdmInstance inst = fig2();
    SECTION("overpaid") {
        Schedule s(inst);
        s.add(inst.find_debt("u", "v", 0), 1, 1);
        s.add(inst.find_debt("u", "v", 0), 2, 1); // second unit overpays
        // u only has 1, so this also goes cash-negative
        auto rep = validate(inst, s, Variant::PP);
        bool overpaid = false, negcash = false;
        for (const Violation& v : rep.violations) {
            if (v.kind == ViolationKind::Overpaid && v.time == 2) overpaid = true;
            if (v.kind == ViolationKind::NegativeCash && v.node == inst.node_index("u"))
                negcash = true;
        }
        CHECK(overpaid);
        CHECK(negcash);
    }
    SECTION("paid early") {
        IdmInstance late =
            InstanceBuilder().node("a", 5).node("b", 0).debt("a", "b", 5, 3, 4).build();
        Schedule s(late);
        s.add(0, 1, 5);
        auto rep = validate(late, s, Variant::PP);
        bool early = false;
        for (const Violation& v : rep.violations)
            if (v.kind == ViolationKind::PaidEarly && v.time == 1) early = true;
        CHECK(early);
    }
}

TEST_CASE("validate is pure and trivial on empty instances") {
    IdmInstance inst = IdmInstance::build({"solo"}, {}, {Money(7)});
    auto rep = validate(inst, Schedule(inst), Variant::PP);
    CHECK(rep.valid);
    CHECK(rep.perfect);
}

TEST_CASE("money conservation across every enumerated schedule") {
    std::mt19937_64 rng(31);
    int schedules_checked = 0;
    for (int round = 0; round < 20 && schedules_checked < 60; ++round) {
        IdmInstance inst = random_instance(rng, RandomSpec{4, 4, 2, 3, 2});
        Money start = 0;
        for (int v = 0; v < inst.node_count(); ++v) start += inst.initial_asset(v);
        try {
            oracle_schedules(inst, Variant::PP,
                             [&](const Schedule& s) {
                                 if (schedules_checked >= 60) return;
                                 CashTrajectory tr = derive_cash(inst, s);
                                 for (int t = 0; t <= inst.lifetime(); ++t) {
                                     Money sum = 0;
                                     for (int v = 0; v < inst.node_count(); ++v)
                                         sum += tr.at(v, t);
                                     CHECK(sum == start);
                                 }
                                 ++schedules_checked;
                             },
                             SearchBudget{100000, 1000000, 30.0});
        } catch (const BudgetExhausted&) {
        }
    }
    CHECK(schedules_checked > 0);
}

TEST_CASE("every valid PP schedule is a valid FP schedule") {
    std::mt19937_64 rng(37);
    int checked = 0;
    for (int round = 0; round < 15 && checked < 40; ++round) {
        IdmInstance inst = random_instance(rng, RandomSpec{4, 4, 2, 3, 2});
        try {
            oracle_schedules(inst, Variant::PP,
                             [&](const Schedule& s) {
                                 if (checked >= 40) return;
                                 CHECK(validate(inst, s, Variant::FP).valid);
                                 ++checked;
                             },
                             SearchBudget{100000, 1000000, 30.0});
        } catch (const BudgetExhausted&) {
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("unit amounts make AoN and PP validity coincide") {
    std::mt19937_64 rng(41);
    int checked = 0;
    for (int round = 0; round < 15 && checked < 40; ++round) {
        IdmInstance inst = random_instance(rng, RandomSpec{4, 5, 1, 3, 2}); // unit amounts
        try {
            oracle_schedules(inst, Variant::PP,
                             [&](const Schedule& s) {
                                 if (checked >= 40) return;
                                 CHECK(validate(inst, s, Variant::AoN).valid);
                                 ++checked;
                             },
                             SearchBudget{100000, 1000000, 30.0});
        } catch (const BudgetExhausted&) {
        }
    }
    CHECK(checked > 0);
}
