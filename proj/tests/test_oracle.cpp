#include "idm/oracle.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace idm;
using namespace idm::testing;

TEST_CASE("fig2 enumeration covers the published schedules exactly once") {
    IdmInstance inst = fig2();
    std::vector<Schedule> all;
    oracle_schedules(inst, Variant::PP, [&](const Schedule& s) { all.push_back(s); });
    // no duplicates
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i + 1; j < all.size(); ++j) CHECK_FALSE(all[i] == all[j]);
    Schedule t1(inst), t2(inst);
    t1.add(inst.find_debt("u", "v", 0), 1, 1).add(inst.find_debt("v", "w", 0), 1, 1);
    t2.add(inst.find_debt("u", "v", 0), 2, 1).add(inst.find_debt("v", "w", 0), 2, 1);
    CHECK(std::count(all.begin(), all.end(), t1) == 1);
    CHECK(std::count(all.begin(), all.end(), t2) == 1);
    for (const Schedule& s : all) CHECK(validate(inst, s, Variant::PP).valid);
}

TEST_CASE("fig3(c) enumeration includes the zero schedule and the full cycle") {
    IdmInstance inst = fig3('c');
    std::vector<Schedule> all;
    oracle_schedules(inst, Variant::PP, [&](const Schedule& s) { all.push_back(s); });
    Schedule zero(inst), cycle(inst);
    for (int e = 0; e < inst.debt_count(); ++e) cycle.add(e, 1, 1);
    CHECK(std::count(all.begin(), all.end(), zero) == 1);
    CHECK(std::count(all.begin(), all.end(), cycle) == 1);
}

TEST_CASE("a starved debtor admits exactly the empty schedule") {
    IdmInstance inst = InstanceBuilder().node("a", 0).node("b", 0).debt("a", "b", 1, 1).build();
    int count = 0;
    oracle_schedules(inst, Variant::PP, [&](const Schedule& s) {
        CHECK(s.empty());
        ++count;
    });
    CHECK(count == 1);
}

TEST_CASE("bankruptcy minimization golden values") {
    CHECK(oracle_bankruptcy_min(fig2(), Variant::PP).count() == 0);
    CHECK(oracle_bankruptcy_min(fig3('c'), Variant::PP).count() == 0);
    OracleAnswer fig1_min = oracle_bankruptcy_min(fig1(), Variant::PP);
    REQUIRE(fig1_min.exhausted);
    CHECK(fig1_min.count() == 1); // u alone can absorb the default
    REQUIRE(fig1_min.witness.has_value());
    auto rep = validate(fig1(), *fig1_min.witness, Variant::PP);
    CHECK(rep.valid);
    CHECK(count_bankruptcies(rep) == 1);
}

TEST_CASE("bankruptcy maximization golden values") {
    CHECK(oracle_bankruptcy_max(fig3('c'), Variant::PP).count() == 4);
    CHECK(oracle_bankruptcy_max(fig2(), Variant::PP).count() == 1);
    IdmInstance debt_free = IdmInstance::build({"solo"}, {}, {Money(3)});
    CHECK(oracle_bankruptcy_max(debt_free, Variant::PP).count() == 0);
}

TEST_CASE("perfect scheduling golden values") {
    CHECK(oracle_perfect_scheduling(fig2(), Variant::AoN).truth());
    CHECK(oracle_perfect_scheduling(fig2(), Variant::PP).truth());
    CHECK_FALSE(oracle_perfect_scheduling(fig1(), Variant::PP).truth());
    // two equal values split across the two deadlines
    GeneratedInstance part = gen_aon_perfsched_partition(NumberMultiset{{2, 2}, std::nullopt});
    CHECK(oracle_perfect_scheduling(part.instance, Variant::AoN).truth());
}

TEST_CASE("bailout minimization golden values") {
    OracleAnswer fig1_bail = oracle_bailout_min(fig1(), Variant::PP);
    REQUIRE(fig1_bail.exhausted);
    CHECK(fig1_bail.money() == Money(5));
    REQUIRE(fig1_bail.witness.has_value());
    REQUIRE(fig1_bail.bailout.has_value());
    auto rep = validate(fig1(), *fig1_bail.witness, Variant::PP, &*fig1_bail.bailout);
    CHECK(rep.valid);
    CHECK(rep.perfect);

    CHECK(oracle_bailout_min(fig2(), Variant::PP).money() == Money(0));

    IdmInstance lone =
        InstanceBuilder().node("a", 0).node("b", 0).debt("a", "b", 3, 1, 2).build();
    CHECK(oracle_bailout_min(lone, Variant::PP).money() == Money(3));
}

TEST_CASE("witnesses validate with the claimed value") {
    std::mt19937_64 rng(67);
    for (int round = 0; round < 25; ++round) {
        IdmInstance inst = random_instance(rng, RandomSpec{4, 5, 3, 3, 3});
        OracleAnswer mn = oracle_bankruptcy_min(inst, Variant::PP);
        OracleAnswer mx = oracle_bankruptcy_max(inst, Variant::PP);
        if (!mn.exhausted || !mx.exhausted) continue;
        REQUIRE(mn.witness.has_value());
        REQUIRE(mx.witness.has_value());
        auto rep_min = validate(inst, *mn.witness, Variant::PP);
        auto rep_max = validate(inst, *mx.witness, Variant::PP);
        CHECK(rep_min.valid);
        CHECK(rep_max.valid);
        CHECK(count_bankruptcies(rep_min) == mn.count());
        CHECK(count_bankruptcies(rep_max) == mx.count());
        CHECK(mn.count() <= mx.count());
        // the number of insolvent nodes lower-bounds the minimum
        int insolvent = 0;
        for (int v = 0; v < inst.node_count(); ++v)
            if (is_insolvent(inst, v)) ++insolvent;
        CHECK(insolvent <= mn.count());
    }
}

TEST_CASE("canonical search agrees with the raw enumerator on small instances") {
    std::mt19937_64 rng(71);
    for (int round = 0; round < 20; ++round) {
        IdmInstance inst = random_instance(rng, RandomSpec{3, 3, 2, 3, 2});
        for (Variant variant : {Variant::PP, Variant::AoN}) {
            int best_min = inst.node_count() + 1, best_max = -1;
            bool any_perfect = false;
            oracle_schedules(inst, variant, [&](const Schedule& s) {
                auto rep = validate(inst, s, variant);
                REQUIRE(rep.valid);
                int k = count_bankruptcies(rep);
                best_min = std::min(best_min, k);
                best_max = std::max(best_max, k);
                any_perfect = any_perfect || rep.perfect;
            });
            OracleAnswer mn = oracle_bankruptcy_min(inst, variant);
            OracleAnswer mx = oracle_bankruptcy_max(inst, variant);
            OracleAnswer pf = oracle_perfect_scheduling(inst, variant);
            REQUIRE(mn.exhausted);
            REQUIRE(mx.exhausted);
            REQUIRE(pf.exhausted);
            if (mn.count() != best_min || mx.count() != best_max ||
                pf.truth() != any_perfect)
                dump_disagreement("canonical-vs-raw", inst,
                                  "raw: min=" + std::to_string(best_min) +
                                      " max=" + std::to_string(best_max) +
                                      " perfect=" + std::to_string(any_perfect),
                                  "canonical: min=" + std::to_string(mn.count()) +
                                      " max=" + std::to_string(mx.count()) +
                                      " perfect=" + std::to_string(pf.truth()));
            CHECK(mn.count() == best_min);
            CHECK(mx.count() == best_max);
            CHECK(pf.truth() == any_perfect);
        }
    }
}

TEST_CASE("unit amounts: AoN and PP oracles agree on all four problems") {
    std::mt19937_64 rng(73);
    for (int round = 0; round < 15; ++round) {
        IdmInstance inst = random_instance(rng, RandomSpec{4, 5, 1, 3, 2});
        CHECK(oracle_bankruptcy_min(inst, Variant::PP).count() ==
              oracle_bankruptcy_min(inst, Variant::AoN).count());
        CHECK(oracle_bankruptcy_max(inst, Variant::PP).count() ==
              oracle_bankruptcy_max(inst, Variant::AoN).count());
        CHECK(oracle_perfect_scheduling(inst, Variant::PP).truth() ==
              oracle_perfect_scheduling(inst, Variant::AoN).truth());
        CHECK(oracle_bailout_min(inst, Variant::PP).money() ==
              oracle_bailout_min(inst, Variant::AoN).money());
    }
}

TEST_CASE("budget exhaustion is reported, not silently wrong") {
    IdmInstance inst = fig1();
    SearchBudget tiny;
    tiny.max_states = 3;
    OracleAnswer ans = oracle_bankruptcy_min(inst, Variant::PP, tiny);
    CHECK_FALSE(ans.exhausted);
    CHECK_THROWS_AS(
        oracle_schedules(inst, Variant::PP, [](const Schedule&) {}, tiny), BudgetExhausted);
}

TEST_CASE("fp oracles are refused") {
    CHECK_THROWS_AS(oracle_bankruptcy_min(fig2(), Variant::FP), std::invalid_argument);
    CHECK_THROWS_AS(oracle_bailout_min(fig2(), Variant::FP), std::invalid_argument);
}
