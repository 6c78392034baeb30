#include <gtest/gtest.h>

#include "support.hpp"

namespace vrprpd {
namespace {

using testing::random_instance;
using testing::random_solution;
using testing::reference_evaluate;
using testing::single;
using testing::toy2;

ScheduleStatus status_of(const Instance& inst, const Solution& sol) {
    try {
        evaluate(inst, sol);
        return ScheduleStatus::Ok;
    } catch (const ScheduleError& e) {
        return e.status();
    }
}

TEST(Evaluate, SingleCustomer) {
    const Schedule s = evaluate(single(), Solution({{drop(1), pick(1)}}));
    EXPECT_EQ(s.t_drop[1], 10);
    EXPECT_EQ(s.t_pickup[1], 30);
    EXPECT_EQ(s.makespan, 40);
}

TEST(Evaluate, TwoCustomersOneVehicle) {
    const Schedule s = evaluate(toy2(1, 2), Solution({{drop(1), drop(2), pick(1), pick(2)}}));
    EXPECT_EQ(s.t_drop[1], 10);
    EXPECT_EQ(s.t_drop[2], 15);
    EXPECT_EQ(s.events[0][2].arrival, 20);
    EXPECT_EQ(s.t_pickup[1], 30);
    EXPECT_EQ(s.t_pickup[2], 35);
    EXPECT_EQ(s.makespan, 47);
}

TEST(Evaluate, CrossVehiclePickupWaits) {
    // v1 reaches c1 at 17 and waits for D1@10 + 20.
    const Schedule s = evaluate(toy2(2, 1), Solution({{drop(1), pick(2)}, {drop(2), pick(1)}}));
    EXPECT_EQ(s.t_drop[1], 10);
    EXPECT_EQ(s.t_drop[2], 12);
    EXPECT_EQ(s.events[1][1].arrival, 17);
    EXPECT_EQ(s.t_pickup[1], 30);
    EXPECT_EQ(s.t_pickup[2], 32);
    EXPECT_EQ(s.return_time[0], 44);
    EXPECT_EQ(s.return_time[1], 40);
    EXPECT_EQ(s.makespan, 44);
}

TEST(Evaluate, PickupOnlyVehicle) {
    // v1 leaves the depot empty, arrives at 10 and waits for D1@10 + 20.
    const Schedule s = evaluate(single(2, 1), Solution({{drop(1)}, {pick(1)}}));
    EXPECT_EQ(s.return_time[0], 20);
    EXPECT_EQ(s.events[1][0].arrival, 10);
    EXPECT_EQ(s.events[1][0].load_after, 1);
    EXPECT_EQ(s.events[0][0].load_after, 0);
    EXPECT_EQ(s.t_pickup[1], 30);
    EXPECT_EQ(s.return_time[1], 40);
    EXPECT_EQ(s.makespan, 40);
}

TEST(Evaluate, EmptyToursReturnAtZero) {
    const Schedule s = evaluate(single(3, 1), Solution({{}, {drop(1), pick(1)}, {}}));
    EXPECT_EQ(s.return_time[0], 0);
    EXPECT_EQ(s.return_time[2], 0);
    Schedule empty;
    empty.return_time = {0, 0};
    EXPECT_EQ(makespan(empty), 0);
    empty.return_time = {40, 47};
    EXPECT_EQ(makespan(empty), 47);
}

TEST(Evaluate, Errors) {
    EXPECT_EQ(status_of(toy2(1, 1), Solution({{drop(1), drop(2), pick(1), pick(2)}})), ScheduleStatus::CapacityViolation);
    EXPECT_EQ(status_of(toy2(3, 1), Solution({{drop(1)}, {drop(2)}, {pick(1), pick(2)}})),
              ScheduleStatus::CapacityViolation);
    EXPECT_EQ(status_of(toy2(1, 2), Solution({{pick(1), drop(1), drop(2), pick(2)}})), ScheduleStatus::Deadlock);
    EXPECT_EQ(status_of(toy2(1, 2), Solution({{drop(2), pick(1), drop(1), pick(2)}})), ScheduleStatus::Deadlock);
    Rng rng(1);
    const Instance four = random_instance(4, 2, 2, rng);
    EXPECT_EQ(status_of(four, Solution({{drop(3), pick(2), drop(1), pick(3)}, {drop(4), pick(1), drop(2), pick(4)}})),
              ScheduleStatus::Deadlock);
    EXPECT_EQ(status_of(single(), Solution({{drop(1)}})), ScheduleStatus::Malformed);
    EXPECT_EQ(status_of(single(), Solution({{drop(1), pick(1), pick(1)}})), ScheduleStatus::Malformed);
    EXPECT_EQ(status_of(single(), Solution({{drop(1), pick(1)}, {}})), ScheduleStatus::Malformed);
    EXPECT_EQ(status_of(single(), Solution({{drop(2), pick(1)}})), ScheduleStatus::Malformed);
}

TEST(Metrics, Definitions) {
    const Instance lone = single(2, 1);
    const Solution split({{drop(1)}, {pick(1)}});
    EXPECT_EQ(coordination_metrics(lone, split, evaluate(lone, split)).cross_agent_pct, 100);
    const Instance cross = toy2(2, 1);
    const Solution swap({{drop(1), pick(2)}, {drop(2), pick(1)}});
    EXPECT_EQ(coordination_metrics(cross, swap, evaluate(cross, swap)).cross_agent_pct, 100);
    const Solution own({{drop(1), pick(1)}, {drop(2), pick(2)}});
    EXPECT_EQ(coordination_metrics(cross, own, evaluate(cross, own)).cross_agent_pct, 0);

    const Instance one = single();
    const Solution serial({{drop(1), pick(1)}});
    const auto m1 = coordination_metrics(one, serial, evaluate(one, serial));
    EXPECT_EQ(m1.cross_agent_pct, 0);
    EXPECT_EQ(m1.interleaved_pct, 0);

    // c1: D2@15 lies in (10, 30). c2: P1@30 lies in (15, 35).
    const Instance toy = toy2(1, 2);
    const Solution both({{drop(1), drop(2), pick(1), pick(2)}});
    EXPECT_EQ(coordination_metrics(toy, both, evaluate(toy, both)).interleaved_pct, 100);

    const Solution nested({{drop(1), drop(2), pick(2), pick(1)}});
    const Schedule ns = evaluate(toy, nested);
    const auto mn = coordination_metrics(toy, nested, ns);
    EXPECT_EQ(mn.interleaved_pct, 50);
}

TEST(TwoPass, Examples) {
    EXPECT_EQ(two_pass_estimate(toy2(1, 2), Solution({{drop(1), drop(2), pick(1), pick(2)}})), 47);
    EXPECT_EQ(two_pass_estimate(single(2, 1), Solution({{drop(1)}, {pick(1)}})), 40);
    EXPECT_EQ(two_pass_estimate(toy2(2, 1), Solution({{drop(1), pick(2)}, {drop(2), pick(1)}})), 44);
    EXPECT_EQ(two_pass_estimate(single(), Solution({{drop(1), pick(1)}})), 40);
    EXPECT_THROW(two_pass_estimate(single(), Solution({{drop(1)}})), ScheduleError);
}

TEST(TwoPass, EqualsEvaluateWithoutUpstreamWaits) {
    // Every dropoff precedes every pickup on its route, so no dropoff time
    // can depend on a pickup wait.
    Rng rng(11);
    int checked = 0;
    for (int t = 0; t < 500; ++t) {
        const int n = 1 + t % 5, m = 1 + t % 3;
        const Instance inst = random_instance(n, m, n, rng);
        Solution sol(m);
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 1);
        rng.shuffle(order);
        for (int c : order) sol.tours[rng.index(static_cast<std::size_t>(m))].push_back(drop(c));
        // A vehicle picks up at most as many resources as it dropped.
        std::vector<std::size_t> slots;
        for (std::size_t v = 0; v < sol.tours.size(); ++v)
            for (std::size_t i = 0; i < sol.tours[v].size(); ++i) slots.push_back(v);
        rng.shuffle(slots);
        rng.shuffle(order);
        for (std::size_t i = 0; i < order.size(); ++i) sol.tours[slots[i]].push_back(pick(order[i]));
        Schedule s;
        ASSERT_EQ(simulate(inst, sol, s), ScheduleStatus::Ok) << describe(sol);
        ++checked;
        EXPECT_DOUBLE_EQ(two_pass_estimate(inst, sol), s.makespan) << describe(sol);
    }
    EXPECT_EQ(checked, 500);
}

TEST(Properties, MatchesReferenceSimulator) {
    Rng rng(2024);
    int ok = 0, capacity = 0, deadlock = 0;
    for (int t = 0; t < 3000; ++t) {
        const Instance inst = random_instance(1 + t % 6, 1 + t % 3, 1 + t % 2, rng);
        const Solution sol = random_solution(inst, rng);
        const auto ref = reference_evaluate(inst, sol);
        Schedule s;
        const ScheduleStatus got = simulate(inst, sol, s);
        ASSERT_EQ(got, ref.status) << describe(sol);
        if (got == ScheduleStatus::Ok) {
            ++ok;
            EXPECT_EQ(s.makespan, ref.makespan);
            EXPECT_EQ(s.t_drop, ref.t_drop);
            EXPECT_EQ(s.t_pickup, ref.t_pickup);
        }
        capacity += got == ScheduleStatus::CapacityViolation;
        deadlock += got == ScheduleStatus::Deadlock;
    }
    EXPECT_GT(ok, 100);
    EXPECT_GT(capacity, 100);
    EXPECT_GT(deadlock, 10);
}

TEST(Properties, ScheduleInvariants) {
    Rng rng(7);
    for (int t = 0; t < 2000; ++t) {
        const Instance inst = random_instance(1 + t % 6, 1 + t % 3, 1 + t % 3, rng);
        const Solution sol = random_solution(inst, rng);
        Schedule s;
        if (simulate(inst, sol, s) != ScheduleStatus::Ok) continue;
        double latest = 0;
        for (int c = 1; c <= inst.n; ++c)
            EXPECT_GE(s.t_pickup[static_cast<std::size_t>(c)] - s.t_drop[static_cast<std::size_t>(c)], inst.p(c));
        for (std::size_t v = 0; v < s.events.size(); ++v) {
            for (const auto& e : s.events[v]) {
                EXPECT_GE(e.load_after, 0);
                EXPECT_LE(e.load_after, inst.k());
            }
            latest = std::max(latest, s.return_time[v]);
        }
        EXPECT_EQ(s.makespan, latest);
    }
}

TEST(Properties, MonotoneInProcessingTimes) {
    Rng rng(99);
    for (int t = 0; t < 1000; ++t) {
        Instance inst = random_instance(1 + t % 5, 1 + t % 3, 1 + t % 2, rng);
        const Solution sol = random_solution(inst, rng);
        Schedule s;
        if (simulate(inst, sol, s) != ScheduleStatus::Ok) continue;
        const double before = s.makespan;
        const int c = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(inst.n)));
        inst.processing[static_cast<std::size_t>(c)] += static_cast<double>(rng.uniform_int(1, 50));
        ASSERT_EQ(simulate(inst, sol, s), ScheduleStatus::Ok);
        EXPECT_GE(s.makespan, before);
    }
}

TEST(Properties, VehiclePermutationInvariant) {
    Rng rng(5);
    for (int t = 0; t < 1000; ++t) {
        const Instance inst = random_instance(1 + t % 6, 2 + t % 2, 1 + t % 2, rng);
        Solution sol = random_solution(inst, rng);
        Schedule s;
        const ScheduleStatus st = simulate(inst, sol, s);
        const double z = s.makespan;
        rng.shuffle(sol.tours);
        Schedule s2;
        ASSERT_EQ(simulate(inst, sol, s2), st);
        if (st == ScheduleStatus::Ok) {
            EXPECT_EQ(s2.makespan, z);
        }
    }
}

}  // namespace
}  // namespace vrprpd
