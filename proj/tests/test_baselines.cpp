#include <gtest/gtest.h>

#include "support.hpp"

namespace vrprpd {
namespace {

using testing::brute_force;
using testing::random_instance;
using testing::toy2;

Instance gr17_base() {
    return build_instance(load_tsplib(std::string(VRPRPD_DATA_DIR) + "/gr17.tsp"), {VariantKind::Base, 42, 0});
}

TEST(NearestNeighbor, ClosestFirstOnToy) {
    const Instance inst = toy2(1, 2);
    const Solution sol = nearest_neighbor(inst);
    ASSERT_EQ(sol.tours[0].front(), drop(1));
    const auto& t = sol.tours[0];
    EXPECT_LT(std::find(t.begin(), t.end(), drop(1)), std::find(t.begin(), t.end(), drop(2)));
    EXPECT_NO_THROW(evaluate(inst, sol));
}

TEST(ClarkeWright, Saving) { EXPECT_EQ(clarke_wright_saving(toy2(1, 2), 1, 2), 17); }

TEST(GreedyDefer, NeverPicksWhileADropoffIsCheaper) {
    Rng rng(3);
    for (int t = 0; t < 40; ++t) {
        const Instance inst = random_instance(3 + t % 8, 1 + t % 3, 1 + t % 3, rng);
        for (double lambda : {5.0, 10.0, 15.0}) {
            std::vector<DeferDecision> log;
            const Solution sol = greedy_defer(inst, lambda, &log);
            ASSERT_EQ(log.size(), 2u * static_cast<std::size_t>(inst.n));
            std::vector<std::size_t> next(static_cast<std::size_t>(inst.m()), 0);
            for (const auto& d : log) {
                const auto v = static_cast<std::size_t>(d.vehicle);
                EXPECT_EQ(sol.tours[v][next[v]++], d.op);
                if (d.op.kind == OpKind::Pickup) {
                    EXPECT_FALSE(d.min_dropoff_cost < lambda * d.min_pickup_cost);
                }
            }
            EXPECT_NO_THROW(evaluate(inst, sol));
        }
    }
}

TEST(Baselines, AllFeasibleOnRandomInstances) {
    Rng rng(17);
    for (int t = 0; t < 30; ++t) {
        const Instance inst = random_instance(2 + t % 9, 1 + t % 3, 1 + t % 4, rng);
        for (auto kind : {BaselineKind::NearestNeighbor, BaselineKind::MaxRegret, BaselineKind::ClarkeWright,
                          BaselineKind::GreedyDefer}) {
            const Solution sol = run_baseline(inst, kind, {}, 1);
            EXPECT_NO_THROW(evaluate(inst, sol)) << to_string(kind);
        }
    }
}

TEST(Baselines, LambdaRange) {
    BaselineParams p;
    p.lambda = 4;
    EXPECT_THROW(run_baseline(toy2(1, 2), BaselineKind::GreedyDefer, p, 1), std::invalid_argument);
}

TEST(TwoOpt, ToyReachesOptimum) {
    const Instance inst = toy2(1, 2);
    const Solution start({{drop(2), drop(1), pick(2), pick(1)}});
    const Solution out = two_opt_improve(inst, start);
    EXPECT_EQ(evaluate(inst, out).makespan, brute_force(inst).makespan);
    EXPECT_EQ(evaluate(inst, out).makespan, 47);
}

TEST(TwoOpt, ImprovesAndIsIdempotent) {
    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
        const Instance inst = random_instance(3 + t % 8, 1 + t % 3, 1 + t % 3, rng);
        const Solution in = nearest_neighbor(inst);
        const Solution once = two_opt_improve(inst, in);
        EXPECT_LE(evaluate(inst, once).makespan, evaluate(inst, in).makespan);
        const Solution settled = two_opt_improve(inst, once, 1L << 40);
        EXPECT_EQ(two_opt_improve(inst, settled, 1L << 40), settled);
    }
}

TEST(TwoOpt, FixedPoint) {
    const Instance inst = toy2(1, 2);
    const Solution opt({{drop(1), drop(2), pick(1), pick(2)}});
    EXPECT_EQ(evaluate(inst, two_opt_improve(inst, opt)).makespan, 47);
}

TEST(Portfolio, BestIsTheMinimum) {
    const Instance inst = gr17_base();
    const auto entries = heuristic_portfolio(inst, 1);
    const Solution best = best_heuristic(inst, 1);
    const double z = evaluate(inst, best).makespan;
    for (const auto& e : entries) EXPECT_LE(z, e.makespan) << e.name;
    EXPECT_EQ(best, best_heuristic(inst, 1));
    EXPECT_LE(z, 2 * 2738);
    EXPECT_GE(z, 2738 / 2.0);
}

TEST(Portfolio, FirstMinimumWins) {
    std::vector<PortfolioEntry> entries{{"nn", {}, 47}, {"a", {}, 50}, {"b", {}, 47}};
    EXPECT_EQ(best_entry(entries), 0u);
}

}  // namespace
}  // namespace vrprpd
