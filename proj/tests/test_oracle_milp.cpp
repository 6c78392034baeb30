#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "support.hpp"

namespace vrprpd {
namespace {

using testing::brute_force;
using testing::random_instance;
using testing::single;
using testing::toy2;

TEST(Oracle, Toys) {
    EXPECT_EQ(exact_solve(single()).makespan, 40);
    const OracleResult one = exact_solve(toy2(1, 2));
    EXPECT_EQ(one.makespan, 47);
    EXPECT_TRUE(one.optimal);
    // Frozen from full enumeration: separate vehicles, 20 + 24 = 44.
    EXPECT_EQ(exact_solve(toy2(2, 1)).makespan, 44);
    EXPECT_EQ(brute_force(toy2(2, 1)).makespan, 44);
    EXPECT_EQ(exact_solve(toy2(1, 1)).makespan, 67);
}

TEST(Oracle, MatchesEnumeration) {
    Rng rng(404);
    for (int t = 0; t < 48; ++t) {
        const int n = 1 + t % 4, m = 1 + (t / 4) % 2, k = 1 + (t / 8) % 2;
        const Instance inst = random_instance(n, m, k, rng);
        const OracleResult r = exact_solve(inst);
        EXPECT_EQ(r.makespan, brute_force(inst).makespan) << "n=" << n << " m=" << m << " k=" << k;
        EXPECT_EQ(evaluate(inst, r.solution).makespan, r.makespan);
    }
}

TEST(Oracle, LowerBoundsEveryMethod) {
    Rng rng(77);
    AlnsParams a;
    a.max_iter = 200;
    BrkgaParams b;
    b.population = 30;
    b.generations = 10;
    for (int t = 0; t < 12; ++t) {
        const Instance inst = random_instance(2 + t % 4, 1 + t % 2, 1 + (t / 2) % 2, rng);
        const double opt = exact_solve(inst).makespan;
        for (auto kind : {BaselineKind::NearestNeighbor, BaselineKind::MaxRegret, BaselineKind::ClarkeWright,
                          BaselineKind::GreedyDefer})
            EXPECT_LE(opt, evaluate(inst, run_baseline(inst, kind, {}, 1)).makespan);
        EXPECT_LE(opt, run_alns(inst, a, 1).best_makespan);
        const PipelineResult p = run_pipeline(inst, a, b, 1);
        EXPECT_LE(opt, p.best_makespan);
        if (p.brkga.complete) {
            EXPECT_LE(opt, p.brkga.best_fitness);
        }
    }
}

TEST(Oracle, Limits) {
    Rng rng(1);
    EXPECT_THROW(exact_solve(random_instance(7, 2, 2, rng)), InstanceTooLarge);
    OracleLimits tiny;
    tiny.max_nodes = 3;
    try {
        exact_solve(random_instance(5, 2, 2, rng), tiny);
        FAIL() << "expected LimitExceeded";
    } catch (const LimitExceeded& e) {
        EXPECT_FALSE(e.result.optimal);
        EXPECT_LT(e.result.makespan, kInfinity);
    }
}

// Rows per family from the index ranges: c in C (n), v in V (m), i in N
// (n + 1), j in C.
std::map<std::string, int> expected_counts(int n, int m) {
    return {{"service", 2 * n},
            {"depot", 2 * m},
            {"anchor", 2 * m},
            {"flow", 2 * n * m},
            {"noloop", (n + 1) * m},
            {"visit", 2 * n * m},
            {"droptime", 2 * n * m},
            {"picktime", 2 * n * m},
            {"prec", n},
            {"depart", n * m},
            {"wait", n * m},
            {"prop", (n + 1) * n * m},
            {"capinit", m},
            {"capge", (n + 1) * n * m},
            {"caple", (n + 1) * n * m},
            {"capdrop", (n + 1) * n * m},
            {"cappick", (n + 1) * n * m},
            {"mtz", n * (n - 1) * m},
            {"ret", n * m},
            {"makespan", m}};
}

// Counts row names in the Subject To section of the LP text.
std::map<std::string, int> counted_rows(const std::string& text) {
    std::map<std::string, int> out;
    std::istringstream in(text);
    std::string line;
    bool inside = false;
    const std::regex name(R"(^ ([a-z]+)_[A-Za-z0-9_]+:)");
    while (std::getline(in, line)) {
        if (line == "Subject To") inside = true;
        else if (line == "Bounds") inside = false;
        std::smatch mt;
        if (inside && std::regex_search(line, mt, name)) ++out[mt[1]];
    }
    return out;
}

TEST(Milp, FamilyCounts) {
    for (auto [n, m] : std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {3, 2}}) {
        Rng rng(static_cast<std::uint64_t>(n * 10 + m));
        const MilpModel model = export_milp(random_instance(n, m, 2, rng));
        const auto expected = expected_counts(n, m);
        int total = 0;
        for (const auto& fam : milp_families()) {
            const int want = expected.count(fam) ? expected.at(fam) : -1;
            const int got = model.family_rows.count(fam) ? model.family_rows.at(fam) : 0;
            EXPECT_EQ(got, want) << fam << " n=" << n << " m=" << m;
            total += want;
        }
        EXPECT_EQ(model.rows, total);
        auto parsed = counted_rows(model.text);
        for (auto& [fam, c] : expected)
            if (c == 0) parsed.emplace(fam, 0);
        EXPECT_EQ(parsed, expected);
    }
}

TEST(Milp, AnchorsAndLayout) {
    const MilpModel one = export_milp(single());
    EXPECT_NE(one.text.find("Minimize\n obj: T\n"), std::string::npos);
    EXPECT_NE(one.text.find(" prec_1: Tpick_1 - Tdrop_1 >= 20\n"), std::string::npos);
    EXPECT_NE(one.text.find(" capinit_0: q_0_0 = 1\n"), std::string::npos);
    const MilpModel two = export_milp(toy2(2, 2));
    EXPECT_NE(two.text.find(" prec_2: Tpick_2 - Tdrop_2 >= 20\n"), std::string::npos);
    EXPECT_NE(two.text.find(" capinit_0: q_0_0 = 2\n"), std::string::npos);
    EXPECT_NE(two.text.find(" capinit_1: q_0_1 = 2\n"), std::string::npos);
    for (const char* section : {"Subject To\n", "Bounds\n", "Binaries\n", "Generals\n", "End\n"})
        EXPECT_NE(two.text.find(section), std::string::npos) << section;
}

TEST(Milp, BigM) {
    EXPECT_EQ(default_big_m(toy2(1, 2)), (20 + 20) + (24 + 20) + 12);
    const std::string text = export_milp(single(), 999).text;
    EXPECT_NE(text.find("M=999"), std::string::npos);
}

}  // namespace
}  // namespace vrprpd
