#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace vrprpd {
namespace {

using Pairs = std::vector<std::pair<double, double>>;

// P(W >= observed) by listing every sign pattern over the midranks.
double enumerate_upper_tail(const Pairs& pairs) {
    std::vector<double> diffs, mags;
    for (const auto& [b, v] : pairs)
        if (v != b) {
            diffs.push_back(v - b);
            mags.push_back(std::abs(v - b));
        }
    std::vector<double> ranks(mags.size());
    for (std::size_t i = 0; i < mags.size(); ++i) {
        double below = 0, equal = 0;
        for (double x : mags) {
            below += x < mags[i];
            equal += x == mags[i];
        }
        ranks[i] = below + (equal + 1) / 2;
    }
    double observed = 0;
    for (std::size_t i = 0; i < diffs.size(); ++i)
        if (diffs[i] > 0) observed += ranks[i];
    const std::size_t n = ranks.size();
    long hits = 0;
    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
        double w = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1UL << i)) w += ranks[i];
        hits += w >= observed - 1e-9;
    }
    return static_cast<double>(hits) / static_cast<double>(1UL << n);
}

TEST(Wilcoxon, AllPositiveFourteen) {
    Pairs pairs;
    for (int i = 0; i < 14; ++i) pairs.emplace_back(10.0, 10.0 + 1.5 * (i + 1));
    const auto r = wilcoxon_signed_rank(pairs);
    EXPECT_EQ(r.w, 105);
    EXPECT_TRUE(r.exact);
    EXPECT_DOUBLE_EQ(r.p, std::ldexp(1.0, -14));
    EXPECT_NEAR(r.p, 0.0001, 0.00005);
}

TEST(Wilcoxon, AllNegative) {
    Pairs pairs;
    for (int i = 0; i < 14; ++i) pairs.emplace_back(10.0 + i + 1, 10.0);
    const auto r = wilcoxon_signed_rank(pairs);
    EXPECT_EQ(r.w, 0);
    // Inclusive upper tail: W >= 0 holds for every sign pattern.
    EXPECT_DOUBLE_EQ(r.p, 1.0);
    EXPECT_DOUBLE_EQ(wilcoxon_signed_rank(pairs, Alternative::Less).p, std::ldexp(1.0, -14));
}

TEST(Wilcoxon, MatchesEnumeration) {
    const std::vector<Pairs> cases{
        {{0, 1}, {0, 2}, {0, -3}, {0, 4}, {0, 5}},
        {{0, 1}, {0, -1}, {0, 2}, {0, 2}, {0, -3}, {0, 4}},
        {{5, 4}, {5, 7}, {5, 7}, {5, 7}, {5, 2}, {5, 9}, {5, 5}, {5, 11}},
        {{1, 1.5}, {2, 1}, {3, 5}, {4, 4.25}, {5, 3}, {6, 9}, {7, 6.5}, {8, 12}, {9, 10}},
        {{0, -2}, {0, -2}, {0, 2}, {0, 2}, {0, 6}, {0, -6}, {0, 1}, {0, 8}, {0, 3}, {0, -4}, {0, 5}, {0, 7}},
    };
    for (const auto& pairs : cases) {
        const auto r = wilcoxon_signed_rank(pairs);
        EXPECT_NEAR(r.p, enumerate_upper_tail(pairs), 1e-12);
    }
}

TEST(Wilcoxon, Errors) {
    EXPECT_THROW(wilcoxon_signed_rank({{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 1}}), TooFewPairs);
}

TEST(Wilcoxon, NormalApproximationAboveTwenty) {
    Pairs pairs;
    for (int i = 0; i < 30; ++i) pairs.emplace_back(0, (i % 3 == 0 ? -1 : 1) * (i + 1));
    const auto r = wilcoxon_signed_rank(pairs);
    EXPECT_FALSE(r.exact);
    EXPECT_GT(r.p, 0);
    EXPECT_LT(r.p, 0.05);
}

TEST(Cohen, Examples) {
    EXPECT_DOUBLE_EQ(cohens_d_paired({{0, 1}, {0, 3}}), std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(cohens_d_paired({{1, 0}, {3, 0}}), -std::sqrt(2.0));
    EXPECT_THROW(cohens_d_paired({{0, 5}, {1, 6}, {2, 7}}), ZeroVariance);
    EXPECT_THROW(cohens_d_paired({{0, 5}}), std::invalid_argument);
}

TEST(Report, ImprovementPercent) { EXPECT_NEAR(improvement_pct(2738, 1449), 47.08, 0.005); }

TEST(Csv, RoundTrip) {
    std::vector<ResultRow> rows(3);
    rows[0] = {"gr17", "gr17-base-s42", "base", 0, "alns", 1, 1234.5, 0.25, 12.5, 50, ""};
    rows[1] = {"my,set", "a \"quoted\" label", "1r10", 3, "pipeline", 99, 1.0 / 3.0, 2, 0, 100, ""};
    rows[2] = {"x", "y", "5x", 0, "heuristics", 7, 0, 0, 0, 0, "cannot open, file\nsecond line"};
    EXPECT_EQ(rows_from_csv(rows_to_csv(rows)), rows);
}

TEST(Config, DefaultsRoundTripAndRejectUnknownKeys) {
    SolverConfig c;
    c.alns.max_iter = 1234;
    c.brkga.hint_preferred = false;
    const SolverConfig back = config_from_json(config_to_json(c));
    EXPECT_EQ(back.alns.max_iter, 1234);
    EXPECT_FALSE(back.brkga.hint_preferred);
    EXPECT_EQ(back.alns.t0, 0.30);
    EXPECT_EQ(back.brkga.elite_bias, 0.7);

    const SolverConfig partial = config_from_json(nlohmann::json::parse(R"({"alns": {"max_iter": 5}})"));
    EXPECT_EQ(partial.alns.max_iter, 5);
    EXPECT_EQ(partial.alns.alpha, 0.9998);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"alns": {"max_iters": 5}})")), std::invalid_argument);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"colour": 1})")), std::invalid_argument);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"brkga": {"elite_bias": 0.2}})")), std::invalid_argument);
    EXPECT_EQ(paper_scale_config().brkga.population, 30000);
}

TEST(Experiment, HeuristicsOnly) {
    Rng rng(2);
    const Instance inst = testing::random_instance(8, 2, 2, rng);
    const auto rows = run_cell(inst, "rand", {Method::Heuristics}, {}, 1);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].method, "heuristics");
    EXPECT_GT(rows[0].makespan, 0);
    EXPECT_TRUE(rows[0].ok());
}

TEST(Experiment, PipelineNotWorseThanAlns) {
    Rng rng(3);
    const Instance inst = testing::random_instance(8, 2, 2, rng);
    SolverConfig cfg;
    cfg.alns.max_iter = 300;
    cfg.brkga.population = 40;
    cfg.brkga.generations = 10;
    const auto rows = run_cell(inst, "rand", {Method::Heuristics, Method::Alns, Method::Pipeline}, cfg, 1);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_LE(rows[2].makespan, rows[1].makespan);
}

TEST(Experiment, BadFileRecordedNotFatal) {
    ExperimentConfig cfg;
    cfg.instances = {"/nonexistent/file.tsp"};
    cfg.methods = {Method::Heuristics};
    const auto rows = run_experiment(cfg);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_FALSE(rows[0].ok());
}

TEST(Experiment, TablesAndHypotheses) {
    std::vector<ResultRow> rows;
    for (int d = 0; d < 6; ++d) {
        const std::string ds = "d" + std::to_string(d);
        rows.push_back({ds, ds + "-base", "base", 0, "heuristics", 1, 200.0 + d, 0, 0, 0, ""});
        rows.push_back({ds, ds + "-base", "base", 0, "alns", 1, 150.0 + d, 0, 10.0 + d, 5, ""});
        rows.push_back({ds, ds + "-5x", "5x", 0, "alns", 1, 400.0 + d, 0, 30.0 + 2 * d, 5.0 + d, ""});
    }
    const auto table = hypothesis_table(rows);
    ASSERT_FALSE(table.empty());
    EXPECT_EQ(table[0].metric, "cross_agent_pct");
    EXPECT_EQ(table[0].variant, "5x");
    EXPECT_EQ(table[0].pairs, 6u);
    ASSERT_TRUE(table[0].wilcoxon.has_value());
    EXPECT_DOUBLE_EQ(table[0].wilcoxon->p, 1.0 / 64);
    const std::string text = render_results_table(rows);
    EXPECT_NE(text.find("(0) Heuristics"), std::string::npos);
    EXPECT_NE(text.find("1 Impr. %"), std::string::npos);
    EXPECT_NE(render_hypothesis_table(table).find("cross_agent_pct"), std::string::npos);
}

}  // namespace
}  // namespace vrprpd
