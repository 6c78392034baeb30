#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"

namespace vrprpd {
namespace {

RawTsplib gr17() { return load_tsplib(std::string(VRPRPD_DATA_DIR) + "/gr17.tsp"); }

TEST(Tsplib, Gr17FirstLowerDiagonalEntry) {
    const RawTsplib raw = gr17();
    EXPECT_EQ(raw.dimension, 17);
    EXPECT_EQ(raw.at(0, 1), 633);
    EXPECT_EQ(raw.at(1, 0), 633);
    EXPECT_EQ(raw.at(0, 0), 0);
}

TEST(Tsplib, FullMatrixTwoNodes) {
    const RawTsplib raw = parse_tsplib(
        "NAME: two\nTYPE: TSP\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
        "EDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 7\n7 0\nEOF\n");
    EXPECT_EQ(raw.dimension, 2);
    EXPECT_EQ(raw.at(0, 1), 7);
    EXPECT_EQ(raw.at(1, 0), 7);
}

TEST(Tsplib, Euclidean345) {
    const RawTsplib raw = parse_tsplib(
        "NAME: e\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 4\nEOF\n");
    EXPECT_EQ(raw.at(0, 1), 5);
}

TEST(Tsplib, UpperRowMatchesLowerDiagRow) {
    const RawTsplib upper = parse_tsplib(
        "NAME: u\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: UPPER_ROW\n"
        "EDGE_WEIGHT_SECTION\n4 9\n6\nEOF\n");
    const RawTsplib lower = parse_tsplib(
        "NAME: l\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: LOWER_DIAG_ROW\n"
        "EDGE_WEIGHT_SECTION\n0\n4 0\n9 6 0\nEOF\n");
    EXPECT_EQ(upper.weights, lower.weights);
    EXPECT_EQ(upper.at(1, 2), 6);
}

TEST(Tsplib, Errors) {
    EXPECT_THROW(parse_tsplib("NAME: x\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: XRAY3\nEOF\n"), TsplibError);
    EXPECT_THROW(parse_tsplib("NAME: x\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\n"
                              "EDGE_WEIGHT_SECTION\n0 1\n1 0\nEOF\n"),
                 TsplibError);
    EXPECT_THROW(parse_tsplib("NAME: x\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\n"
                              "EDGE_WEIGHT_SECTION\n0 1\n2 0\nEOF\n"),
                 TsplibError);
}

TEST(Tsplib, RoundTrip) {
    for (const char* name : {"gr17", "gr24", "berlin52"}) {
        const RawTsplib raw = load_tsplib(std::string(VRPRPD_DATA_DIR) + "/" + name + ".tsp");
        const RawTsplib again = parse_tsplib(write_tsplib(raw));
        EXPECT_EQ(again.dimension, raw.dimension) << name;
        EXPECT_EQ(again.weights, raw.weights) << name;
    }
}

TEST(Fleet, Rule) {
    EXPECT_EQ(fleet_for(16).m, 3);
    EXPECT_EQ(fleet_for(16).k, 5);
    EXPECT_EQ(fleet_for(23).m, 3);
    EXPECT_EQ(fleet_for(24).m, 6);
    EXPECT_EQ(fleet_for(24).k, 4);
    EXPECT_EQ(fleet_for(1000).m, 6);
    EXPECT_EQ(fleet_for(1000).k, 4);
    EXPECT_THROW(fleet_for(0), std::invalid_argument);
}

TEST(BuildInstance, BaseDrawsInRange) {
    const RawTsplib raw = gr17();
    const Instance inst = build_instance(raw, {VariantKind::Base, 7, 0});
    EXPECT_EQ(inst.n, 16);
    EXPECT_EQ(inst.m(), 3);
    EXPECT_EQ(inst.k(), 5);
    double lo = 1e18, hi = 0;
    for (int i = 0; i < raw.dimension; ++i)
        for (int j = 0; j < raw.dimension; ++j)
            if (i != j) {
                lo = std::min(lo, raw.at(i, j));
                hi = std::max(hi, raw.at(i, j));
            }
    for (int c = 1; c <= inst.n; ++c) {
        EXPECT_GE(inst.p(c), lo);
        EXPECT_LE(inst.p(c), hi);
    }
}

TEST(BuildInstance, VariantsAreMatched) {
    const RawTsplib raw = gr17();
    const Instance base = build_instance(raw, {VariantKind::Base, 7, 0});
    const Instance twice = build_instance(raw, {VariantKind::Double, 7, 0});
    const Instance five = build_instance(raw, {VariantKind::Quintuple, 7, 0});
    for (int c = 1; c <= base.n; ++c) {
        EXPECT_EQ(twice.p(c), 2 * base.p(c));
        EXPECT_EQ(five.p(c), 5 * base.p(c));
    }
    for (int rep = 0; rep < 3; ++rep) {
        const Instance r20 = build_instance(raw, {VariantKind::Random20, 7, rep});
        const Instance r10 = build_instance(raw, {VariantKind::Random10, 7, rep});
        for (int c = 1; c <= base.n; ++c) {
            const double q20 = r20.p(c) / base.p(c), q10 = r10.p(c) / base.p(c);
            EXPECT_EQ(q20, std::floor(q20));
            EXPECT_GE(q20, 1);
            EXPECT_LE(q20, 20);
            EXPECT_EQ(q10, std::floor(q10));
            EXPECT_GE(q10, 1);
            EXPECT_LE(q10, 10);
        }
    }
}

TEST(BuildInstance, Deterministic) {
    const RawTsplib raw = gr17();
    EXPECT_EQ(build_instance(raw, {VariantKind::Random10, 3, 2}).processing,
              build_instance(raw, {VariantKind::Random10, 3, 2}).processing);
    EXPECT_NE(build_instance(raw, {VariantKind::Base, 3, 0}).processing,
              build_instance(raw, {VariantKind::Base, 4, 0}).processing);
    EXPECT_NE(build_instance(raw, {VariantKind::Random10, 3, 0}).processing,
              build_instance(raw, {VariantKind::Random10, 3, 1}).processing);
}

TEST(BuildInstance, TooSmall) {
    RawTsplib raw{"one", 1, {0}};
    EXPECT_THROW(build_instance(raw, {}), std::invalid_argument);
}

TEST(InstanceJson, RoundTrip) {
    const Instance inst = build_instance(gr17(), {VariantKind::Random20, 9, 4});
    const Instance back = instance_from_json(instance_to_json(inst));
    EXPECT_EQ(back.travel, inst.travel);
    EXPECT_EQ(back.processing, inst.processing);
    EXPECT_EQ(back.m(), inst.m());
    EXPECT_EQ(back.k(), inst.k());
    EXPECT_EQ(back.label, inst.label);
    EXPECT_EQ(back.variant.kind, inst.variant.kind);
    EXPECT_EQ(back.variant.replicate, 4);
}

TEST(InstanceJson, RejectsNegativeProcessing) {
    EXPECT_THROW(make_instance({{0, 1}, {1, 0}}, {-1}, {1, 1}), std::invalid_argument);
}

TEST(SolutionJson, RoundTrip) {
    const Solution sol({{drop(1), drop(2), pick(1)}, {pick(2)}});
    EXPECT_EQ(solution_from_json(solution_to_json(sol, "toy")), sol);
}

}  // namespace
}  // namespace vrprpd
