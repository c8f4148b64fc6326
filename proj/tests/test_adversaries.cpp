#include <cmath>
#include <set>
#include <string>

#include "cslab/adversaries.hpp"
#include "cslab/errors.hpp"

#include "gtest/gtest.h"
#include "json.hpp"

namespace {

using namespace cslab;

InstanceSpec spec(InstanceKind kind, int d, long T, std::uint64_t seed = 1)
{
    InstanceSpec s;
    s.kind = kind;
    s.d = d;
    s.T = T;
    s.seed = seed;
    return s;
}

TEST(Instances, KindNamesRoundTrip)
{
    for (InstanceKind k : {InstanceKind::Fixed, InstanceKind::UniformRandomContexts, InstanceKind::UniformOrthantContexts,
                           InstanceKind::CoordinateCycling, InstanceKind::SubsetInstance})
        EXPECT_EQ(parse_instance_kind(to_string(k)), k);
    EXPECT_THROW(parse_instance_kind("spiral"), ConfigError);
}

TEST(Instances, CoordinateCyclingVisitsEveryAxis)
{
    const Instance inst = generate(spec(InstanceKind::CoordinateCycling, 3, 7));
    for (long t = 0; t < 7; ++t) {
        for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(inst.contexts(i, t), i == t % 3 ? 1.0 : 0.0);
    }
}

TEST(Instances, RandomContextsAreUnitAndDeterministic)
{
    const Instance a = generate(spec(InstanceKind::UniformRandomContexts, 5, 200, 11));
    const Instance b = generate(spec(InstanceKind::UniformRandomContexts, 5, 200, 11));
    const Instance c = generate(spec(InstanceKind::UniformRandomContexts, 5, 200, 12));
    EXPECT_EQ(a.contexts, b.contexts);
    EXPECT_EQ(a.v, b.v);
    EXPECT_NE(a.contexts, c.contexts);
    for (long t = 0; t < 200; ++t) EXPECT_NEAR(a.contexts.col(t).norm(), 1.0, 1e-12);
    for (int i = 0; i < 5; ++i) {
        EXPECT_GT(a.v(i), 0.0);
        EXPECT_LT(a.v(i), 1.0);
    }
}

TEST(Instances, OrthantContextsAreNonNegative)
{
    const Instance a = generate(spec(InstanceKind::UniformOrthantContexts, 4, 100, 3));
    EXPECT_GE(a.contexts.minCoeff(), 0.0);
    for (long t = 0; t < 100; ++t) EXPECT_NEAR(a.contexts.col(t).norm(), 1.0, 1e-12);
}

TEST(Instances, FixedContextsAreNormalisedAndCycled)
{
    InstanceSpec s = spec(InstanceKind::Fixed, 2, 5);
    s.v = Vec::Constant(2, 0.5);
    s.contexts = Mat(2, 2);
    s.contexts << 3, 0, 4, 1;
    const Instance inst = generate(s);
    EXPECT_NEAR(inst.contexts(0, 0), 0.6, 1e-15);
    EXPECT_NEAR(inst.contexts(1, 0), 0.8, 1e-15);
    EXPECT_EQ(inst.contexts.col(2), inst.contexts.col(0));
    EXPECT_EQ(inst.contexts.col(3), inst.contexts.col(1));
    EXPECT_EQ(inst.v, s.v.value());
}

TEST(Instances, RejectsBadSpecs)
{
    InstanceSpec s = spec(InstanceKind::Fixed, 2, 5);
    EXPECT_THROW(generate(s), ConfigError);
    s.v = Vec::Constant(2, 1.5);
    s.contexts = Mat::Identity(2, 2);
    EXPECT_THROW(generate(s), ConfigError);
    s.v = Vec::Constant(3, 0.5);
    EXPECT_THROW(generate(s), ConfigError);
    EXPECT_THROW(generate(spec(InstanceKind::SubsetInstance, 12, 5)), BadDimension);
    EXPECT_THROW(generate(spec(InstanceKind::UniformRandomContexts, 0, 5)), ConfigError);
}

TEST(Instances, SubsetContextsForEightDimensions)
{
    const Instance inst = generate(spec(InstanceKind::SubsetInstance, 8, 50, 4));
    ASSERT_EQ(inst.subsets.size(), 50u);
    EXPECT_EQ(inst.v, Vec::Zero(8));
    for (long t = 0; t < 50; ++t) {
        const auto& X = inst.subsets[static_cast<std::size_t>(t)];
        EXPECT_EQ(X.size(), 2u);
        EXPECT_EQ(std::set<int>(X.begin(), X.end()).size(), 2u);
        EXPECT_NEAR(inst.contexts.col(t).norm(), 1.0, 1e-15);
        for (int i : X) EXPECT_DOUBLE_EQ(inst.contexts(i, t), 1.0 / std::sqrt(2.0));
    }
}

TEST(Instances, SubsetsRarelyOverlapInSixteenDimensions)
{
    const Instance inst = generate(spec(InstanceKind::SubsetInstance, 16, 400, 9));
    // Subsets of size 4 out of 16: a pair shares at most one index with probability
    // (C(12,4) + 4 C(12,3)) / C(16,4) = 1375 / 1820.
    const double frac = subset_overlap_fraction(inst, 1);
    EXPECT_NEAR(frac, 1375.0 / 1820.0, 0.02);
    EXPECT_GT(subset_overlap_fraction(inst, 2), 0.95);
}

TEST(Instances, JsonExportReplays)
{
    const InstanceSpec s = spec(InstanceKind::UniformRandomContexts, 3, 4, 21);
    const Instance inst = generate(s);
    const nlohmann::json j = nlohmann::json::parse(instance_to_json(s, inst));
    EXPECT_EQ(j.at("kind"), "uniform-random-contexts");
    EXPECT_EQ(j.at("d"), 3);
    EXPECT_EQ(j.at("T"), 4);
    EXPECT_EQ(j.at("seed"), 21);
    ASSERT_EQ(j.at("contexts").size(), 4u);
    for (int t = 0; t < 4; ++t)
        for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(j["contexts"][t][i].get<double>(), inst.contexts(i, t));
    for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(j["v"][i].get<double>(), inst.v(i));
}

} // namespace
