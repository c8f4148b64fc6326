#include <algorithm>
#include <cmath>
#include <string>

#include "cslab/audit.hpp"
#include "cslab/harness.hpp"
#include "cslab/intrinsic.hpp"
#include "cslab/policies.hpp"
#include "cslab/verify.hpp"

#include "gtest/gtest.h"

namespace {

using namespace cslab;

Vec random_unit(int d, Rng& rng)
{
    Vec u(d);
    for (int i = 0; i < d; ++i) u(i) = rng.normal();
    return u.normalized();
}

Vec random_point(const Polytope& P, Rng& rng)
{
    // Random convex combination of the vertices.
    const Mat& X = P.vertex_matrix();
    Vec w(X.cols());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = -std::log(rng.uniform_open());
    return X * (w / w.sum());
}

class RandomCuts : public ::testing::TestWithParam<int> {};

TEST_P(RandomCuts, KeepWitnessAndMatchBruteForce)
{
    const int d = GetParam();
    Rng rng(Rng::derive(77, static_cast<std::uint64_t>(d)));
    for (int trial = 0; trial < 10; ++trial) {
        Polytope S = Polytope::unit_cube(d);
        const Vec v = random_point(S, rng);
        for (int t = 0; t < 12; ++t) {
            const Vec u = random_unit(d, rng);
            const DirectionalExtent e = extent(S, u);
            const double p = e.lo + rng.uniform() * e.width;
            const bool keep_upper = u.dot(v) >= p;
            S = keep_upper ? upper_part(S, u, p) : lower_part(S, u, p);
            ASSERT_FALSE(S.empty());
            EXPECT_TRUE(S.contains(v));
        }
        const Mat brute = enumerate_vertices_bruteforce(d, S.halfspaces());
        ASSERT_EQ(brute.cols(), S.vertex_matrix().cols());
        EXPECT_LE((brute - S.vertex_matrix()).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST_P(RandomCuts, ExtentMatchesVertices)
{
    const int d = GetParam();
    Rng rng(Rng::derive(78, static_cast<std::uint64_t>(d)));
    for (int trial = 0; trial < 10; ++trial) {
        const Polytope P = random_clipped_cube(d, 6, rng);
        const Vec u = random_unit(d, rng);
        const DirectionalExtent e = extent(P, u);
        const Vec dots = u.transpose() * P.vertex_matrix();
        EXPECT_NEAR(e.lo, dots.minCoeff(), 1e-12);
        EXPECT_NEAR(e.hi, dots.maxCoeff(), 1e-12);
        EXPECT_NEAR(e.width, e.hi - e.lo, 1e-15);
    }
}

TEST_P(RandomCuts, ClippingIsIdempotent)
{
    const int d = GetParam();
    Rng rng(Rng::derive(79, static_cast<std::uint64_t>(d)));
    for (int trial = 0; trial < 10; ++trial) {
        const Polytope P = random_clipped_cube(d, 4, rng);
        const Vec u = random_unit(d, rng);
        const DirectionalExtent e = extent(P, u);
        const Halfspace h{u, 0.5 * (e.lo + e.hi)};
        const Polytope once = clip(P, h);
        const Polytope twice = clip(once, h);
        ASSERT_EQ(once.vertex_count(), twice.vertex_count());
        EXPECT_LE((once.vertex_matrix() - twice.vertex_matrix()).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST_P(RandomCuts, IntrinsicVolumesShrinkUnderCuts)
{
    const int d = GetParam();
    Rng rng(Rng::derive(80, static_cast<std::uint64_t>(d)));
    const IntrinsicEstimator est(d, 1000, 5);
    for (int trial = 0; trial < 5; ++trial) {
        const Polytope P = random_clipped_cube(d, 4, rng);
        const Vec u = random_unit(d, rng);
        const DirectionalExtent e = extent(P, u);
        const Polytope half = lower_part(P, u, e.lo + 0.6 * e.width);
        for (int j = 1; j <= d; ++j) EXPECT_LE(est(half, j).value, est(P, j).value * (1.0 + 1e-12)) << "j=" << j;
    }
}

TEST_P(RandomCuts, VolumeStaysAdditiveOnTinyBodies)
{
    // Long games shrink the knowledge set to a sliver with clusters of nearly coincident
    // vertices; every cut must still split the volume exactly.
    const int d = GetParam();
    Rng rng(Rng::derive(81, static_cast<std::uint64_t>(d)));
    Polytope S = Polytope::unit_cube(d);
    const Vec v = random_point(S, rng);
    for (int t = 0; t < 400; ++t) {
        Vec u = random_unit(d, rng).cwiseAbs();
        u.normalize();
        const DirectionalExtent e = extent(S, u);
        // Below this width the set is under the resolution the policies work at.
        if (e.width < 1e-5) break;
        const double p = e.lo + rng.uniform() * e.width;
        if (t % 5 == 0) {
            const double V = polytope_measures(S).volume;
            const double Vu = polytope_measures(upper_part(S, u, p)).volume;
            const double Vl = polytope_measures(lower_part(S, u, p)).volume;
            ASSERT_NEAR(Vu + Vl, V, 1e-7 * V) << "t=" << t << " vertices=" << S.vertex_count();
        }
        S = u.dot(v) >= p ? upper_part(S, u, p) : lower_part(S, u, p);
    }
}

INSTANTIATE_TEST_SUITE_P(Dimensions, RandomCuts, ::testing::Values(2, 3, 4));

// Every policy keeps the hidden vector feasible and guesses inside the current extent.
class PolicyGames : public ::testing::TestWithParam<std::string> {};

TEST_P(PolicyGames, GuessesStayInsideTheExtent)
{
    const PolicyInfo& info = policy_info(GetParam());
    const int d = info.fixed_dim > 0 ? info.fixed_dim : 3;
    PolicyOptions opt;
    opt.horizon = 200;
    opt.lower_end_below_horizon = info.family == PolicyFamily::Pricing;
    auto pol = make_policy(info.name, d, opt);
    const LossSpec loss = info.family == PolicyFamily::Pricing ? LossSpec::pricing() : LossSpec::symmetric();
    Rng rng(31);
    Polytope S = Polytope::unit_cube(d);
    const Vec v = random_point(S, rng);
    for (int t = 1; t <= 40; ++t) {
        Vec u = random_unit(d, rng);
        if (loss.pricing_like()) u = u.cwiseAbs();
        const DirectionalExtent e = extent(S, u);
        RoundOutcome out = play_round(S, v, u, *pol, loss, t);
        EXPECT_GE(out.record.guess, e.lo - 1e-12);
        EXPECT_LE(out.record.guess, e.hi + 1e-12);
        EXPECT_TRUE(out.state.contains(v));
        if (!loss.pricing_like()) EXPECT_LE(out.record.loss, e.width + 1e-12);
        S = out.state;
    }
}

INSTANTIATE_TEST_SUITE_P(Catalog, PolicyGames,
                         ::testing::Values("midpoint1d", "kl1d", "sym2d", "price2d", "widthhalf", "volhalf", "symsearch",
                                           "pricesearch"));

// Audited games: every per-round invariant holds on several seeds.
struct AuditCase {
    std::string policy;
    std::string loss;
    std::string kind;
    int d;
    long T;
};

class AuditedGames : public ::testing::TestWithParam<AuditCase> {};

TEST_P(AuditedGames, NoInvariantViolations)
{
    const AuditCase& c = GetParam();
    for (int seed = 1; seed <= 3; ++seed) {
        const std::string text = "policy = " + c.policy + "\nloss = " + c.loss + "\ninstance.kind = " + c.kind +
                                 "\ninstance.d = " + std::to_string(c.d) + "\ninstance.T = " + std::to_string(c.T) +
                                 "\ninstance.seed = " + std::to_string(seed) + "\naudit = true\n";
        const RunResult r = run(config_from(parse_key_values(text)));
        ASSERT_TRUE(r.ok()) << r.summary.status;
        EXPECT_EQ(r.summary.violations, 0) << summary_json(r.summary, false);
        EXPECT_GT(r.summary.checks.size(), 2u);
    }
}

INSTANTIATE_TEST_SUITE_P(
    Policies, AuditedGames,
    ::testing::Values(AuditCase{"sym2d", "symmetric", "uniform-random-contexts", 2, 300},
                      AuditCase{"price2d", "pricing", "uniform-orthant-contexts", 2, 300},
                      AuditCase{"widthhalf", "symmetric", "uniform-random-contexts", 3, 100},
                      AuditCase{"volhalf", "symmetric", "uniform-random-contexts", 3, 100},
                      AuditCase{"symsearch", "symmetric", "uniform-random-contexts", 3, 150},
                      AuditCase{"symsearch", "power", "coordinate-cycling", 2, 100},
                      AuditCase{"pricesearch", "pricing", "uniform-orthant-contexts", 2, 300},
                      AuditCase{"pricesearch", "one-sided", "uniform-orthant-contexts", 3, 100}),
    [](const ::testing::TestParamInfo<AuditCase>& info) {
        std::string name = info.param.policy + "_" + info.param.loss + "_d" + std::to_string(info.param.d);
        std::replace(name.begin(), name.end(), '-', '_');
        return name;
    });

TEST(Potentials, DropRateAndBucketCap)
{
    // Frozen from an independent high-precision evaluation.
    EXPECT_NEAR(potential_drop_rate(1, 0.75), 0.25, 1e-15);
    EXPECT_NEAR(potential_drop_rate(2, 0.75), 0.267949192431123, 1e-14);
    EXPECT_NEAR(potential_drop_rate(3, 0.75), 0.285303372314392, 1e-14);
    EXPECT_NEAR(bucket_cap(3, 1000, 4.0 / 3.0), 7.933032563604250, 1e-12);
    EXPECT_NEAR(bucket_cap(3, 10000, 4.0 / 3.0), 8.666735063921108, 1e-12);
}

TEST(Potentials, PlanarPotentialOfTheSquare)
{
    const double C = (1.0 - std::sqrt(0.5)) / 2.0;
    EXPECT_NEAR(planar_potential(Polytope::unit_cube(2)), 4.0 + 1.0 / C, 1e-12);
}

} // namespace
