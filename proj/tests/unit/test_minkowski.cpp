#include <gtest/gtest.h>

#include <cmath>

#include "frechet/errors.hpp"
#include "frechet/minkowski.hpp"
#include "frechet/probes.hpp"

using namespace frechet;

namespace {

GradedSpace sup_space(std::size_t depth = 12)
{
    return GradedSpace(ModelKind::Sequence, geometric_weights(0.5, depth), Flavor::Supremum);
}

GradedPoint e(std::size_t n, std::size_t k)
{
    GradedPoint p = GradedPoint::sequence(std::vector<double>(n, 0.0));
    p.data[k] = 1.0;
    return p;
}

}  // namespace

TEST(Minkowski, ClosedFormExamples)
{
    const GradedSpace s = sup_space();
    EXPECT_NEAR(minkowski_functional(s, 4, e(12, 0), 1e-12), 1.0, 1e-9);
    EXPECT_NEAR(ball_gauge(s, 0.25, e(12, 0)), 1.0, 1e-15);
    EXPECT_EQ(minkowski_functional(s, 4, s.zero(12), 1e-12), 0.0);
    EXPECT_NEAR(minkowski_functional(s, 4, 2.0 * e(12, 0), 1e-12), 2.0, 2e-9);
}

TEST(Minkowski, DegenerateBall)
{
    const GradedSpace s = sup_space();
    EXPECT_THROW(minkowski_functional(s, 1, e(12, 0), 1e-12), DegenerateBall);
    EXPECT_THROW(minkowski_functional(s, 2, e(12, 0), 1e-12), DegenerateBall);
    EXPECT_NO_THROW(minkowski_functional(s, 3, e(12, 0), 1e-12));
}

TEST(Minkowski, BisectionAgreesWithClosedForm)
{
    const GradedSpace s = sup_space();
    const auto pts = random_points(ModelKind::Sequence, 12, 100, 31, 1.0);
    for (std::size_t i : {3u, 4u, 7u, 16u, 100u}) {
        for (const GradedPoint& v : pts) {
            const double m = minkowski_functional(s, i, v, 1e-12);
            EXPECT_NEAR(m, ball_gauge(s, 1.0 / static_cast<double>(i), v), 1e-9 * m);
            const double d = s.norm((1.0 / m) * v);
            EXPECT_NEAR(d, 1.0 / static_cast<double>(i), 1e-9);
        }
    }
}

TEST(Minkowski, HomogeneousSubadditiveMonotone)
{
    const GradedSpace s = sup_space();
    const auto us = random_points(ModelKind::Sequence, 12, 500, 41, 1.0);
    const auto vs = random_points(ModelKind::Sequence, 12, 500, 42, 3.0);
    for (std::size_t k = 0; k < us.size(); ++k) {
        const GradedPoint& u = us[k];
        const GradedPoint& v = vs[k];
        const double mu = minkowski_functional(s, 8, u, 1e-12);
        const double mv = minkowski_functional(s, 8, v, 1e-12);
        const double c = -0.1 * static_cast<double>(k % 50) - 0.05;
        EXPECT_NEAR(minkowski_functional(s, 8, c * u, 1e-12), std::abs(c) * mu, 1e-9 * std::abs(c) * mu);
        EXPECT_LE(minkowski_functional(s, 8, u + v, 1e-12), mu + mv + 1e-9);
        EXPECT_LE(minkowski_functional(s, 4, u, 1e-12), mu * (1 + 1e-12));
        EXPECT_LE(mu, minkowski_functional(s, 16, u, 1e-12) * (1 + 1e-12));
    }
}

TEST(Minkowski, DyadicFamily)
{
    const GradedSpace s = sup_space();
    const GradedPoint v = GradedPoint::sequence({1, -2, 0.5, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    const auto fam = dyadic_minkowski_family(s)(v, 6);
    ASSERT_EQ(fam.size(), 6u);
    for (std::size_t n = 0; n < 6; ++n) {
        EXPECT_EQ(fam[n], dyadic_minkowski(s, n, v));
        EXPECT_EQ(fam[n], ball_gauge(s, std::ldexp(1.0, -static_cast<int>(n)), v));
    }
    // Radius 1 and 1/2 do not constrain the ball.
    EXPECT_EQ(fam[0], 0.0);
    EXPECT_EQ(fam[1], 0.0);
}

TEST(Tame, FamilyAgainstItself)
{
    const GradedSpace s = sup_space();
    const auto groups = tame_probe_groups(ModelKind::Sequence, 12, 50, log_spaced(1e-2, 1e2, 5), 7);
    const TameEstimate t = tame_grade_estimate(ladder_family(s), ladder_family(s), groups, 12, 4);
    ASSERT_TRUE(t.satisfied);
    EXPECT_EQ(t.base, 0u);
    EXPECT_EQ(t.grade, 0u);
    for (double c : t.constants) {
        EXPECT_EQ(c, 1.0);
    }
}

TEST(Tame, LadderAgainstDyadicMinkowski)
{
    const GradedSpace s = sup_space();
    const auto groups = tame_probe_groups(ModelKind::Sequence, 12, 488, log_spaced(1e-3, 1e3, 8), 20240611);
    const TameEstimate t = tame_grade_estimate(ladder_family(s), dyadic_minkowski_family(s), groups, 12, 6);
    ASSERT_TRUE(t.satisfied) << t.reason;
    EXPECT_LE(t.grade, 6u);
    for (double c : t.constants) {
        EXPECT_TRUE(std::isfinite(c));
    }
    EXPECT_EQ(t.stability_threshold, 10.0);
}

TEST(Tame, NonlinearFamilyFalsified)
{
    const GradedSpace s = sup_space();
    const SeminormFamily a = ladder_family(s);
    const SeminormFamily b = [&a](const GradedPoint& v, std::size_t levels) {
        auto out = a(v, levels);
        for (std::size_t n = 0; n < out.size(); ++n) {
            out[n] = std::exp(static_cast<double>(n)) * out[n] * out[n];
        }
        return out;
    };
    const auto groups = tame_probe_groups(ModelKind::Sequence, 12, 50, log_spaced(1e-3, 1e3, 8), 3);
    const TameEstimate t = tame_grade_estimate(a, b, groups, 12, 4);
    EXPECT_FALSE(t.satisfied);
    EXPECT_FALSE(t.reason.empty());
    EXPECT_FALSE(t.witness.data.empty());
}
