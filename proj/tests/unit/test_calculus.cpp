#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "frechet/calculus.hpp"
#include "frechet/errors.hpp"
#include "frechet/maps.hpp"

using namespace frechet;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Linear and affine maps are exact up to rounding. The smallest scheduled step
// is 1e-2/256, so the difference quotient of values near 10 carries roughly
// 1e-16 * 10 / 4e-5 ~ 3e-11 of roundoff before extrapolation.
constexpr double kRoundoff = 1e-9;

GradedSpace seq_space(std::size_t depth = 8) { return GradedSpace(ModelKind::Sequence, geometric_weights(0.5, depth)); }

GradedPoint e(std::size_t n, std::size_t k)
{
    GradedPoint p = GradedPoint::sequence(std::vector<double>(n, 0.0));
    p.data[k] = 1.0;
    return p;
}

}  // namespace

TEST(DirectionalDerivative, LinearMapExact)
{
    const LinearMap L = LinearMap::combination({{2.0, LinearMap::up_shift(6)}, {-1.0, LinearMap::down_shift(6)}});
    const PointMap f = [&L](const GradedPoint& p) { return L(p); };
    const GradedPoint v = GradedPoint::sequence({1, -1, 2, 0.5, 0, 3});
    const GradedPoint x = GradedPoint::sequence({4, 5, -6, 7, 1, 2});
    for (const auto& steps : {default_steps(), std::vector<double>{0.5, 0.25, 0.125}}) {
        const DirectionalDerivative d = directional_derivative(f, x, v, steps);
        for (std::size_t i = 0; i < 6; ++i) {
            EXPECT_NEAR(d.value.data[i], L(v).data[i], kRoundoff);
        }
    }
}

TEST(DirectionalDerivative, TauSineAtZero)
{
    const DirectionalDerivative d = directional_derivative(tau_sine_map(0.1), GradedPoint::sequence(std::vector<double>(5, 0.0)), e(5, 0));
    const std::vector<double> expected{1.0, 0.1, 0, 0, 0};
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_NEAR(d.value.data[i], expected[i], 1e-12);
    }
    EXPECT_LT(d.error, 1e-10);
}

TEST(DirectionalDerivative, ConstantMapIsZero)
{
    const GradedPoint c = GradedPoint::sequence({1, 2, 3});
    const DirectionalDerivative d = directional_derivative([&c](const GradedPoint&) { return c; }, c, e(3, 1));
    EXPECT_TRUE(d.value.is_zero());
}

TEST(DirectionalDerivative, NonFiniteEvaluationThrows)
{
    const PointMap f = [](const GradedPoint& p) {
        GradedPoint q = p;
        q.data[0] = 1.0 / (p.data[0] - p.data[0]);
        return q;
    };
    EXPECT_THROW(directional_derivative(f, e(3, 0), e(3, 0)), EvaluationError);
}

TEST(DirectionalDerivative, AffineIndependentOfBaseAndStep)
{
    const LinearMap L = LinearMap::down_shift(4);
    const GradedPoint c = GradedPoint::sequence({1, 1, 1, 1});
    const PointMap f = [&](const GradedPoint& p) { return L(p) + c; };
    const GradedPoint v = GradedPoint::sequence({0.5, 1, 2, 4});
    const GradedPoint ref = directional_derivative(f, e(4, 0), v).value;
    for (double h : {0.3, 0.01}) {
        const GradedPoint d = directional_derivative(f, 10.0 * e(4, 2), v, {h, h / 2, h / 4}).value;
        for (std::size_t i = 0; i < 4; ++i) {
            EXPECT_NEAR(d.data[i], ref.data[i], kRoundoff);
        }
    }
}

TEST(Jacobian, FiniteDifferenceMatchesAnalytic)
{
    const GradedPoint x = GradedPoint::sequence({0.3, -1.2, 2.0, 0.7, -0.1, 1.5});
    double err = 0.0;
    const Eigen::MatrixXd J = finite_difference_jacobian(tau_sine_map(0.1), x, &err);
    EXPECT_LT((J - tau_sine_jacobian(0.1, x)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT(err, 1e-8);
}

TEST(LineCriterion, Examples)
{
    const LineVerdict a = line_b_differentiable(e(8, 0), 8);
    EXPECT_TRUE(a.bounded);
    EXPECT_EQ(a.M, 1.0);
    const LineVerdict b = line_b_differentiable(periodic_sin(3, 4), 10);
    EXPECT_FALSE(b.bounded);
    EXPECT_NEAR(b.increments[4], 81.0, 1e-9);
    const LineVerdict c = line_b_differentiable(GradedPoint::sequence(std::vector<double>(8, 0.0)), 8);
    EXPECT_TRUE(c.bounded);
    EXPECT_EQ(c.M, 0.0);
}

TEST(BDiffReport, Identity)
{
    const GradedSpace s = seq_space(6);
    const DifferentiabilityReport r = b_diff_report([](const GradedPoint& p) { return p; }, s.zero(6), kInf, s);
    ASSERT_TRUE(r.derivative_bound.has_value());
    EXPECT_EQ(*r.derivative_bound, 1.0);
    EXPECT_NEAR(r.derivative_estimate.lower_bound, 1.0, 1e-12);
    EXPECT_TRUE(r.mean_value_ok);
    EXPECT_NEAR(r.mean_value_worst_slack, 0.0, 1e-12);
    EXPECT_TRUE(r.differentiable);
    EXPECT_TRUE(r.derivative_bounded);
    EXPECT_TRUE(r.derivative_continuous);
}

// The scaled shift 0.1·τ·diag(cos x) does not gain the factor 0.1 in the graded
// metric: Φ saturates, so large basis probes see the bare shift ratio 1/2.
TEST(BDiffReport, TauSineDeviationIsHalfNotTwentieth)
{
    const GradedSpace s = seq_space(8);
    for (double shift : {0.0, 0.4, -1.3}) {
        const GradedPoint x = shift * GradedPoint::sequence(std::vector<double>(8, 1.0));
        const DifferentiabilityReport r = b_diff_report(tau_sine_map(0.1), x, kInf, s);
        ASSERT_TRUE(r.deviation_bound.has_value());
        EXPECT_DOUBLE_EQ(*r.deviation_bound, 0.5);
        EXPECT_LE(r.deviation_estimate.lower_bound, 0.5 + 1e-12);
        EXPECT_GT(r.deviation_estimate.lower_bound, 0.05);
        EXPECT_TRUE(r.mean_value_ok);
        EXPECT_TRUE(r.differentiable);
    }
}

TEST(BDiffReport, MeanValueWithCertifiedBound)
{
    const GradedSpace s = seq_space(8);
    const GradedPoint x = GradedPoint::sequence({0.2, -0.4, 1.0, 0, 0, 0.3, 0, 2});
    const DifferentiabilityReport r = b_diff_report(tau_sine_map(0.1), x, kInf, s, {}, 1.5, std::nullopt, 200);
    EXPECT_EQ(r.mean_value_pairs, 200u);
    EXPECT_GE(r.mean_value_worst_slack, -1e-9);
}

TEST(BDiffReport, CompositionOperatorUnbounded)
{
    const std::size_t B = 8;
    const GradedSpace s(ModelKind::Periodic, geometric_weights(0.5, 16));
    GrowthProbe g;
    for (std::size_t m = 1; m <= B / 4; ++m) {
        g.bases.push_back(periodic_sin(m, B, 0.5));
    }
    g.direction = periodic_cos(0, B, 1e-3);
    ProbePlan plan;
    plan.random_count = 20;
    plan.basis_scales = 5;
    const DifferentiabilityReport r = b_diff_report(composition_operator(4.0, B), periodic_sin(1, B, 0.5), kInf, s, plan, std::nullopt, g, 0);
    EXPECT_FALSE(r.derivative_bounded);
    ASSERT_EQ(r.growth_ratios.size(), 2u);
    EXPECT_GT(r.growth_ratios[1], r.growth_ratios[0]);
}
