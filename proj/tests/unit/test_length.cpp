#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "frechet/calculus.hpp"
#include "frechet/errors.hpp"
#include "frechet/length.hpp"
#include "frechet/probes.hpp"

using namespace frechet;

namespace {

GradedSpace seq_space(std::size_t depth = 12) { return GradedSpace(ModelKind::Sequence, geometric_weights(0.5, depth)); }

GradedPoint e(std::size_t n, std::size_t k)
{
    GradedPoint p = GradedPoint::sequence(std::vector<double>(n, 0.0));
    p.data[k] = 1.0;
    return p;
}

CurveSpec arc(const GradedPoint& a, const GradedPoint& v, const GradedPoint& w)
{
    const double q = std::numbers::pi / 2;
    return closed_form_curve(
        [=](double t) { return a + std::sin(q * t) * v + (1.0 - std::cos(q * t)) * w; },
        [=](double t) { return (q * std::cos(q * t)) * v + (q * std::sin(q * t)) * w; });
}

// Gauge of the radius-r supremum ball by bisection on the metric itself.
double gauge_by_bisection(const GradedSpace& sup, double r, const GradedPoint& v)
{
    if (sup.norm(1e12 * v) <= r) {
        return 0.0;
    }
    double lo = 1e-12, hi = 1e12;
    for (int it = 0; it < 400 && hi / lo > 1 + 1e-15; ++it) {
        const double mid = std::sqrt(lo * hi);
        (sup.norm((1.0 / mid) * v) <= r ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

TEST(Gromov, LineE1IsOne)
{
    const GradedSpace s = seq_space(30);
    const LengthResult r = gromov_length(line_curve(e(30, 0)), s, 1e-9, 60);
    ASSERT_EQ(r.status, LengthResult::Status::Converged);
    EXPECT_NEAR(r.value, 1.0, 1e-6);
    EXPECT_NEAR(s.speed(e(30, 0)), 1.0, 1e-15);
}

TEST(Gromov, ConstantCurveIsZero)
{
    const GradedSpace s = seq_space();
    const LengthResult r = gromov_length(affine_curve(e(12, 3), e(12, 3)), s, 1e-9, 20);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_TRUE(r.finite());
}

TEST(Gromov, GrowingSeminormsDiverge)
{
    const GradedSpace s(ModelKind::Periodic, geometric_weights(0.5, 16));
    const LengthResult r = gromov_length(line_curve(periodic_sin(2, 4)), s, 1e-9, 40);
    EXPECT_EQ(r.status, LengthResult::Status::Divergent);
    EXPECT_FALSE(r.finite());
    EXPECT_GT(r.history.back(), r.history[8] + 4.0);
}

TEST(Gromov, RefinementMonotone)
{
    const GradedSpace s = seq_space();
    const auto pts = random_points(ModelKind::Sequence, 12, 3, 77, 1.0);
    const LengthResult r = gromov_length(arc(pts[0], pts[1], pts[2]), s, 1e-12, 12);
    for (std::size_t k = 1; k < r.history.size(); ++k) {
        EXPECT_GE(r.history[k], r.history[k - 1]);
    }
}

TEST(Gromov, AdditiveUnderConcatenation)
{
    const GradedSpace s = seq_space();
    const auto pts = random_points(ModelKind::Sequence, 12, 3, 78, 1.0);
    const CurveSpec c = arc(pts[0], pts[1], pts[2]);
    const CurveSpec joined = concatenate(restrict_curve(c, 0.0, 0.5), restrict_curve(c, 0.5, 1.0));
    const LengthResult whole = gromov_length(joined, s, 0.0, 10);
    const LengthResult left = gromov_length(restrict_curve(c, 0.0, 0.5), s, 0.0, 10);
    const LengthResult right = gromov_length(restrict_curve(c, 0.5, 1.0), s, 0.0, 10);
    for (std::size_t L = 1; L <= 10; ++L) {
        EXPECT_NEAR(whole.history[L], left.history[L - 1] + right.history[L - 1], 1e-12) << L;
    }
}

TEST(Gromov, ReparametrizationInvariant)
{
    const GradedSpace s = seq_space();
    const auto pts = random_points(ModelKind::Sequence, 12, 3, 79, 1.0);
    const CurveSpec c = arc(pts[0], pts[1], pts[2]);
    const CurveSpec slow = closed_form_curve([c](double t) { return c.position(t * t); },
                                             [c](double t) { return (2 * t) * c.velocity(t * t); });
    // Chord sums of smooth arcs converge linearly (increments halve per level),
    // so the stopping increment is also the size of the remaining tail.
    const double tol = 1e-3;
    const LengthResult a = gromov_length(c, s, tol, 18);
    const LengthResult b = gromov_length(slow, s, tol, 18);
    ASSERT_TRUE(a.finite());
    ASSERT_TRUE(b.finite());
    EXPECT_NEAR(a.value, b.value, 2 * tol);
}

TEST(Gromov, RectifiabilityDichotomy)
{
    const GradedSpace seq = seq_space(16);
    const GradedSpace per(ModelKind::Periodic, geometric_weights(0.5, 16));
    std::vector<GradedPoint> bounded, growing;
    for (std::size_t k = 0; k < 5; ++k) {
        bounded.push_back(e(16, 3 * k));
    }
    bounded.push_back(GradedPoint::sequence(std::vector<double>(16, 0.5)));
    bounded.push_back(periodic_sin(1, 6));
    bounded.push_back(periodic_cos(1, 6, 3.0));
    bounded.push_back(periodic_cos(0, 6, 2.0));
    bounded.push_back(periodic_sin(1, 6, 0.2) + periodic_cos(1, 6, -0.7));
    for (std::size_t k = 2; k <= 6; ++k) {
        growing.push_back(periodic_sin(k, 6));
    }
    growing.push_back(periodic_cos(2, 6, 0.01));
    growing.push_back(periodic_sin(1, 6) + periodic_sin(3, 6, 1e-3));
    growing.push_back(periodic_cos(4, 6, 5.0));
    growing.push_back(periodic_sin(6, 6, 1e-2) + periodic_cos(5, 6));
    growing.push_back(periodic_cos(2, 6) + periodic_sin(2, 6));
    ASSERT_EQ(bounded.size(), 10u);
    ASSERT_EQ(growing.size(), 10u);
    for (const GradedPoint& v : bounded) {
        const GradedSpace& s = v.kind == ModelKind::Sequence ? seq : per;
        EXPECT_TRUE(line_b_differentiable(v, 24).bounded);
        EXPECT_EQ(gromov_length(line_curve(v), s, 1e-9, 60).status, LengthResult::Status::Converged);
    }
    for (const GradedPoint& v : growing) {
        EXPECT_FALSE(line_b_differentiable(v, 24).bounded);
        EXPECT_EQ(gromov_length(line_curve(v), per, 1e-9, 60).status, LengthResult::Status::Divergent);
    }
}

TEST(SmoothLength, Examples)
{
    const GradedSpace s = seq_space(30);
    EXPECT_EQ(smooth_length(affine_curve(e(30, 2), e(30, 2)), s).value, 0.0);
    EXPECT_NEAR(smooth_length(line_curve(e(30, 0)), s).value, 0.5, 1e-15);
    EXPECT_NEAR(smooth_length(line_curve(e(30, 0)), s).value, s.norm(e(30, 0)), 1e-15);
}

TEST(SmoothLength, AffineEqualsMetric)
{
    const GradedSpace s = seq_space();
    const auto as = random_points(ModelKind::Sequence, 12, 20, 80, 1.0);
    const auto bs = random_points(ModelKind::Sequence, 12, 20, 81, 1.0);
    for (std::size_t k = 0; k < as.size(); ++k) {
        EXPECT_NEAR(smooth_length(affine_curve(as[k], bs[k]), s).value, s.distance(as[k], bs[k]), 1e-10);
        // The same path as a generic curve goes through quadrature.
        const GradedPoint a = as[k], d = bs[k] - as[k];
        const CurveSpec c = closed_form_curve([=](double t) { return a + t * d; }, [=](double) { return d; });
        EXPECT_NEAR(smooth_length(c, s).value, s.distance(as[k], bs[k]), 1e-10);
    }
}

TEST(SmoothLength, SubadditiveUnderConcatenation)
{
    const GradedSpace s = seq_space();
    const auto pts = random_points(ModelKind::Sequence, 12, 9, 82, 1.0);
    for (std::size_t k = 0; k < 9; k += 3) {
        const CurveSpec c = arc(pts[k], pts[k + 1], pts[k + 2]);
        const CurveSpec a = restrict_curve(c, 0.0, 0.4);
        const CurveSpec b = restrict_curve(c, 0.4, 1.0);
        EXPECT_LE(smooth_length(concatenate(a, b), s).value, smooth_length(a, s).value + smooth_length(b, s).value + 1e-12);
    }
}

TEST(MetricLength, Examples)
{
    const GradedSpace s = seq_space(30);
    EXPECT_EQ(metric_length(affine_curve(e(30, 1), e(30, 1)), s).value, 0.0);
    // m_{p+1}(e_1) = 2^p - 1, so l = Σ_{p>=1} 2^{-(p+1)} (1 - 2^{-p}) = 1/3.
    EXPECT_NEAR(metric_length(line_curve(e(30, 0)), s).value, 1.0 / 3.0, 1e-12);
}

TEST(MetricLength, LineIsWeightedGaugeSum)
{
    const GradedSpace s = seq_space();
    const GradedSpace sup = s.with_flavor(Flavor::Supremum);
    for (const GradedPoint& v : random_points(ModelKind::Sequence, 12, 5, 83, 1.0)) {
        double expected = 0.0;
        for (int p = 0; p < 60; ++p) {
            const double m = gauge_by_bisection(sup, std::ldexp(1.0, -(p + 1)), v);
            expected += std::ldexp(1.0, -(p + 1)) * m / (1 + m);
        }
        EXPECT_NEAR(metric_length(line_curve(v), s).value, expected, 1e-12);
    }
}

TEST(MetricLength, BelowSmoothLengthOnSeededCurves)
{
    const GradedSpace s = seq_space();
    const auto P = random_points(ModelKind::Sequence, 12, 600, 84, 1.0);
    std::size_t tested = 0;
    for (std::size_t k = 0; k < 200; ++k) {
        const GradedPoint &a = P[3 * k], &b = P[3 * k + 1], &c = P[3 * k + 2];
        CurveSpec curve;
        switch (k % 3) {
        case 0: curve = line_curve(a); break;
        case 1: curve = affine_curve(a, b); break;
        default: curve = arc(a, b, c); break;
        }
        const LengthResult l = metric_length(curve, s);
        const LengthResult L = smooth_length(curve, s);
        ASSERT_TRUE(l.finite());
        ASSERT_TRUE(L.finite());
        EXPECT_LE(l.value, L.value + 1e-9) << k;
        ++tested;
    }
    EXPECT_EQ(tested, 200u);
}

// The ordering is not scale-free. Radius-2^{-p} gauges grow like 2^p·|v| while
// Φ(δ_p) stays near |v|, so short enough velocities invert it.
TEST(MetricLength, SmallVelocitiesExceedSmoothLength)
{
    const GradedSpace s = seq_space();
    const CurveSpec c = line_curve(0.01 * e(12, 0));
    EXPECT_GT(metric_length(c, s).value, 2.0 * smooth_length(c, s).value);
}

TEST(Arclength, LineHasUnitSpeedAfterReparam)
{
    const GradedSpace s = seq_space();
    const GradedPoint v = GradedPoint::sequence({1, -2, 0.5, 0, 0, 0, 0, 0, 0, 0, 0, 3});
    const CurveSpec r = arclength_reparam(line_curve(v), s);
    EXPECT_NEAR(r.t1, s.speed(v), 1e-12);
    for (int j = 0; j <= 10; ++j) {
        const double sigma = r.t1 * j / 10.0;
        EXPECT_NEAR(s.speed(r.velocity(sigma)), 1.0, 1e-6);
    }
}

TEST(Arclength, UnitSpeedCurveUnchanged)
{
    const GradedSpace s = seq_space();
    const GradedPoint v0 = GradedPoint::sequence({0.3, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    const GradedPoint v = (1.0 / s.speed(v0)) * v0;
    const CurveSpec c = line_curve(v);
    const CurveSpec r = arclength_reparam(c, s);
    EXPECT_NEAR(r.t1, 1.0, 1e-12);
    for (double t : {0.0, 0.3, 0.77, 1.0}) {
        for (std::size_t i = 0; i < 12; ++i) {
            EXPECT_NEAR(r.position(t).data[i], c.position(t).data[i], 1e-9);
        }
    }
}

TEST(Arclength, GenericCurveUnitSpeedAtNodes)
{
    const GradedSpace s = seq_space();
    const auto pts = random_points(ModelKind::Sequence, 12, 3, 85, 1.0);
    const CurveSpec r = arclength_reparam(arc(pts[0], pts[1], pts[2]), s);
    for (int j = 0; j <= 16; ++j) {
        EXPECT_NEAR(s.speed(r.velocity(r.t1 * j / 16.0)), 1.0, 1e-6);
    }
}

TEST(Arclength, VanishingVelocityRejected)
{
    const GradedSpace s = seq_space();
    const GradedPoint v = e(12, 0);
    const CurveSpec c = closed_form_curve([v](double t) { return (t * t) * v; }, [v](double t) { return (2 * t) * v; });
    EXPECT_THROW(arclength_reparam(c, s), SingularVelocity);
}

TEST(Minimality, AffinePathsAreMinimal)
{
    const GradedSpace s = seq_space();
    const auto ab = random_points(ModelKind::Sequence, 12, 2, 86, 1.0);
    const auto ws = random_points(ModelKind::Sequence, 12, 50, 87, 1.0);
    const MinimalityResult r = affine_minimality_probe(ab[0], ab[1], s, ws, 0.1);
    EXPECT_TRUE(r.holds);
    EXPECT_GE(r.margin, -1e-9);
    EXPECT_EQ(r.margins.size(), 50u);

    const MinimalityResult z = affine_minimality_probe(ab[0], ab[1], s, {s.zero(12)}, 0.1);
    EXPECT_NEAR(z.margin, 0.0, 1e-12);
    const MinimalityResult flat = affine_minimality_probe(ab[0], ab[1], s, ws, 0.0);
    for (double m : flat.margins) {
        EXPECT_NEAR(m, 0.0, 1e-12);
    }
}
