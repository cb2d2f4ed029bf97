#include "frechet/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "frechet/errors.hpp"
#include "frechet/probes.hpp"

namespace frechet {

std::vector<double> default_steps()
{
    std::vector<double> h(9);
    h[0] = 1e-2;
    for (std::size_t i = 1; i < h.size(); ++i) {
        h[i] = 0.5 * h[i - 1];
    }
    return h;
}

namespace {

GradedPoint central_difference(const PointMap& f, const GradedPoint& x, const GradedPoint& v, double h)
{
    GradedPoint d = f(x + h * v) - f(x - h * v);
    d *= 0.5 / h;
    if (!d.all_finite()) {
        throw EvaluationError("directional_derivative: non-finite difference quotient at step " +
                              std::to_string(h));
    }
    return d;
}

// (q^p D_fine - D_coarse) / (q^p - 1)
GradedPoint extrapolate(const GradedPoint& coarse, const GradedPoint& fine, double qp)
{
    GradedPoint r = qp * fine - coarse;
    r *= 1.0 / (qp - 1.0);
    return r;
}

// Entries the difference quotients cannot resolve are snapped to exact 0, and
// diagonal entries to exact 1, so structure in df and in df - I (a strictly
// lower band, say) survives into the ladder bound.
void snap_unresolved(Eigen::MatrixXd& J, double richardson_error)
{
    const double floor = std::max(8.0 * richardson_error, 1e-9 * (1.0 + J.cwiseAbs().maxCoeff()));
    J = (J.array().abs() <= floor).select(0.0, J);
    for (Eigen::Index i = 0; i < std::min(J.rows(), J.cols()); ++i) {
        if (std::abs(J(i, i) - 1.0) <= floor) {
            J(i, i) = 1.0;
        }
    }
}

}  // namespace

DirectionalDerivative directional_derivative(const PointMap& f, const GradedPoint& x,
                                             const GradedPoint& v, const std::vector<double>& steps)
{
    require_compatible(x, v);
    if (steps.empty()) {
        throw DomainError("directional_derivative: no steps");
    }
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i] > 0.0) || (i > 0 && !(steps[i] < steps[i - 1]))) {
            throw DomainError("directional_derivative: steps must be positive and decreasing");
        }
    }
    const std::size_t n = steps.size();
    if (n < 3) {
        DirectionalDerivative out{central_difference(f, x, v, steps.back()), 0.0};
        if (n == 2) {
            const GradedPoint prev = central_difference(f, x, v, steps[0]);
            for (std::size_t i = 0; i < prev.data.size(); ++i) {
                out.error = std::max(out.error, std::abs(out.value.data[i] - prev.data[i]));
            }
        }
        return out;
    }
    // Every step is evaluated so a blow-up anywhere in the schedule is reported.
    std::vector<GradedPoint> D;
    for (double h : steps) {
        D.push_back(central_difference(f, x, v, h));
    }
    const double q = steps[n - 2] / steps[n - 1];
    const double q2 = q * q;
    const GradedPoint R1 = extrapolate(D[n - 3], D[n - 2], q2);
    const GradedPoint R2 = extrapolate(D[n - 2], D[n - 1], q2);
    DirectionalDerivative out{extrapolate(R1, R2, q2 * q2), 0.0};
    for (std::size_t i = 0; i < R1.data.size(); ++i) {
        out.error = std::max(out.error, std::abs(R2.data[i] - R1.data[i]));
    }
    return out;
}

Eigen::MatrixXd finite_difference_jacobian(const PointMap& f, const GradedPoint& x, double* max_error)
{
    const std::size_t n = x.data.size();
    const GradedPoint y0 = f(x);
    Eigen::MatrixXd J(static_cast<Eigen::Index>(y0.data.size()), static_cast<Eigen::Index>(n));
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        GradedPoint e = GradedPoint::zero_like(x);
        e.data[j] = 1.0;
        const DirectionalDerivative d = directional_derivative(f, x, e);
        err = std::max(err, d.error);
        for (std::size_t i = 0; i < d.value.data.size(); ++i) {
            J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d.value.data[i];
        }
    }
    snap_unresolved(J, err);
    if (max_error) {
        *max_error = err;
    }
    return J;
}

LineVerdict line_b_differentiable(const GradedPoint& v, std::size_t depth)
{
    LineVerdict out;
    out.increments = level_seminorms(v, depth);
    for (double s : out.increments) {
        out.M = std::max(out.M, s);
    }
    if (depth < 2) {
        return out;
    }
    const std::size_t start = depth / 2;
    bool increasing = true;
    for (std::size_t k = start + 1; k < depth; ++k) {
        if (!(out.increments[k] > out.increments[k - 1])) {
            increasing = false;
            break;
        }
    }
    out.bounded = !increasing;
    return out;
}

DifferentiabilityReport b_diff_report(const PointMap& f, const GradedPoint& x, double R,
                                      const GradedSpace& space, const ProbePlan& plan,
                                      std::optional<double> certified_bound,
                                      const std::optional<GrowthProbe>& growth,
                                      std::size_t segment_pairs)
{
    DifferentiabilityReport rep;
    rep.base = x;
    rep.radius = R;
    const std::size_t n = x.data.size();

    rep.jacobian = Eigen::MatrixXd(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        GradedPoint e = GradedPoint::zero_like(x);
        e.data[j] = 1.0;
        DirectionalDerivative d = directional_derivative(f, x, e);
        if (d.value.data.size() != n) {
            throw ShapeError("b_diff_report: map must preserve dimension");
        }
        rep.max_richardson_error = std::max(rep.max_richardson_error, d.error);
        for (std::size_t i = 0; i < n; ++i) {
            rep.jacobian(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d.value.data[i];
        }
        rep.table.push_back(std::move(d));
    }
    snap_unresolved(rep.jacobian, rep.max_richardson_error);
    const double scale = 1.0 + rep.jacobian.cwiseAbs().maxCoeff();
    rep.differentiable = rep.max_richardson_error <= 1e-6 * scale;

    const LinearMap J = LinearMap::dense(x.kind, rep.jacobian);
    const LinearMap I = LinearMap::identity(x.kind, n);
    const LinearMap dev = LinearMap::combination({{1.0, J}, {-1.0, I}});
    rep.derivative_estimate = rbound_estimate(J, space, R, plan);
    rep.derivative_bound = rep.derivative_estimate.analytic_upper;
    rep.deviation_estimate = rbound_estimate(dev, space, R, plan);
    rep.deviation_bound = rep.deviation_estimate.analytic_upper;

    // Mean-value inequality on short segments around x.
    const std::optional<double> L = certified_bound ? certified_bound : rep.derivative_bound;
    if (L && segment_pairs > 0) {
        const auto ys = random_points(x.kind, n, segment_pairs, plan.seed + 1, 0.1);
        const auto zs = random_points(x.kind, n, segment_pairs, plan.seed + 2, 0.1);
        rep.mean_value_worst_slack = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < segment_pairs; ++k) {
            const GradedPoint y = x + ys[k];
            const GradedPoint z = x + zs[k];
            const double slack = *L * space.distance(y, z) - space.distance(f(y), f(z));
            rep.mean_value_worst_slack = std::min(rep.mean_value_worst_slack, slack);
            ++rep.mean_value_pairs;
        }
        rep.mean_value_ok = rep.mean_value_worst_slack >= -1e-9;
    }

    // Lipschitz-style continuity of the Jacobian in the base point.
    const auto shifts = random_points(x.kind, n, 3, plan.seed + 3, 1e-3);
    for (const GradedPoint& s : shifts) {
        const GradedPoint y = x + s;
        const Eigen::MatrixXd Jy = finite_difference_jacobian(f, y);
        const double d = space.distance(y, x);
        if (d > 0.0) {
            rep.continuity_lipschitz = std::max(rep.continuity_lipschitz, (Jy - rep.jacobian).norm() / d);
        }
    }
    rep.derivative_continuous = std::isfinite(rep.continuity_lipschitz);

    rep.derivative_bounded = std::isfinite(rep.derivative_estimate.lower_bound);
    if (growth) {
        const SizeFn size = [&space](const GradedPoint& p) { return space.norm(p); };
        for (const GradedPoint& b : growth->bases) {
            const GradedPoint q = f(b + growth->direction) - f(b);
            rep.growth_ratios.push_back(size(q) / size(growth->direction));
        }
        if (monotone_growth(rep.growth_ratios)) {
            rep.derivative_bounded = false;
        }
    }
    return rep;
}

}  // namespace frechet
