#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

#include "frechet/models.hpp"
#include "frechet/operators.hpp"

namespace frechet {

/// 1e-2 halved 8 times.
std::vector<double> default_steps();

struct DirectionalDerivative {
    GradedPoint value;
    double error = 0.0;  // max |R2 - R1| over coordinates
};

/// Central differences at each step, Richardson-extrapolated over the last three.
/// Steps must decrease by a constant ratio.
/// @throws EvaluationError on non-finite evaluations
DirectionalDerivative directional_derivative(const PointMap& f, const GradedPoint& x,
                                             const GradedPoint& v,
                                             const std::vector<double>& steps = default_steps());

/// Jacobian by directional derivatives along the coordinate basis. Entries below
/// the resolvable floor (8x the Richardson error, or 1e-9 relative) become exact
/// zeros; diagonal entries that close to 1 become exact ones.
Eigen::MatrixXd finite_difference_jacobian(const PointMap& f, const GradedPoint& x,
                                           double* max_error = nullptr);

struct LineVerdict {
    bool bounded = true;
    double M = 0.0;                  // max per-level seminorm
    std::vector<double> increments;  // per-level seminorms, the growth witness
};

/// Bounded iff the per-level seminorms show no monotone increase over the last
/// half of the levels.
LineVerdict line_b_differentiable(const GradedPoint& v, std::size_t depth);

/// Base points of growing sharpness and one fixed direction; the difference
/// quotients at those bases expose derivatives that are not uniformly bounded.
struct GrowthProbe {
    std::vector<GradedPoint> bases;
    GradedPoint direction;
};

struct DifferentiabilityReport {
    GradedPoint base;
    double radius = 0.0;
    std::vector<DirectionalDerivative> table;  // one per coordinate direction
    Eigen::MatrixXd jacobian;
    double max_richardson_error = 0.0;

    RBoundEstimate derivative_estimate;      // ⟨df(x)⟩_R from probes
    std::optional<double> derivative_bound;  // ladder bound on the Jacobian
    RBoundEstimate deviation_estimate;       // ⟨df(x) - I⟩_R from probes
    std::optional<double> deviation_bound;

    std::size_t mean_value_pairs = 0;
    double mean_value_worst_slack = 0.0;  // min of bound·d(y,z) - d(f(y),f(z))
    bool mean_value_ok = true;

    double continuity_lipschitz = 0.0;  // max ‖J(y) - J(x)‖_F / d(y, x)
    std::vector<double> growth_ratios;

    bool differentiable = true;
    bool derivative_bounded = true;
    bool derivative_continuous = true;
};

/// Assemble directional derivatives at x, bound the derivative, and check the
/// mean-value inequality d(f(y), f(z)) <= L d(y, z) on sampled segments near x.
/// L is `certified_bound` when given, else the ladder bound of df(x).
DifferentiabilityReport b_diff_report(const PointMap& f, const GradedPoint& x, double R,
                                      const GradedSpace& space, const ProbePlan& plan = {},
                                      std::optional<double> certified_bound = std::nullopt,
                                      const std::optional<GrowthProbe>& growth = std::nullopt,
                                      std::size_t segment_pairs = 50);

}  // namespace frechet
