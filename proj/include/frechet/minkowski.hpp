#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "frechet/models.hpp"

namespace frechet {

/// Gauge of the closed supremum-metric ball of the given radius, in closed form:
/// max over levels q with α_q > radius of δ_q(v) / Φ^{-1}(radius/α_q).
/// Returns 0 when no level constrains the ball.
double ball_gauge(const GradedSpace& space, double radius, const GradedPoint& v);

/// Minkowski functional of U_i = closed supremum ball of radius 1/i, found by
/// log-space bisection on the metric to relative tolerance tol.
/// @throws DegenerateBall if 1/i >= α_1 (the ball is the whole space)
double minkowski_functional(const GradedSpace& space, std::size_t i, const GradedPoint& v, double tol);

/// Gauge of the supremum ball of radius 2^{-n}.
double dyadic_minkowski(const GradedSpace& space, std::size_t n, const GradedPoint& v);

/// Per-level values of a seminorm family on one point, indices 0..levels-1.
using SeminormFamily = std::function<std::vector<double>(const GradedPoint&, std::size_t levels)>;

/// δ_n of the space's ladder.
SeminormFamily ladder_family(const GradedSpace& space);

/// n -> gauge of the radius 2^{-n} supremum ball.
SeminormFamily dyadic_minkowski_family(const GradedSpace& space);

struct TameEstimate {
    bool satisfied = false;
    std::size_t base = 0;   // b
    std::size_t grade = 0;  // r
    // C_n for n = base+1 .. levels-grade-1.
    std::vector<double> constants;
    double stability_threshold = 10.0;
    // Falsification witness.
    GradedPoint witness;
    std::size_t witness_level = 0;
    std::string reason;
};

/// Probe groups sharing directions, one group per magnitude. Directions are the
/// basis vectors followed by `random_count` seeded unit-norm random vectors.
std::vector<std::vector<GradedPoint>> tame_probe_groups(ModelKind kind, std::size_t dim,
                                                        std::size_t random_count,
                                                        const std::vector<double>& magnitudes,
                                                        std::uint64_t seed);

/// Smallest grade r (then base b) with a_n <= C_n b_{n+r} for all n > b on every
/// probe, C_n finite and stable: the per-magnitude maxima of a_n / b_{n+r} differ
/// by less than `stability` times.
TameEstimate tame_grade_estimate(const SeminormFamily& a, const SeminormFamily& b,
                                 const std::vector<std::vector<GradedPoint>>& groups,
                                 std::size_t levels, std::size_t max_grade, double stability = 10.0);

}  // namespace frechet
