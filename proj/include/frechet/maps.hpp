#pragma once

#include <Eigen/Dense>

#include <cstddef>

#include "frechet/models.hpp"
#include "frechet/operators.hpp"

namespace frechet {

/// f(x) = x + c·τ(sin∘x) on truncated sequences (sine taken componentwise).
PointMap tau_sine_map(double c);

/// Jacobian of tau_sine_map at x: I + c·τ·diag(cos x).
Eigen::MatrixXd tau_sine_jacobian(double c, const GradedPoint& x);

/// Smooth cutoff: 1 on |y| <= 0.6, 0 on |y| >= 1.2.
double smooth_bump(double y);

/// g(y) = smooth_bump(y)·sin(M y).
double bump_sine(double y, double M);

/// Composition operator p -> g∘p on bandwidth-B periodic functions,
/// sampled on a fine grid and projected back to bandwidth B.
PointMap composition_operator(double M, std::size_t bandwidth);

/// Least-squares projection of grid samples onto bandwidth B.
GradedPoint project_samples(const std::vector<double>& samples, std::size_t bandwidth);

}  // namespace frechet
