#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "frechet/models.hpp"

namespace frechet {

/// Deterministic probe set for dilation-ratio suprema.
///
/// Scaled basis vectors t e_k realize the saturation suprema that random
/// vectors miss; random dense directions cover the interior.
struct ProbePlan {
    std::uint64_t seed = 20240611;
    std::size_t basis_scales = 21;
    double t_min = 1e-3;
    double t_max = 1e3;
    std::size_t random_count = 200;
    std::size_t magnitudes = 8;
};

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

/// Basis probes (k outer, scale inner) followed by random probes
/// (direction outer, magnitude inner). Random directions have unit
/// Euclidean norm before scaling.
std::vector<GradedPoint> generate_probes(ModelKind kind, std::size_t dim, const ProbePlan& plan);

/// `count` seeded standard-normal points.
std::vector<GradedPoint> random_points(ModelKind kind, std::size_t dim, std::size_t count,
                                       std::uint64_t seed, double scale = 1.0);

}  // namespace frechet
