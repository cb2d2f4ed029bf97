#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frechet/errors.hpp"
#include "frechet/models.hpp"
#include "frechet/operators.hpp"

namespace frechet {

struct SolveTrace {
    double rho = 0.0;
    double d01 = 0.0;               // d(x_0, x_1)
    std::size_t planned = 0;        // a-priori iteration count
    std::size_t iterations = 0;     // iterations performed
    std::size_t keep = 5;
    // First and last `keep` iterates with their indices.
    std::vector<std::pair<std::size_t, GradedPoint>> head;
    std::vector<std::pair<std::size_t, GradedPoint>> tail;
    std::vector<double> residuals;  // residual(x_n), n = 0..iterations
    std::vector<double> steps;      // d(x_{n+1}, x_n)
    std::vector<double> ratios;     // steps[n] / steps[n-1]
    std::vector<double> bound_curve;  // ρ^n/(1-ρ) d01
    std::size_t violations = 0;     // ratios above ρ counted by the monitor

    /// Retained iterates in index order, without duplicates.
    std::vector<std::pair<std::size_t, GradedPoint>> retained() const;
};

struct SolveNonConvergence : NonConvergence {
    SolveNonConvergence(const std::string& msg, SolveTrace t) : NonConvergence(msg), trace(std::move(t)) {}
    SolveTrace trace;
};

struct SolveCertificateViolation : CertificateViolation {
    SolveCertificateViolation(const std::string& msg, SolveTrace t)
        : CertificateViolation(msg), trace(std::move(t))
    {
    }
    SolveTrace trace;
};

struct FixedPointResult {
    GradedPoint x;
    SolveTrace trace;
};

/// Smallest n >= 1 with ρ^n/(1-ρ) d01 <= tol (1 when d01 = 0 or ρ = 0).
std::size_t banach_iterations_needed(double rho, double d01, double tol);

/// Step distances below this are treated as round-off by the ratio monitor.
inline constexpr double kStepNoiseFloor = 1e-13;

/// Banach iteration x_{n+1} = T(x_n) run for the a-priori count, so that
/// d(x_n, x_f) <= ρ^n/(1-ρ) d(x_0, x_1) <= tol.
///
/// Measured step ratios are monitored; three consecutive ratios above ρ + 1e-9
/// raise SolveCertificateViolation. Exceeding max_iter raises SolveNonConvergence.
FixedPointResult banach_fixed_point(const PointMap& T, const GradedPoint& x0, const GradedSpace& space,
                                    double rho, double tol, std::size_t max_iter, std::size_t keep = 5,
                                    const std::function<double(const GradedPoint&)>& residual = {});

struct InverseCertificate {
    GradedPoint base;
    double r0 = 0.0;
    double rho = 0.0;
    double inverse_bound = 1.0;     // ⟨L₀⟩ or ⟨R₀⟩
    double lower_lipschitz = 0.0;   // (1-ρ)/⟨L₀⟩
    double target_radius = 0.0;     // r₁ = (1-ρ)/⟨R₀⟩ r₀
    double target_distance = 0.0;   // d(y, f(x₀))
    bool target_inside = true;
    double metric_rescale = 1.0;    // d_G is never rescaled; recorded for completeness
    std::size_t pairs_checked = 0;
    double worst_slack = 0.0;
};

struct RightInverseResult {
    GradedPoint x;
    SolveTrace trace;
    InverseCertificate certificate;
    double residual = 0.0;  // d(f(x), y)
};

/// Solve f(x) = y by the contraction Φ_y(x) = x - R₀(f(x) - y).
/// target_inside is false (certificate void) when d(y, f(x₀)) > r₁; the solve still runs.
RightInverseResult right_inverse_solve(const PointMap& f, const LinearMap& R0, double R0_bound,
                                       const GradedPoint& y, const GradedPoint& x0,
                                       const GradedSpace& space, double rho, double tol,
                                       std::size_t max_iter, double r0 = 1.0);

struct LeftInverseViolation : CertificateViolation {
    LeftInverseViolation(const std::string& msg, GradedPoint a, GradedPoint b)
        : CertificateViolation(msg), x1(std::move(a)), x2(std::move(b))
    {
    }
    GradedPoint x1, x2;
};

/// Check (1-ρ)/⟨L₀⟩ d(x₁,x₂) <= d(f(x₁), f(x₂)) + 1e-9 on every pair inside B(x₀, r).
/// @throws ContractionViolation if ρ >= 1, LeftInverseViolation on a failing pair
InverseCertificate left_inverse_certificate(const PointMap& f, double L0_bound, const GradedPoint& x0,
                                            double r, const GradedSpace& space, double rho,
                                            const std::vector<std::pair<GradedPoint, GradedPoint>>& pairs);

struct InverseDerivativeCheck {
    double max_deviation = 0.0;
    std::vector<double> deviations;
};

/// max_v d(φ'(b)v - f'(φ(b))^{-1} v, 0), both sides by finite differences, the
/// inverse by Neumann series.
InverseDerivativeCheck inverse_derivative_check(const PointMap& f, const PointMap& phi,
                                                const GradedPoint& b,
                                                const std::vector<GradedPoint>& directions,
                                                const GradedSpace& space, double neumann_tol = 1e-13);

}  // namespace frechet
