#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "frechet/models.hpp"

namespace frechet {

struct LengthResult {
    enum class Status { Converged, Divergent, Indeterminate };

    double value = 0.0;
    Status status = Status::Converged;
    std::size_t level = 0;        // refinement level or panel-doubling count reached
    std::vector<double> history;  // value per level

    bool finite() const { return status == Status::Converged; }
};

const char* to_string(LengthResult::Status s);

/// Chord sums over dyadic partitions. Converged when successive levels differ
/// by less than tol; divergent (from level 16 on) when the sum grew by 1.5x over
/// the last 3 levels or the last 3 increments each kept >= 0.75 of the previous
/// one; indeterminate otherwise. Lines and affine paths use the closed form
/// 2^L d(Δ/2^L); other curves evaluate every chord (capped at level 16).
LengthResult gromov_length(const CurveSpec& c, const GradedSpace& space, double tol,
                           std::size_t max_level);

/// ∫ Σ_p α_p Φ(m_{p+1}(ċ(t))) dt, with m_n the gauge of the radius-2^{-n}
/// supremum ball, by adaptive Gauss-Kronrod to relative 1e-13.
LengthResult metric_length(const CurveSpec& c, const GradedSpace& space);

/// Σ_p α_p Φ(∫ δ_p(ċ(t)) dt) (standard flavor), same quadrature.
LengthResult smooth_length(const CurveSpec& c, const GradedSpace& space);

/// Metric speed of the curve at t: the homogeneous metric derivative of ċ(t).
double curve_speed(const CurveSpec& c, const GradedSpace& space, double t);

/// Reparametrize by cumulative metric speed so the new curve has unit speed.
/// The returned curve lives on [0, S] with S the total speed integral.
/// @throws SingularVelocity if the speed vanishes at a check node
CurveSpec arclength_reparam(const CurveSpec& c, const GradedSpace& space, std::size_t nodes = 64);

struct MinimalityResult {
    bool holds = true;
    double margin = 0.0;  // min over perturbations of L(perturbed) - L(affine)
    std::size_t witness = 0;
    std::vector<double> margins;
};

/// Compare L(affine(a,b)) with L of a + t(b-a) + amp·sin(πt)·w for each w,
/// w projected orthogonally to b - a.
MinimalityResult affine_minimality_probe(const GradedPoint& a, const GradedPoint& b,
                                         const GradedSpace& space,
                                         const std::vector<GradedPoint>& perturbations, double amp);

/// Concatenate c1 on [t0,t1] with c2 shifted to start at c1's end time.
CurveSpec concatenate(const CurveSpec& c1, const CurveSpec& c2);

/// Restrict a curve to [s0, s1] within its domain, keeping the parameter.
CurveSpec restrict_curve(const CurveSpec& c, double s0, double s1);

}  // namespace frechet
