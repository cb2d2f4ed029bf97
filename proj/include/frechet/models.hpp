#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "frechet/graded_core.hpp"

namespace frechet {

enum class ModelKind { Sequence, Periodic };

const char* to_string(ModelKind kind);

/// Element of a graded model.
///
/// Sequence: data = (v_0, ..., v_{N-1}).
/// Periodic: data = (a_0, a_1, b_1, ..., a_B, b_B) for
///   f(x) = a_0 + Σ_k a_k cos(kx) + b_k sin(kx).
/// Real coefficients keep f real under every arithmetic operation.
struct GradedPoint {
    ModelKind kind = ModelKind::Sequence;
    std::vector<double> data;

    static GradedPoint sequence(std::vector<double> coords);
    static GradedPoint periodic(std::vector<double> coeffs);
    static GradedPoint zero_like(const GradedPoint& p);

    std::size_t dimension() const { return data.size(); }
    std::size_t bandwidth() const;  // periodic only

    // Periodic coefficient access; k in 1..B.
    double cos_coeff(std::size_t k) const;
    double sin_coeff(std::size_t k) const;

    /// Complex Fourier coefficient c_k for k in -B..B.
    std::complex<double> fourier(int k) const;

    bool is_zero() const;
    bool all_finite() const;

    GradedPoint& operator+=(const GradedPoint& o);
    GradedPoint& operator-=(const GradedPoint& o);
    GradedPoint& operator*=(double c);
};

GradedPoint operator+(GradedPoint a, const GradedPoint& b);
GradedPoint operator-(GradedPoint a, const GradedPoint& b);
GradedPoint operator-(GradedPoint a);
GradedPoint operator*(double c, GradedPoint a);
GradedPoint operator*(GradedPoint a, double c);

/// Throws ShapeError unless a and b live in the same model with equal dimension.
void require_compatible(const GradedPoint& a, const GradedPoint& b);

// ---- periodic helpers ----------------------------------------------------

GradedPoint periodic_zero(std::size_t bandwidth);
/// amp*sin(kx) or amp*cos(kx) in bandwidth B.
GradedPoint periodic_sin(std::size_t k, std::size_t bandwidth, double amp = 1.0);
GradedPoint periodic_cos(std::size_t k, std::size_t bandwidth, double amp = 1.0);

/// Real point evaluation f(x).
double periodic_eval(const GradedPoint& f, double x);

/// k-th spectral derivative: (a_k, b_k) -> (k b_k, -k a_k) per order.
GradedPoint spectral_derivative(const GradedPoint& f, std::size_t order = 1);

/// sup|f| on the circle: grid of max(8B, 64) points, polished by Newton
/// steps at near-maximal grid peaks. Single-mode inputs are exact.
double periodic_sup(const GradedPoint& f);

/// f_K(x) = K^{-1} sin(K² x).
/// @throws DomainError if bandwidth < K²
GradedPoint make_fk(int K, std::size_t bandwidth);

// ---- ladders -------------------------------------------------------------

/// Partial sums of |coords|, first `depth` entries.
SeminormLadder seq_ladder(const GradedPoint& v, std::size_t depth);

/// entry n = Σ_{i<=n} sup|f^{(i)}|, first `depth` entries.
SeminormLadder fn_ladder(const GradedPoint& f, std::size_t depth);

/// Per-level seminorms: ladder increments (|v_n| or sup|f^{(n)}|).
std::vector<double> level_seminorms(const GradedPoint& v, std::size_t depth);

// ---- graded space --------------------------------------------------------

/// A model kind with a weight sequence and flavor. Metrics are the exact
/// infinite series: the sequence ladder is held constant past the last
/// coordinate, the periodic ladder is extended until Φ saturates or the
/// remaining weight is negligible.
class GradedSpace {
public:
    GradedSpace(ModelKind kind, WeightSequence weights, Flavor flavor = Flavor::Standard);

    ModelKind kind() const { return kind_; }
    Flavor flavor() const { return flavor_; }
    const WeightSequence& weights() const { return weights_; }

    GradedSpace with_flavor(Flavor f) const { return GradedSpace(kind_, weights_, f); }
    GradedSpace with_weights(WeightSequence w) const { return GradedSpace(kind_, std::move(w), flavor_); }

    /// Exactly `depth` ladder entries.
    SeminormLadder ladder(const GradedPoint& v, std::size_t depth) const;

    /// The ladder as far as the metric needs it.
    SeminormLadder full_ladder(const GradedPoint& v) const;

    /// Metric value of a ladder, including the held tail for the standard flavor.
    double norm_of_ladder(const SeminormLadder& ladder) const;

    double norm(const GradedPoint& v) const;
    double distance(const GradedPoint& a, const GradedPoint& b) const;

    /// d/dε d(εv, 0) at 0+ = Σ_p α_p δ_p(v) (+ tail). Homogeneous of degree 1.
    /// @throws EvaluationError if the series does not converge
    double speed(const GradedPoint& v) const;

    /// Zero and basis vectors of the given dimension in this model.
    GradedPoint zero(std::size_t dim) const;
    GradedPoint basis(std::size_t dim, std::size_t k) const;

private:
    void check_point(const GradedPoint& v) const;

    ModelKind kind_;
    WeightSequence weights_;
    Flavor flavor_;
};

struct NonConvexityWitness {
    GradedPoint u;
    GradedPoint v;
    double radius = 0.0;          // max(d(u,0), d(v,0))
    double midpoint_norm = 0.0;   // d((u+v)/2, 0) > radius
};

/// Search scaled basis pairs for a ball that is not convex.
std::optional<NonConvexityWitness> find_nonconvex_ball_witness(const GradedSpace& space, std::size_t dim);

// ---- curves --------------------------------------------------------------

struct CurveSpec {
    enum class Kind { Line, Affine, ClosedForm };

    Kind kind = Kind::ClosedForm;
    double t0 = 0.0;
    double t1 = 1.0;
    // Line: origin = 0, direction = v. Affine: origin = a, direction = b - a.
    GradedPoint origin;
    GradedPoint direction;
    std::function<GradedPoint(double)> position;
    std::function<GradedPoint(double)> velocity;
};

/// t -> t v on [0,1].
CurveSpec line_curve(const GradedPoint& v);

/// t -> (1-t) a + t b on [0,1].
CurveSpec affine_curve(const GradedPoint& a, const GradedPoint& b);

CurveSpec closed_form_curve(std::function<GradedPoint(double)> position,
                            std::function<GradedPoint(double)> velocity,
                            double t0 = 0.0, double t1 = 1.0);

}  // namespace frechet
