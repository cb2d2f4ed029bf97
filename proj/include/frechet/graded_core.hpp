#pragma once

#include <cstddef>
#include <vector>

namespace frechet {

/// Concave modulus Φ(x) = x/(1+x), mapping [0,∞) onto [0,1).
/// @throws DomainError for negative or NaN input
double phi(double x);

/// Inverse of Φ on [0,1): y/(1-y). Returns +inf at y = 1.
double phi_inverse(double y);

/// Positive, non-increasing weights α_1, α_2, ... stored 0-based.
///
/// A non-zero continuation_ratio extends the sequence geometrically past the
/// stored values, so model-level metrics can sum the exact infinite series.
struct WeightSequence {
    std::vector<double> values;
    double continuation_ratio = 0.0;

    std::size_t size() const { return values.size(); }

    /// Weight of ladder position n. Past the stored values this is the
    /// geometric continuation, or 0 when there is none.
    double at(std::size_t n) const;

    /// Tail mass Σ_{m >= n} at(m).
    double remaining(std::size_t n) const;

    double total() const { return remaining(0); }

    /// @throws DomainError if any weight is non-positive or the sequence increases
    void validate() const;
};

/// (r, r², ..., r^depth) with geometric continuation r.
/// @throws DomainError unless 0 < r < 1 and depth > 0
WeightSequence geometric_weights(double r, std::size_t depth);

/// Explicit weights without continuation. Validated.
WeightSequence explicit_weights(std::vector<double> values);

enum class Flavor { Standard, Supremum };

struct GradedMetricConfig {
    Flavor flavor = Flavor::Standard;
    WeightSequence weights;
    std::size_t truncation = 0;
    // Treat the ladder as constant past the truncation and add the remaining
    // weight mass (the exact metric of a finitely supported element).
    bool hold_last_tail = false;

    /// @throws DomainError / ShapeError on inconsistent fields
    void validate() const;
};

/// Partial-sum seminorms δ_0 <= δ_1 <= ... of one element.
using SeminormLadder = std::vector<double>;

/// Σ_n α_n Φ(δ_n) over the first `truncation` entries of the ladder of a-b.
/// @throws ShapeError if ladder.size() != cfg.truncation
double standard_metric(const SeminormLadder& ladder, const GradedMetricConfig& cfg);

/// max_n α_n Φ(δ_n) over the first `truncation` entries.
double sup_metric(const SeminormLadder& ladder, const GradedMetricConfig& cfg);

/// Dispatch on cfg.flavor.
double graded_metric(const SeminormLadder& ladder, const GradedMetricConfig& cfg);

struct ComparabilityTriple {
    double standard_r2 = 0.0;  // D_{l(r²)}
    double sup_r = 0.0;        // d_{l(r)}
    double standard_r = 0.0;   // D_{l(r)}

    bool ordered(double tol = 1e-12) const
    {
        return standard_r2 <= sup_r + tol && sup_r <= standard_r + tol;
    }
};

/// (D_{l(r²)}, d_{l(r)}, D_{l(r)}) on the first `depth` ladder entries.
ComparabilityTriple comparability_check(const SeminormLadder& ladder, double r, std::size_t depth);

/// Ψ(|x-y|): piecewise linear, rising to 1 at 1, falling to 1/2 at 2, rising again.
double piecewise_line_metric(double x, double y);

}  // namespace frechet
