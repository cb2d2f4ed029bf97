#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frechet/errors.hpp"
#include "frechet/models.hpp"
#include "frechet/probes.hpp"

namespace frechet {

using PointMap = std::function<GradedPoint(const GradedPoint&)>;

/// Linear operator on a graded model: dense on the truncation or structured.
class LinearMap {
public:
    enum class Form { Identity, Dense, UpShift, DownShift, Diagonal, Derivative, Chain, Combination };

    static LinearMap identity(ModelKind kind, std::size_t dim);
    /// rows x cols matrix acting on the coordinate vector.
    static LinearMap dense(ModelKind kind, Eigen::MatrixXd matrix);
    /// (σa)_n = a_{n+1}
    static LinearMap up_shift(std::size_t dim);
    /// (τa)_0 = 0, (τa)_n = a_{n-1}; the last coordinate falls off the truncation.
    static LinearMap down_shift(std::size_t dim);
    static LinearMap diagonal(ModelKind kind, std::vector<double> d);
    /// Spectral d/dx on bandwidth-B periodic functions.
    static LinearMap derivative(std::size_t bandwidth);
    /// chain({A, B, C}) = A ∘ B ∘ C
    static LinearMap chain(std::vector<LinearMap> maps);
    /// Σ c_i A_i
    static LinearMap combination(std::vector<std::pair<double, LinearMap>> terms);

    Form form() const { return form_; }
    ModelKind kind() const { return kind_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    GradedPoint apply(const GradedPoint& v) const;
    GradedPoint operator()(const GradedPoint& v) const { return apply(v); }

    Eigen::MatrixXd materialize() const;

    /// Upper bound on ⟨A⟩ by ladder re-indexing, when the structure allows one.
    /// For a sequence matrix with column abs-sums <= C and upper bandwidth b,
    /// δ_p(Av) <= C δ_{p+b}(v), so ⟨A⟩ <= max(1,C) sup_q α_{q-b}/α_q.
    std::optional<double> analytic_bound(const WeightSequence& w) const;

    std::string describe() const;

private:
    LinearMap() = default;

    Form form_ = Form::Identity;
    ModelKind kind_ = ModelKind::Sequence;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::shared_ptr<const Eigen::MatrixXd> matrix_;
    std::vector<double> diag_;
    std::vector<LinearMap> parts_;
    std::vector<double> coeffs_;
};

LinearMap operator*(const LinearMap& a, const LinearMap& b);

/// sup_q α_{q-b}/α_q over all ladder positions (b may be negative).
double reindex_ratio(const WeightSequence& w, int b);

/// Bound for a sequence matrix: max(1,C) · reindex_ratio(b).
double dense_ladder_bound(const Eigen::MatrixXd& m, const WeightSequence& w);

struct RBoundEstimate {
    double radius = std::numeric_limits<double>::infinity();
    std::size_t probe_count = 0;
    std::size_t probes_used = 0;
    GradedPoint witness;
    double lower_bound = 0.0;
    std::optional<double> analytic_upper;
};

/// max over probes v with 0 < d(v,0) < r of d(f(v),0)/d(v,0).
/// @throws EmptyEstimate if no probe lies in the ball
RBoundEstimate rbound_estimate(const PointMap& f, const GradedSpace& space, std::size_t dim,
                               double r, const ProbePlan& plan = {});

RBoundEstimate rbound_estimate(const LinearMap& L, const GradedSpace& space, double r,
                               const ProbePlan& plan = {});

struct NeumannResult {
    LinearMap inverse;
    std::size_t terms = 0;  // m + 1 summands (I - A)^0 .. (I - A)^m
    double rho = 0.0;
    std::string rho_source;  // "caller", "analytic" or "probe"
    double probe_rho = 0.0;
    double error_bound = 0.0;    // ρ^{m+1}/(1-ρ)
    double inverse_bound = 1.0;  // 1/(1-ρ)
};

struct NeumannNonConvergence : NonConvergence {
    NeumannNonConvergence(const std::string& msg, LinearMap partial_sum, std::size_t terms_used)
        : NonConvergence(msg), partial(std::move(partial_sum)), terms(terms_used)
    {
    }
    LinearMap partial;
    std::size_t terms;
};

/// S_m = Σ_{i=0}^{m} (I - A)^i as a dense map.
LinearMap neumann_partial_sum(const LinearMap& A, std::size_t m);

/// Smallest m with ρ^{m+1}/(1-ρ) < tol.
std::size_t neumann_terms_needed(double rho, double tol);

/// Truncated Von Neumann series for A^{-1}.
///
/// ρ comes from the caller, else from the analytic bound on I - A, else from
/// probes. Probes always run: a probe ratio >= 1 is a contraction violation and
/// a probe ratio above the chosen ρ contradicts the certificate.
NeumannResult neumann_invert(const LinearMap& A, const GradedSpace& space, double R, double tol,
                             std::size_t max_terms, std::optional<double> rho = std::nullopt,
                             const ProbePlan& plan = {});

struct PerturbedBound {
    double inverse_bound;  // ⟨B^{-1}⟩
    double difference_bound;  // ⟨B^{-1} - A^{-1}⟩
};

/// @throws PreconditionError if Ainv_bound * AB_gap >= 1
PerturbedBound perturbed_invert_bound(double Ainv_bound, double AB_gap);

struct DistortionReport {
    double upper = 0.0;
    double lower = 0.0;
    double total = 0.0;
};

/// Singular-value distortion; lower is +inf for rank-deficient input.
DistortionReport distortion(const Eigen::MatrixXd& F);

using SizeFn = std::function<double(const GradedPoint&)>;

/// size(map(w_k)) / size(w_k) per witness.
std::vector<double> unboundedness_probe(const PointMap& map, const std::vector<GradedPoint>& witnesses,
                                        const SizeFn& size);

/// size(map(p + w_k) - map(p)) / size(w_k) per witness, for nonlinear maps.
std::vector<double> unboundedness_probe_at(const PointMap& map, const GradedPoint& base,
                                           const std::vector<GradedPoint>& witnesses,
                                           const SizeFn& size);

/// Strictly increasing sequence.
bool monotone_growth(const std::vector<double>& ratios);

}  // namespace frechet
