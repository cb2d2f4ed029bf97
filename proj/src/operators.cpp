#include "frechet/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace frechet {

// ---- construction --------------------------------------------------------

LinearMap LinearMap::identity(ModelKind kind, std::size_t dim)
{
    LinearMap m;
    m.form_ = Form::Identity;
    m.kind_ = kind;
    m.rows_ = m.cols_ = dim;
    return m;
}

LinearMap LinearMap::dense(ModelKind kind, Eigen::MatrixXd matrix)
{
    LinearMap m;
    m.form_ = Form::Dense;
    m.kind_ = kind;
    m.rows_ = static_cast<std::size_t>(matrix.rows());
    m.cols_ = static_cast<std::size_t>(matrix.cols());
    m.matrix_ = std::make_shared<const Eigen::MatrixXd>(std::move(matrix));
    return m;
}

LinearMap LinearMap::up_shift(std::size_t dim)
{
    LinearMap m = identity(ModelKind::Sequence, dim);
    m.form_ = Form::UpShift;
    return m;
}

LinearMap LinearMap::down_shift(std::size_t dim)
{
    LinearMap m = identity(ModelKind::Sequence, dim);
    m.form_ = Form::DownShift;
    return m;
}

LinearMap LinearMap::diagonal(ModelKind kind, std::vector<double> d)
{
    LinearMap m = identity(kind, d.size());
    m.form_ = Form::Diagonal;
    m.diag_ = std::move(d);
    return m;
}

LinearMap LinearMap::derivative(std::size_t bandwidth)
{
    LinearMap m = identity(ModelKind::Periodic, 2 * bandwidth + 1);
    m.form_ = Form::Derivative;
    return m;
}

LinearMap LinearMap::chain(std::vector<LinearMap> maps)
{
    if (maps.empty()) {
        throw ShapeError("chain: no maps");
    }
    for (std::size_t i = 0; i + 1 < maps.size(); ++i) {
        if (maps[i].cols_ != maps[i + 1].rows_ || maps[i].kind_ != maps[i + 1].kind_) {
            throw ShapeError("chain: incompatible factors");
        }
    }
    LinearMap m;
    m.form_ = Form::Chain;
    m.kind_ = maps.front().kind_;
    m.rows_ = maps.front().rows_;
    m.cols_ = maps.back().cols_;
    m.parts_ = std::move(maps);
    return m;
}

LinearMap LinearMap::combination(std::vector<std::pair<double, LinearMap>> terms)
{
    if (terms.empty()) {
        throw ShapeError("combination: no terms");
    }
    LinearMap m;
    m.form_ = Form::Combination;
    m.kind_ = terms.front().second.kind_;
    m.rows_ = terms.front().second.rows_;
    m.cols_ = terms.front().second.cols_;
    for (auto& [c, map] : terms) {
        if (map.rows_ != m.rows_ || map.cols_ != m.cols_ || map.kind_ != m.kind_) {
            throw ShapeError("combination: incompatible terms");
        }
        m.coeffs_.push_back(c);
        m.parts_.push_back(std::move(map));
    }
    return m;
}

LinearMap operator*(const LinearMap& a, const LinearMap& b)
{
    return LinearMap::chain({a, b});
}

// ---- evaluation ----------------------------------------------------------

GradedPoint LinearMap::apply(const GradedPoint& v) const
{
    if (v.kind != kind_ || v.data.size() != cols_) {
        throw ShapeError("apply: point of dimension " + std::to_string(v.data.size()) +
                         " for map with " + std::to_string(cols_) + " columns");
    }
    const std::size_t n = cols_;
    GradedPoint out{kind_, std::vector<double>(rows_, 0.0)};
    switch (form_) {
    case Form::Identity:
        out.data = v.data;
        break;
    case Form::Dense:
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) {
                s += (*matrix_)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * v.data[j];
            }
            out.data[i] = s;
        }
        break;
    case Form::UpShift:
        for (std::size_t i = 0; i + 1 < n; ++i) {
            out.data[i] = v.data[i + 1];
        }
        break;
    case Form::DownShift:
        for (std::size_t i = 1; i < n; ++i) {
            out.data[i] = v.data[i - 1];
        }
        break;
    case Form::Diagonal:
        for (std::size_t i = 0; i < n; ++i) {
            out.data[i] = diag_[i] * v.data[i];
        }
        break;
    case Form::Derivative:
        out = spectral_derivative(v);
        break;
    case Form::Chain: {
        GradedPoint w = v;
        for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
            w = it->apply(w);
        }
        out = std::move(w);
        break;
    }
    case Form::Combination:
        for (std::size_t t = 0; t < parts_.size(); ++t) {
            out += coeffs_[t] * parts_[t].apply(v);
        }
        break;
    }
    return out;
}

Eigen::MatrixXd LinearMap::materialize() const
{
    const auto R = static_cast<Eigen::Index>(rows_);
    const auto C = static_cast<Eigen::Index>(cols_);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(R, C);
    switch (form_) {
    case Form::Identity:
        m.setIdentity();
        break;
    case Form::Dense:
        m = *matrix_;
        break;
    case Form::UpShift:
        for (Eigen::Index i = 0; i + 1 < C; ++i) {
            m(i, i + 1) = 1.0;
        }
        break;
    case Form::DownShift:
        for (Eigen::Index i = 1; i < C; ++i) {
            m(i, i - 1) = 1.0;
        }
        break;
    case Form::Diagonal:
        for (Eigen::Index i = 0; i < C; ++i) {
            m(i, i) = diag_[static_cast<std::size_t>(i)];
        }
        break;
    case Form::Derivative: {
        const Eigen::Index B = (C - 1) / 2;
        for (Eigen::Index k = 1; k <= B; ++k) {
            const double kk = static_cast<double>(k);
            m(2 * k - 1, 2 * k) = kk;
            m(2 * k, 2 * k - 1) = -kk;
        }
        break;
    }
    case Form::Chain:
        m = parts_.front().materialize();
        for (std::size_t i = 1; i < parts_.size(); ++i) {
            m = m * parts_[i].materialize();
        }
        break;
    case Form::Combination:
        for (std::size_t t = 0; t < parts_.size(); ++t) {
            m += coeffs_[t] * parts_[t].materialize();
        }
        break;
    }
    return m;
}

// ---- analytic bounds -----------------------------------------------------

double reindex_ratio(const WeightSequence& w, int b)
{
    if (b == 0) {
        return 1.0;
    }
    const std::size_t shift = static_cast<std::size_t>(std::abs(b));
    // Past the stored values the ratio is constant (geometric) or infinite.
    const std::size_t span = w.size() + shift + 2;
    double best = 0.0;
    if (b > 0) {
        for (std::size_t q = shift; q < span; ++q) {
            const double wq = w.at(q);
            if (wq == 0.0) {
                return std::numeric_limits<double>::infinity();
            }
            best = std::max(best, w.at(q - shift) / wq);
        }
    } else {
        for (std::size_t q = 0; q < span; ++q) {
            const double wq = w.at(q);
            if (wq == 0.0) {
                break;
            }
            best = std::max(best, w.at(q + shift) / wq);
        }
    }
    return best;
}

double dense_ladder_bound(const Eigen::MatrixXd& m, const WeightSequence& w)
{
    double col_max = 0.0;
    bool any = false;
    int band = std::numeric_limits<int>::min();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        double col = 0.0;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const double a = std::abs(m(i, j));
            if (a != 0.0) {
                col += a;
                any = true;
                band = std::max(band, static_cast<int>(j - i));
            }
        }
        col_max = std::max(col_max, col);
    }
    if (!any) {
        return 0.0;
    }
    return std::max(1.0, col_max) * reindex_ratio(w, band);
}

std::optional<double> LinearMap::analytic_bound(const WeightSequence& w) const
{
    const bool seq = kind_ == ModelKind::Sequence;
    std::optional<double> structural;
    switch (form_) {
    case Form::Identity:
        return 1.0;
    case Form::Dense:
        if (seq) {
            return dense_ladder_bound(*matrix_, w);
        }
        return std::nullopt;
    case Form::UpShift:
        return reindex_ratio(w, 1);
    case Form::DownShift:
        return reindex_ratio(w, -1);
    case Form::Diagonal: {
        double mx = 0.0;
        bool uniform = true;
        for (double d : diag_) {
            mx = std::max(mx, std::abs(d));
            uniform = uniform && d == diag_.front();
        }
        if (seq || uniform) {
            return std::max(1.0, mx);
        }
        return std::nullopt;
    }
    case Form::Derivative:
        // ladder(f')_p <= ladder(f)_{p+1}
        return reindex_ratio(w, 1);
    case Form::Chain: {
        double prod = 1.0;
        bool ok = true;
        for (const LinearMap& p : parts_) {
            const auto b = p.analytic_bound(w);
            ok = ok && b.has_value();
            if (b) {
                prod *= *b;
            }
        }
        if (ok) {
            structural = prod;
        }
        break;
    }
    case Form::Combination: {
        double sum = 0.0;
        bool ok = true;
        for (std::size_t t = 0; t < parts_.size(); ++t) {
            const auto b = parts_[t].analytic_bound(w);
            ok = ok && b.has_value();
            if (b) {
                sum += std::max(1.0, std::abs(coeffs_[t])) * *b;
            }
        }
        if (ok) {
            structural = sum;
        }
        break;
    }
    }
    if (seq) {
        const double d = dense_ladder_bound(materialize(), w);
        return structural ? std::min(*structural, d) : d;
    }
    return structural;
}

std::string LinearMap::describe() const
{
    std::ostringstream os;
    switch (form_) {
    case Form::Identity: os << "I"; break;
    case Form::Dense: os << "dense(" << rows_ << "x" << cols_ << ")"; break;
    case Form::UpShift: os << "sigma"; break;
    case Form::DownShift: os << "tau"; break;
    case Form::Diagonal: os << "diag"; break;
    case Form::Derivative: os << "d/dx"; break;
    case Form::Chain:
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            os << (i ? " o " : "") << parts_[i].describe();
        }
        break;
    case Form::Combination:
        os << "(";
        for (std::size_t t = 0; t < parts_.size(); ++t) {
            os << (t ? " + " : "") << coeffs_[t] << "*" << parts_[t].describe();
        }
        os << ")";
        break;
    }
    os << "[" << to_string(kind_) << "]";
    return os.str();
}

// ---- probing -------------------------------------------------------------

RBoundEstimate rbound_estimate(const PointMap& f, const GradedSpace& space, std::size_t dim,
                               double r, const ProbePlan& plan)
{
    if (!(r > 0.0)) {
        throw DomainError("rbound_estimate: radius must be positive");
    }
    RBoundEstimate est;
    est.radius = r;
    const std::vector<GradedPoint> probes = generate_probes(space.kind(), dim, plan);
    est.probe_count = probes.size();
    for (const GradedPoint& v : probes) {
        const double nv = space.norm(v);
        if (!(nv > 0.0) || !(nv < r)) {
            continue;
        }
        ++est.probes_used;
        const double ratio = space.norm(f(v)) / nv;
        if (est.probes_used == 1 || ratio > est.lower_bound) {
            est.lower_bound = ratio;
            est.witness = v;
        }
    }
    if (est.probes_used == 0) {
        throw EmptyEstimate("rbound_estimate: no probe inside the ball of radius " + std::to_string(r));
    }
    return est;
}

RBoundEstimate rbound_estimate(const LinearMap& L, const GradedSpace& space, double r,
                               const ProbePlan& plan)
{
    RBoundEstimate est =
        rbound_estimate([&L](const GradedPoint& v) { return L.apply(v); }, space, L.cols(), r, plan);
    est.analytic_upper = L.analytic_bound(space.weights());
    return est;
}

// ---- Von Neumann ---------------------------------------------------------

LinearMap neumann_partial_sum(const LinearMap& A, std::size_t m)
{
    const auto n = static_cast<Eigen::Index>(A.cols());
    const Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n) - A.materialize();
    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 1; i <= m; ++i) {
        P = P * B;
        S += P;
    }
    return LinearMap::dense(A.kind(), std::move(S));
}

std::size_t neumann_terms_needed(double rho, double tol)
{
    if (rho == 0.0) {
        return 0;
    }
    std::size_t m = 0;
    double p = rho;  // ρ^{m+1}
    while (p / (1.0 - rho) >= tol) {
        p *= rho;
        ++m;
        if (m > 1000000) {
            break;
        }
    }
    return m;
}

NeumannResult neumann_invert(const LinearMap& A, const GradedSpace& space, double R, double tol,
                             std::size_t max_terms, std::optional<double> rho, const ProbePlan& plan)
{
    if (A.rows() != A.cols()) {
        throw ShapeError("neumann_invert: square map required");
    }
    if (!(tol > 0.0)) {
        throw DomainError("neumann_invert: tol must be positive");
    }
    const LinearMap I = LinearMap::identity(A.kind(), A.cols());
    const LinearMap B = LinearMap::combination({{1.0, I}, {-1.0, A}});
    const RBoundEstimate est = rbound_estimate(B, space, R, plan);

    NeumannResult res{I, 0, 0.0, "", est.lower_bound, 0.0, 1.0};
    if (est.lower_bound >= 1.0) {
        throw ContractionViolation("neumann_invert: probe ratio " + std::to_string(est.lower_bound) +
                                   " for I - A is not below 1");
    }
    if (rho) {
        res.rho = *rho;
        res.rho_source = "caller";
    } else if (est.analytic_upper) {
        res.rho = *est.analytic_upper;
        res.rho_source = "analytic";
    } else {
        res.rho = est.lower_bound;
        res.rho_source = "probe";
    }
    if (!(res.rho < 1.0)) {
        throw ContractionViolation("neumann_invert: contraction factor " + std::to_string(res.rho) +
                                   " (" + res.rho_source + ") is not below 1");
    }
    if (est.lower_bound > res.rho + 1e-12) {
        throw CertificateViolation("neumann_invert: probe ratio " + std::to_string(est.lower_bound) +
                                   " exceeds supplied rho " + std::to_string(res.rho));
    }
    const std::size_t m = neumann_terms_needed(res.rho, tol);
    if (m + 1 > max_terms) {
        throw NeumannNonConvergence("neumann_invert: needs " + std::to_string(m + 1) + " terms",
                                    neumann_partial_sum(A, max_terms == 0 ? 0 : max_terms - 1),
                                    max_terms);
    }
    res.inverse = neumann_partial_sum(A, m);
    res.terms = m + 1;
    res.error_bound = std::pow(res.rho, static_cast<double>(m + 1)) / (1.0 - res.rho);
    res.inverse_bound = 1.0 / (1.0 - res.rho);
    return res;
}

PerturbedBound perturbed_invert_bound(double Ainv_bound, double AB_gap)
{
    const double prod = Ainv_bound * AB_gap;
    if (!(prod < 1.0) || Ainv_bound < 0.0 || AB_gap < 0.0) {
        throw PreconditionError("perturbed_invert_bound: need <A^-1><A-B> < 1");
    }
    return {Ainv_bound / (1.0 - prod), Ainv_bound * Ainv_bound * AB_gap / (1.0 - prod)};
}

DistortionReport distortion(const Eigen::MatrixXd& F)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(F);
    const Eigen::VectorXd s = svd.singularValues();
    DistortionReport rep;
    if (s.size() == 0) {
        return rep;
    }
    rep.upper = s.maxCoeff();
    const double smin = s.minCoeff();
    const double eps = std::numeric_limits<double>::epsilon() *
                       static_cast<double>(std::max(F.rows(), F.cols())) * rep.upper;
    if (F.cols() > F.rows() || smin <= eps) {
        rep.lower = std::numeric_limits<double>::infinity();
    } else {
        rep.lower = 1.0 / smin;
    }
    rep.total = std::max(rep.upper, rep.lower);
    return rep;
}

// ---- unboundedness -------------------------------------------------------

std::vector<double> unboundedness_probe(const PointMap& map, const std::vector<GradedPoint>& witnesses,
                                        const SizeFn& size)
{
    std::vector<double> out;
    out.reserve(witnesses.size());
    for (const GradedPoint& w : witnesses) {
        out.push_back(size(map(w)) / size(w));
    }
    return out;
}

std::vector<double> unboundedness_probe_at(const PointMap& map, const GradedPoint& base,
                                           const std::vector<GradedPoint>& witnesses,
                                           const SizeFn& size)
{
    const GradedPoint f0 = map(base);
    std::vector<double> out;
    out.reserve(witnesses.size());
    for (const GradedPoint& w : witnesses) {
        out.push_back(size(map(base + w) - f0) / size(w));
    }
    return out;
}

bool monotone_growth(const std::vector<double>& ratios)
{
    for (std::size_t i = 1; i < ratios.size(); ++i) {
        if (!(ratios[i] > ratios[i - 1])) {
            return false;
        }
    }
    return ratios.size() >= 2;
}

}  // namespace frechet
