#include "frechet/length.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frechet/errors.hpp"

namespace frechet {

const char* to_string(LengthResult::Status s)
{
    switch (s) {
    case LengthResult::Status::Converged: return "converged";
    case LengthResult::Status::Divergent: return "divergent";
    case LengthResult::Status::Indeterminate: return "indeterminate";
    }
    return "?";
}

namespace {

struct GaussRule {
    std::vector<double> x;  // on [-1, 1]
    std::vector<double> w;
};

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the Legendre recurrence.
const GaussRule& gauss_legendre(std::size_t n)
{
    thread_local std::vector<std::pair<std::size_t, GaussRule>> cache;
    for (const auto& [k, rule] : cache) {
        if (k == n) {
            return rule;
        }
    }
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(N, N);
    for (Eigen::Index i = 1; i < N; ++i) {
        const double k = static_cast<double>(i);
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        T(i, i - 1) = b;
        T(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    GaussRule rule;
    for (Eigen::Index i = 0; i < N; ++i) {
        rule.x.push_back(es.eigenvalues()(i));
        const double v0 = es.eigenvectors()(0, i);
        rule.w.push_back(2.0 * v0 * v0);
    }
    cache.emplace_back(n, std::move(rule));
    return cache.back().second;
}

// Adaptive Gauss-Kronrod (G7/K15) for a vector integrand. Ladders involve
// absolute values and maxima, so integrands are only piecewise smooth and
// uniform panel refinement stalls near the kinks; bisecting where the
// Kronrod-Gauss gap is largest does not.
constexpr double kQuadRelTol = 1e-13;
constexpr std::size_t kMaxIntervals = 20000;

struct Quad {
    Eigen::VectorXd value;
    double error = 0.0;
    std::size_t intervals = 0;
    bool converged = true;
};

template <typename F>
Quad adaptive_gk15(F&& f, double a, double b)
{
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& kx = gauss_kronrod<double, 15>::abscissa();
    const auto& kw = gauss_kronrod<double, 15>::weights();
    const auto& gw = gauss<double, 7>::weights();

    struct Piece {
        double a, b;
        Eigen::VectorXd k;
        double err;
    };
    auto eval = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        const Eigen::VectorXd f0 = f(c);
        Eigen::VectorXd K = kw[0] * f0;
        Eigen::VectorXd G = gw[0] * f0;
        for (std::size_t i = 1; i < kx.size(); ++i) {
            const Eigen::VectorXd s = f(c - h * kx[i]) + f(c + h * kx[i]);
            K += kw[i] * s;
            if (i % 2 == 0) {
                G += gw[i / 2] * s;
            }
        }
        K *= h;
        G *= h;
        return Piece{lo, hi, K, (K - G).cwiseAbs().maxCoeff()};
    };

    std::vector<Piece> pieces{eval(a, b)};
    Quad out;
    for (;;) {
        out.value = Eigen::VectorXd::Zero(pieces.front().k.size());
        out.error = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            out.value += pieces[i].k;
            out.error += pieces[i].err;
            if (pieces[i].err > pieces[worst].err) {
                worst = i;
            }
        }
        out.intervals = pieces.size();
        const double scale = std::max(1.0, out.value.cwiseAbs().maxCoeff());
        if (out.error <= kQuadRelTol * scale) {
            return out;
        }
        const Piece p = pieces[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (pieces.size() >= kMaxIntervals || !(mid > p.a && mid < p.b)) {
            out.converged = false;
            return out;
        }
        pieces[worst] = eval(p.a, mid);
        pieces.push_back(eval(mid, p.b));
    }
}

LengthResult from_quad(const Quad& q, double value)
{
    LengthResult out;
    out.value = value;
    out.history = {value};
    out.level = q.intervals;
    out.status = q.converged ? LengthResult::Status::Converged : LengthResult::Status::Indeterminate;
    return out;
}

bool constant_velocity(const CurveSpec& c)
{
    return c.kind == CurveSpec::Kind::Line || c.kind == CurveSpec::Kind::Affine;
}

// Σ_p α_p Φ(m_{p+1}(v)), summed until the remaining weight is below 1e-15.
double metric_integrand(const GradedSpace& space, const GradedPoint& v)
{
    const WeightSequence& w = space.weights();
    std::size_t P = 1;
    while (P < 64 && w.remaining(P) >= 1e-15) {
        ++P;
    }
    std::size_t Q = 0;
    const double smallest = std::ldexp(1.0, -static_cast<int>(P));
    while (w.at(Q) > smallest) {
        ++Q;
    }
    const SeminormLadder l = v.is_zero() ? SeminormLadder(Q, 0.0) : space.ladder(v, Q);
    double sum = 0.0;
    double gauge = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
        const double radius = std::ldexp(1.0, -static_cast<int>(p + 1));
        gauge = 0.0;
        for (std::size_t q = 0; q < Q && w.at(q) > radius; ++q) {
            gauge = std::max(gauge, l[q] / phi_inverse(radius / w.at(q)));
        }
        sum += w.at(p) * phi(gauge);
    }
    return sum + w.remaining(P) * phi(gauge);
}

}  // namespace

LengthResult gromov_length(const CurveSpec& c, const GradedSpace& space, double tol, std::size_t max_level)
{
    LengthResult out;
    const bool closed = constant_velocity(c);
    const std::size_t top = closed ? max_level : std::min<std::size_t>(max_level, 16);
    const GradedPoint delta = closed ? c.direction : GradedPoint{};
    std::vector<double> inc;
    for (std::size_t L = 0; L <= top; ++L) {
        double s = 0.0;
        if (closed) {
            s = std::ldexp(space.norm(std::ldexp(1.0, -static_cast<int>(L)) * delta), static_cast<int>(L));
        } else {
            const std::size_t n = std::size_t{1} << L;
            const double h = (c.t1 - c.t0) / static_cast<double>(n);
            GradedPoint prev = c.position(c.t0);
            for (std::size_t i = 1; i <= n; ++i) {
                const double t = i == n ? c.t1 : c.t0 + h * static_cast<double>(i);
                GradedPoint cur = c.position(t);
                s += space.distance(cur, prev);
                prev = std::move(cur);
            }
        }
        out.history.push_back(s);
        out.value = s;
        out.level = L;
        if (L == 0) {
            continue;
        }
        inc.push_back(s - out.history[L - 1]);
        if (std::abs(inc.back()) < tol) {
            out.status = LengthResult::Status::Converged;
            return out;
        }
        if (L >= 16) {
            const bool factor = s >= 1.5 * out.history[L - 3];
            const std::size_t k = inc.size();
            bool persistent = k >= 4;
            for (std::size_t j = k - 3; persistent && j < k; ++j) {
                persistent = inc[j - 1] > 0.0 && inc[j] >= 0.75 * inc[j - 1];
            }
            if (factor || persistent) {
                out.status = LengthResult::Status::Divergent;
                return out;
            }
        }
    }
    out.status = LengthResult::Status::Indeterminate;
    return out;
}

LengthResult smooth_length(const CurveSpec& c, const GradedSpace& space)
{
    const GradedSpace std_space = space.with_flavor(Flavor::Standard);
    if (constant_velocity(c)) {
        LengthResult out;
        out.value = std_space.norm(c.direction);
        out.history = {out.value};
        return out;
    }
    // Ladder depth is fixed up front so every node contributes the same components.
    std::size_t depth = 1;
    for (int j = 0; j <= 16; ++j) {
        depth = std::max(depth, std_space.full_ladder(c.velocity(c.t0 + (c.t1 - c.t0) * j / 16.0)).size());
    }
    const Quad q = adaptive_gk15(
        [&](double t) {
            const GradedPoint v = c.velocity(t);
            if (!v.all_finite()) {
                throw EvaluationError("smooth_length: velocity not finite at t = " + std::to_string(t));
            }
            const SeminormLadder l = std_space.ladder(v, depth);
            return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(l.data(), static_cast<Eigen::Index>(l.size())));
        },
        c.t0, c.t1);
    const SeminormLadder total(q.value.data(), q.value.data() + q.value.size());
    return from_quad(q, std_space.norm_of_ladder(total));
}

LengthResult metric_length(const CurveSpec& c, const GradedSpace& space)
{
    if (constant_velocity(c)) {
        LengthResult out;
        out.value = metric_integrand(space, c.direction);
        out.history = {out.value};
        return out;
    }
    const Quad q = adaptive_gk15(
        [&](double t) {
            const GradedPoint v = c.velocity(t);
            if (!v.all_finite()) {
                throw EvaluationError("metric_length: velocity not finite at t = " + std::to_string(t));
            }
            return Eigen::VectorXd::Constant(1, metric_integrand(space, v)).eval();
        },
        c.t0, c.t1);
    return from_quad(q, q.value(0));
}

double curve_speed(const CurveSpec& c, const GradedSpace& space, double t)
{
    return space.speed(c.velocity(t));
}

CurveSpec arclength_reparam(const CurveSpec& c, const GradedSpace& space, std::size_t nodes)
{
    if (nodes < 1) {
        throw DomainError("arclength_reparam: need at least one interval");
    }
    const double h = (c.t1 - c.t0) / static_cast<double>(nodes);
    std::vector<double> grid(nodes + 1);
    for (std::size_t j = 0; j <= nodes; ++j) {
        grid[j] = j == nodes ? c.t1 : c.t0 + h * static_cast<double>(j);
        const double s = curve_speed(c, space, grid[j]);
        if (!(s > 1e-14)) {
            throw SingularVelocity("arclength_reparam: vanishing speed at t = " + std::to_string(grid[j]));
        }
    }
    const GaussRule& g = gauss_legendre(16);
    auto speed = [c, space](double t) { return curve_speed(c, space, t); };
    auto partial = [g, speed](double a, double b) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            s += 0.5 * (b - a) * g.w[i] * speed(a + 0.5 * (b - a) * (g.x[i] + 1.0));
        }
        return s;
    };
    std::vector<double> cum(nodes + 1, 0.0);
    for (std::size_t j = 0; j < nodes; ++j) {
        cum[j + 1] = cum[j] + partial(grid[j], grid[j + 1]);
    }

    auto invert = [grid, cum, partial, speed](double sigma) {
        const std::size_t n = grid.size() - 1;
        sigma = std::clamp(sigma, 0.0, cum.back());
        std::size_t j = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), sigma) - cum.begin());
        j = std::min(j == 0 ? 0 : j - 1, n - 1);
        double lo = grid[j];
        double hi = grid[j + 1];
        const double span = cum[j + 1] - cum[j];
        double t = span > 0.0 ? lo + (sigma - cum[j]) / span * (hi - lo) : lo;
        for (int it = 0; it < 50; ++it) {
            const double g = cum[j] + partial(grid[j], t) - sigma;
            if (std::abs(g) <= 1e-15 * std::max(1.0, cum.back())) {
                break;
            }
            (g > 0.0 ? hi : lo) = t;
            double next = t - g / speed(t);
            if (!(next > lo && next < hi)) {
                next = 0.5 * (lo + hi);
            }
            if (next == t) {
                break;
            }
            t = next;
        }
        return t;
    };

    CurveSpec out;
    out.kind = CurveSpec::Kind::ClosedForm;
    out.t0 = 0.0;
    out.t1 = cum.back();
    out.position = [c, invert](double sigma) { return c.position(invert(sigma)); };
    out.velocity = [c, invert, speed](double sigma) {
        const double t = invert(sigma);
        return (1.0 / speed(t)) * c.velocity(t);
    };
    return out;
}

MinimalityResult affine_minimality_probe(const GradedPoint& a, const GradedPoint& b,
                                         const GradedSpace& space,
                                         const std::vector<GradedPoint>& perturbations, double amp)
{
    const double base = smooth_length(affine_curve(a, b), space).value;
    const GradedPoint d = b - a;
    double dd = 0.0;
    for (double x : d.data) {
        dd += x * x;
    }
    MinimalityResult out;
    out.margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < perturbations.size(); ++k) {
        GradedPoint w = perturbations[k];
        require_compatible(w, d);
        if (dd > 0.0) {
            double wd = 0.0;
            for (std::size_t i = 0; i < d.data.size(); ++i) {
                wd += w.data[i] * d.data[i];
            }
            w -= (wd / dd) * d;
        }
        const CurveSpec c = closed_form_curve(
            [a, d, w, amp](double t) { return a + t * d + (amp * std::sin(std::numbers::pi * t)) * w; },
            [d, w, amp](double t) { return d + (amp * std::numbers::pi * std::cos(std::numbers::pi * t)) * w; });
        const double m = smooth_length(c, space).value - base;
        out.margins.push_back(m);
        if (m < out.margin) {
            out.margin = m;
            out.witness = k;
        }
    }
    if (perturbations.empty()) {
        out.margin = 0.0;
    }
    out.holds = out.margin >= -1e-9;
    return out;
}

CurveSpec concatenate(const CurveSpec& c1, const CurveSpec& c2)
{
    const double split = c1.t1;
    const double shift = c2.t0 - split;
    const double end = split + (c2.t1 - c2.t0);
    return closed_form_curve(
        [c1, c2, split, shift](double t) { return t <= split ? c1.position(t) : c2.position(t + shift); },
        [c1, c2, split, shift](double t) { return t <= split ? c1.velocity(t) : c2.velocity(t + shift); },
        c1.t0, end);
}

CurveSpec restrict_curve(const CurveSpec& c, double s0, double s1)
{
    if (!(s0 >= c.t0 && s1 <= c.t1 && s0 < s1)) {
        throw DomainError("restrict_curve: interval outside the curve domain");
    }
    return closed_form_curve(c.position, c.velocity, s0, s1);
}

}  // namespace frechet
