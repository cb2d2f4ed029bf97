#include "frechet/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "frechet/errors.hpp"

namespace frechet {

const char* to_string(ModelKind kind)
{
    return kind == ModelKind::Sequence ? "sequence" : "periodic";
}

// ---- GradedPoint ---------------------------------------------------------

GradedPoint GradedPoint::sequence(std::vector<double> coords)
{
    return GradedPoint{ModelKind::Sequence, std::move(coords)};
}

GradedPoint GradedPoint::periodic(std::vector<double> coeffs)
{
    if (coeffs.empty() || coeffs.size() % 2 == 0) {
        throw ShapeError("periodic point needs 2B+1 coefficients");
    }
    return GradedPoint{ModelKind::Periodic, std::move(coeffs)};
}

GradedPoint GradedPoint::zero_like(const GradedPoint& p)
{
    return GradedPoint{p.kind, std::vector<double>(p.data.size(), 0.0)};
}

std::size_t GradedPoint::bandwidth() const
{
    if (kind != ModelKind::Periodic) {
        throw ShapeError("bandwidth of a sequence point");
    }
    return (data.size() - 1) / 2;
}

double GradedPoint::cos_coeff(std::size_t k) const
{
    return k == 0 ? data[0] : data[2 * k - 1];
}

double GradedPoint::sin_coeff(std::size_t k) const
{
    return k == 0 ? 0.0 : data[2 * k];
}

std::complex<double> GradedPoint::fourier(int k) const
{
    const std::size_t m = static_cast<std::size_t>(std::abs(k));
    if (m > bandwidth()) {
        return {0.0, 0.0};
    }
    if (m == 0) {
        return {data[0], 0.0};
    }
    const std::complex<double> c{0.5 * cos_coeff(m), -0.5 * sin_coeff(m)};
    return k > 0 ? c : std::conj(c);
}

bool GradedPoint::is_zero() const
{
    return std::all_of(data.begin(), data.end(), [](double x) { return x == 0.0; });
}

bool GradedPoint::all_finite() const
{
    return std::all_of(data.begin(), data.end(), [](double x) { return std::isfinite(x); });
}

void require_compatible(const GradedPoint& a, const GradedPoint& b)
{
    if (a.kind != b.kind || a.data.size() != b.data.size()) {
        throw ShapeError(std::string("incompatible points: ") + to_string(a.kind) + "/" +
                         std::to_string(a.data.size()) + " vs " + to_string(b.kind) + "/" +
                         std::to_string(b.data.size()));
    }
}

GradedPoint& GradedPoint::operator+=(const GradedPoint& o)
{
    require_compatible(*this, o);
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] += o.data[i];
    }
    return *this;
}

GradedPoint& GradedPoint::operator-=(const GradedPoint& o)
{
    require_compatible(*this, o);
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] -= o.data[i];
    }
    return *this;
}

GradedPoint& GradedPoint::operator*=(double c)
{
    for (double& x : data) {
        x *= c;
    }
    return *this;
}

GradedPoint operator+(GradedPoint a, const GradedPoint& b) { return a += b; }
GradedPoint operator-(GradedPoint a, const GradedPoint& b) { return a -= b; }
GradedPoint operator-(GradedPoint a) { return a *= -1.0; }
GradedPoint operator*(double c, GradedPoint a) { return a *= c; }
GradedPoint operator*(GradedPoint a, double c) { return a *= c; }

// ---- periodic ------------------------------------------------------------

GradedPoint periodic_zero(std::size_t bandwidth)
{
    return GradedPoint::periodic(std::vector<double>(2 * bandwidth + 1, 0.0));
}

GradedPoint periodic_sin(std::size_t k, std::size_t bandwidth, double amp)
{
    if (k == 0 || k > bandwidth) {
        throw DomainError("periodic_sin: mode outside 1..B");
    }
    GradedPoint f = periodic_zero(bandwidth);
    f.data[2 * k] = amp;
    return f;
}

GradedPoint periodic_cos(std::size_t k, std::size_t bandwidth, double amp)
{
    if (k > bandwidth) {
        throw DomainError("periodic_cos: mode outside 0..B");
    }
    GradedPoint f = periodic_zero(bandwidth);
    f.data[k == 0 ? 0 : 2 * k - 1] = amp;
    return f;
}

namespace {

struct Derivs {
    double f, df, d2f;
};

Derivs eval_with_derivs(const GradedPoint& f, double x)
{
    const std::size_t B = f.bandwidth();
    Derivs out{f.data[0], 0.0, 0.0};
    const std::complex<double> step{std::cos(x), std::sin(x)};
    std::complex<double> z{1.0, 0.0};
    for (std::size_t k = 1; k <= B; ++k) {
        // Recompute exactly every 16 modes to bound drift of the rotation.
        z = (k % 16 == 0) ? std::complex<double>{std::cos(k * x), std::sin(k * x)} : z * step;
        const double a = f.data[2 * k - 1];
        const double b = f.data[2 * k];
        const double kk = static_cast<double>(k);
        out.f += a * z.real() + b * z.imag();
        out.df += kk * (b * z.real() - a * z.imag());
        out.d2f -= kk * kk * (a * z.real() + b * z.imag());
    }
    return out;
}

struct TrigTable {
    std::size_t M = 0;
    std::vector<double> c, s;
};

const TrigTable& table_for(std::size_t M)
{
    thread_local std::vector<TrigTable> cache;
    for (const TrigTable& t : cache) {
        if (t.M == M) {
            return t;
        }
    }
    TrigTable t;
    t.M = M;
    t.c.resize(M);
    t.s.resize(M);
    for (std::size_t m = 0; m < M; ++m) {
        const double x = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(M);
        t.c[m] = std::cos(x);
        t.s[m] = std::sin(x);
    }
    cache.push_back(std::move(t));
    return cache.back();
}

}  // namespace

double periodic_eval(const GradedPoint& f, double x)
{
    return eval_with_derivs(f, x).f;
}

GradedPoint spectral_derivative(const GradedPoint& f, std::size_t order)
{
    GradedPoint g = f;
    const std::size_t B = f.bandwidth();
    for (std::size_t o = 0; o < order; ++o) {
        g.data[0] = 0.0;
        for (std::size_t k = 1; k <= B; ++k) {
            const double a = g.data[2 * k - 1];
            const double b = g.data[2 * k];
            const double kk = static_cast<double>(k);
            g.data[2 * k - 1] = kk * b;
            g.data[2 * k] = -kk * a;
        }
    }
    return g;
}

double periodic_sup(const GradedPoint& f)
{
    const std::size_t B = f.bandwidth();
    std::size_t modes = 0;
    std::size_t last = 0;
    for (std::size_t k = 1; k <= B; ++k) {
        if (f.data[2 * k - 1] != 0.0 || f.data[2 * k] != 0.0) {
            ++modes;
            last = k;
        }
    }
    if (modes == 0) {
        return std::abs(f.data[0]);
    }
    if (modes == 1 && f.data[0] == 0.0) {
        return std::hypot(f.data[2 * last - 1], f.data[2 * last]);
    }

    const std::size_t M = std::max<std::size_t>(8 * B, 64);
    const TrigTable& t = table_for(M);
    std::vector<double> g(M);
    for (std::size_t j = 0; j < M; ++j) {
        double v = f.data[0];
        for (std::size_t k = 1; k <= last; ++k) {
            const std::size_t idx = (k * j) % M;
            v += f.data[2 * k - 1] * t.c[idx] + f.data[2 * k] * t.s[idx];
        }
        g[j] = std::abs(v);
    }
    const double grid_max = *std::max_element(g.begin(), g.end());
    double best = grid_max;
    const double h = 2.0 * std::numbers::pi / static_cast<double>(M);
    // With 8x oversampling the grid maximum is within about 8% of the true sup.
    const double threshold = 0.92 * grid_max;
    for (std::size_t j = 0; j < M; ++j) {
        const double left = g[(j + M - 1) % M];
        const double right = g[(j + 1) % M];
        if (g[j] < threshold || g[j] < left || g[j] < right) {
            continue;
        }
        const double x0 = h * static_cast<double>(j);
        double x = x0;
        for (int it = 0; it < 30; ++it) {
            const Derivs d = eval_with_derivs(f, x);
            if (d.d2f == 0.0) {
                break;
            }
            const double dx = -d.df / d.d2f;
            x += dx;
            if (std::abs(x - x0) > 2.0 * h) {
                break;
            }
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        if (std::abs(x - x0) <= 2.0 * h) {
            best = std::max(best, std::abs(eval_with_derivs(f, x).f));
        }
    }
    return best;
}

GradedPoint make_fk(int K, std::size_t bandwidth)
{
    if (K <= 0) {
        throw DomainError("make_fk: K must be positive");
    }
    const std::size_t mode = static_cast<std::size_t>(K) * static_cast<std::size_t>(K);
    if (bandwidth < mode) {
        throw DomainError("make_fk: bandwidth below K^2");
    }
    return periodic_sin(mode, bandwidth, 1.0 / static_cast<double>(K));
}

// ---- ladders -------------------------------------------------------------

std::vector<double> level_seminorms(const GradedPoint& v, std::size_t depth)
{
    std::vector<double> out(depth, 0.0);
    if (v.kind == ModelKind::Sequence) {
        for (std::size_t n = 0; n < depth && n < v.data.size(); ++n) {
            out[n] = std::abs(v.data[n]);
        }
        return out;
    }
    GradedPoint d = v;
    for (std::size_t n = 0; n < depth; ++n) {
        if (n > 0) {
            d = spectral_derivative(d);
        }
        out[n] = periodic_sup(d);
    }
    return out;
}

namespace {

SeminormLadder partial_sums(const std::vector<double>& levels)
{
    SeminormLadder out(levels.size());
    double s = 0.0;
    for (std::size_t n = 0; n < levels.size(); ++n) {
        s += levels[n];
        out[n] = s;
    }
    return out;
}

}  // namespace

SeminormLadder seq_ladder(const GradedPoint& v, std::size_t depth)
{
    if (v.kind != ModelKind::Sequence) {
        throw ShapeError("seq_ladder: not a sequence point");
    }
    if (depth > v.data.size()) {
        throw ShapeError("seq_ladder: depth exceeds truncation");
    }
    return partial_sums(level_seminorms(v, depth));
}

SeminormLadder fn_ladder(const GradedPoint& f, std::size_t depth)
{
    if (f.kind != ModelKind::Periodic) {
        throw ShapeError("fn_ladder: not a periodic point");
    }
    return partial_sums(level_seminorms(f, depth));
}

// ---- GradedSpace ---------------------------------------------------------

namespace {

constexpr std::size_t kMaxLevels = 400;
constexpr double kSaturated = 1e17;
constexpr double kNegligible = 1e-17;

}  // namespace

GradedSpace::GradedSpace(ModelKind kind, WeightSequence weights, Flavor flavor)
    : kind_(kind), weights_(std::move(weights)), flavor_(flavor)
{
    weights_.validate();
}

void GradedSpace::check_point(const GradedPoint& v) const
{
    if (v.kind != kind_) {
        throw ShapeError(std::string("point of kind ") + to_string(v.kind) + " in " +
                         to_string(kind_) + " space");
    }
    if (kind_ == ModelKind::Sequence && v.data.size() > weights_.size() &&
        weights_.continuation_ratio == 0.0) {
        throw ShapeError("sequence longer than the weight sequence");
    }
}

SeminormLadder GradedSpace::ladder(const GradedPoint& v, std::size_t depth) const
{
    check_point(v);
    if (kind_ == ModelKind::Sequence) {
        // Past the last coordinate the partial sums stay constant.
        SeminormLadder l = partial_sums(level_seminorms(v, std::min(depth, v.data.size())));
        l.resize(depth, l.empty() ? 0.0 : l.back());
        return l;
    }
    return fn_ladder(v, depth);
}

SeminormLadder GradedSpace::full_ladder(const GradedPoint& v) const
{
    check_point(v);
    if (kind_ == ModelKind::Sequence) {
        return partial_sums(level_seminorms(v, v.data.size()));
    }
    if (v.is_zero()) {
        return SeminormLadder{0.0};
    }
    SeminormLadder out;
    GradedPoint d = v;
    double partial = 0.0;
    double running = 0.0;
    for (std::size_t p = 0; p < kMaxLevels; ++p) {
        if (p > 0) {
            d = spectral_derivative(d);
        }
        running += periodic_sup(d);
        out.push_back(running);
        partial += weights_.at(p) * phi(running);
        if (running >= kSaturated || weights_.at(p + 1) == 0.0) {
            break;
        }
        if (weights_.remaining(p + 1) <= kNegligible * partial) {
            break;
        }
    }
    return out;
}

double GradedSpace::norm_of_ladder(const SeminormLadder& ladder) const
{
    if (ladder.empty()) {
        return 0.0;
    }
    if (flavor_ == Flavor::Supremum) {
        double best = 0.0;
        for (std::size_t p = 0; p < ladder.size(); ++p) {
            best = std::max(best, weights_.at(p) * phi(ladder[p]));
        }
        return best;
    }
    // Add the smallest contributions first.
    double sum = weights_.remaining(ladder.size()) * phi(ladder.back());
    for (std::size_t p = ladder.size(); p > 0; --p) {
        sum += weights_.at(p - 1) * phi(ladder[p - 1]);
    }
    return sum;
}

double GradedSpace::norm(const GradedPoint& v) const
{
    return norm_of_ladder(full_ladder(v));
}

double GradedSpace::distance(const GradedPoint& a, const GradedPoint& b) const
{
    return norm(a - b);
}

double GradedSpace::speed(const GradedPoint& v) const
{
    check_point(v);
    if (kind_ == ModelKind::Sequence) {
        const SeminormLadder l = full_ladder(v);
        if (l.empty()) {
            return 0.0;
        }
        double sum = weights_.remaining(l.size()) * l.back();
        for (std::size_t p = l.size(); p > 0; --p) {
            sum += weights_.at(p - 1) * l[p - 1];
        }
        return sum;
    }
    if (v.is_zero()) {
        return 0.0;
    }
    GradedPoint d = v;
    double running = 0.0;
    double sum = 0.0;
    for (std::size_t p = 0; p < kMaxLevels; ++p) {
        if (p > 0) {
            d = spectral_derivative(d);
        }
        running += periodic_sup(d);
        const double term = weights_.at(p) * running;
        if (!std::isfinite(term)) {
            break;
        }
        sum += term;
        if (weights_.at(p + 1) == 0.0) {
            return sum;
        }
        if (p >= 4 && term <= kNegligible * sum) {
            return sum;
        }
    }
    throw EvaluationError("speed: weighted ladder series does not converge");
}

GradedPoint GradedSpace::zero(std::size_t dim) const
{
    if (kind_ == ModelKind::Periodic && dim % 2 == 0) {
        throw ShapeError("periodic dimension must be odd");
    }
    return GradedPoint{kind_, std::vector<double>(dim, 0.0)};
}

GradedPoint GradedSpace::basis(std::size_t dim, std::size_t k) const
{
    if (k >= dim) {
        throw ShapeError("basis index out of range");
    }
    GradedPoint e = zero(dim);
    e.data[k] = 1.0;
    return e;
}

std::optional<NonConvexityWitness> find_nonconvex_ball_witness(const GradedSpace& space, std::size_t dim)
{
    std::vector<double> scales;
    for (int e = -8; e <= 16; ++e) {
        scales.push_back(std::pow(10.0, 0.25 * e));
    }
    std::optional<NonConvexityWitness> best;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i + 1; j < dim; ++j) {
            for (double s : scales) {
                for (double t : scales) {
                    GradedPoint u = space.zero(dim);
                    GradedPoint v = space.zero(dim);
                    u.data[i] = s;
                    v.data[j] = t;
                    const double R = std::max(space.norm(u), space.norm(v));
                    const double mid = space.norm(0.5 * (u + v));
                    if (mid > R && (!best || mid - R > best->midpoint_norm - best->radius)) {
                        best = NonConvexityWitness{u, v, R, mid};
                    }
                }
            }
        }
    }
    return best;
}

// ---- curves --------------------------------------------------------------

CurveSpec line_curve(const GradedPoint& v)
{
    CurveSpec c;
    c.kind = CurveSpec::Kind::Line;
    c.origin = GradedPoint::zero_like(v);
    c.direction = v;
    c.position = [v](double t) { return t * v; };
    c.velocity = [v](double) { return v; };
    return c;
}

CurveSpec affine_curve(const GradedPoint& a, const GradedPoint& b)
{
    require_compatible(a, b);
    CurveSpec c;
    c.kind = CurveSpec::Kind::Affine;
    c.origin = a;
    c.direction = b - a;
    const GradedPoint dir = c.direction;
    c.position = [a, dir](double t) { return a + t * dir; };
    c.velocity = [dir](double) { return dir; };
    return c;
}

CurveSpec closed_form_curve(std::function<GradedPoint(double)> position,
                            std::function<GradedPoint(double)> velocity, double t0, double t1)
{
    if (!(t1 > t0)) {
        throw DomainError("curve domain must satisfy t0 < t1");
    }
    CurveSpec c;
    c.kind = CurveSpec::Kind::ClosedForm;
    c.t0 = t0;
    c.t1 = t1;
    c.position = std::move(position);
    c.velocity = std::move(velocity);
    return c;
}

}  // namespace frechet
