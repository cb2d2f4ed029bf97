#include "frechet/maps.hpp"

#include <cmath>
#include <numbers>

#include "frechet/errors.hpp"

namespace frechet {

PointMap tau_sine_map(double c)
{
    return [c](const GradedPoint& x) {
        if (x.kind != ModelKind::Sequence) {
            throw ShapeError("tau_sine_map: sequence input required");
        }
        GradedPoint y = x;
        for (std::size_t i = 1; i < x.data.size(); ++i) {
            y.data[i] += c * std::sin(x.data[i - 1]);
        }
        return y;
    };
}

Eigen::MatrixXd tau_sine_jacobian(double c, const GradedPoint& x)
{
    const auto n = static_cast<Eigen::Index>(x.data.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 1; i < n; ++i) {
        J(i, i - 1) = c * std::cos(x.data[static_cast<std::size_t>(i - 1)]);
    }
    return J;
}

namespace {

// exp(-1/x) for x > 0, the usual C^∞ building block.
double psi(double x)
{
    return x > 0.0 ? std::exp(-1.0 / x) : 0.0;
}

}  // namespace

double smooth_bump(double y)
{
    const double a = std::abs(y);
    const double s = (1.2 - a) / 0.6;  // 1 at |y| = 0.6, 0 at |y| = 1.2
    const double num = psi(s);
    const double den = num + psi(1.0 - s);
    return den == 0.0 ? 0.0 : num / den;
}

double bump_sine(double y, double M)
{
    return smooth_bump(y) * std::sin(M * y);
}

GradedPoint project_samples(const std::vector<double>& samples, std::size_t bandwidth)
{
    const std::size_t n = samples.size();
    if (n < 2 * bandwidth + 1) {
        throw ShapeError("project_samples: too few samples for bandwidth");
    }
    GradedPoint f = periodic_zero(bandwidth);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        f.data[0] += samples[j] * inv;
    }
    for (std::size_t k = 1; k <= bandwidth; ++k) {
        double a = 0.0;
        double b = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double x = 2.0 * std::numbers::pi * static_cast<double>((k * j) % n) * inv;
            a += samples[j] * std::cos(x);
            b += samples[j] * std::sin(x);
        }
        f.data[2 * k - 1] = 2.0 * a * inv;
        f.data[2 * k] = 2.0 * b * inv;
    }
    return f;
}

PointMap composition_operator(double M, std::size_t bandwidth)
{
    return [M, bandwidth](const GradedPoint& p) {
        if (p.kind != ModelKind::Periodic || p.bandwidth() != bandwidth) {
            throw ShapeError("composition_operator: bandwidth mismatch");
        }
        const std::size_t n = 16 * bandwidth;
        std::vector<double> samples(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double x = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
            samples[j] = bump_sine(periodic_eval(p, x), M);
        }
        return project_samples(samples, bandwidth);
    };
}

}  // namespace frechet
