#include "frechet/probes.hpp"

#include <cmath>
#include <random>

namespace frechet {

std::vector<double> log_spaced(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
}

std::vector<GradedPoint> random_points(ModelKind kind, std::size_t dim, std::size_t count,
                                       std::uint64_t seed, double scale)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<GradedPoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        GradedPoint p{kind, std::vector<double>(dim)};
        for (double& x : p.data) {
            x = scale * normal(rng);
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<GradedPoint> generate_probes(ModelKind kind, std::size_t dim, const ProbePlan& plan)
{
    std::vector<GradedPoint> out;
    const std::vector<double> scales = log_spaced(plan.t_min, plan.t_max, plan.basis_scales);
    for (std::size_t k = 0; k < dim; ++k) {
        for (double t : scales) {
            GradedPoint e{kind, std::vector<double>(dim, 0.0)};
            e.data[k] = t;
            out.push_back(std::move(e));
        }
    }
    const std::vector<double> mags = log_spaced(plan.t_min, plan.t_max, plan.magnitudes);
    for (GradedPoint& dir : random_points(kind, dim, plan.random_count, plan.seed)) {
        double n2 = 0.0;
        for (double x : dir.data) {
            n2 += x * x;
        }
        dir *= 1.0 / std::sqrt(n2);
        for (double m : mags) {
            out.push_back(m * dir);
        }
    }
    return out;
}

}  // namespace frechet
