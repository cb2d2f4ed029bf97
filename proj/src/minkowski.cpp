#include "frechet/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frechet/errors.hpp"
#include "frechet/probes.hpp"

namespace frechet {

double ball_gauge(const GradedSpace& space, double radius, const GradedPoint& v)
{
    const WeightSequence& w = space.weights();
    std::size_t levels = 0;
    while (w.at(levels) > radius) {
        ++levels;
    }
    if (levels == 0 || v.is_zero()) {
        return 0.0;
    }
    const SeminormLadder l = space.ladder(v, levels);
    double g = 0.0;
    for (std::size_t q = 0; q < levels; ++q) {
        g = std::max(g, l[q] / phi_inverse(radius / w.at(q)));
    }
    return g;
}

double minkowski_functional(const GradedSpace& space, std::size_t i, const GradedPoint& v, double tol)
{
    if (i == 0 || !(tol > 0.0)) {
        throw DomainError("minkowski_functional: need i >= 1 and tol > 0");
    }
    const double target = 1.0 / static_cast<double>(i);
    if (target >= space.weights().at(0)) {
        throw DegenerateBall("minkowski_functional: radius 1/" + std::to_string(i) +
                             " is not below the largest weight");
    }
    if (v.is_zero()) {
        return 0.0;
    }
    const GradedSpace sup = space.with_flavor(Flavor::Supremum);
    auto inside = [&](double lambda) { return sup.norm((1.0 / lambda) * v) <= target; };

    double lo = 1.0;
    double hi = 1.0;
    while (!inside(hi)) {
        hi *= 2.0;
        if (hi > 1e300) {
            throw EvaluationError("minkowski_functional: no bracketing scale");
        }
    }
    while (inside(lo)) {
        lo *= 0.5;
        if (lo < 1e-300) {
            return 0.0;
        }
    }
    // Invariant: v/lo outside, v/hi inside.
    while (hi / lo - 1.0 > 0.25 * tol) {
        const double mid = std::sqrt(lo * hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (inside(mid) ? hi : lo) = mid;
    }
    return hi;
}

double dyadic_minkowski(const GradedSpace& space, std::size_t n, const GradedPoint& v)
{
    return ball_gauge(space, std::ldexp(1.0, -static_cast<int>(n)), v);
}

SeminormFamily ladder_family(const GradedSpace& space)
{
    return [space](const GradedPoint& v, std::size_t levels) { return space.ladder(v, levels); };
}

SeminormFamily dyadic_minkowski_family(const GradedSpace& space)
{
    return [space](const GradedPoint& v, std::size_t levels) {
        std::vector<double> out(levels);
        for (std::size_t n = 0; n < levels; ++n) {
            out[n] = dyadic_minkowski(space, n, v);
        }
        return out;
    };
}

std::vector<std::vector<GradedPoint>> tame_probe_groups(ModelKind kind, std::size_t dim,
                                                        std::size_t random_count,
                                                        const std::vector<double>& magnitudes,
                                                        std::uint64_t seed)
{
    std::vector<GradedPoint> dirs;
    for (std::size_t k = 0; k < dim; ++k) {
        GradedPoint e{kind, std::vector<double>(dim, 0.0)};
        e.data[k] = 1.0;
        dirs.push_back(std::move(e));
    }
    for (GradedPoint& d : random_points(kind, dim, random_count, seed)) {
        double n2 = 0.0;
        for (double x : d.data) {
            n2 += x * x;
        }
        dirs.push_back((1.0 / std::sqrt(n2)) * d);
    }
    std::vector<std::vector<GradedPoint>> groups;
    for (double m : magnitudes) {
        std::vector<GradedPoint> g;
        g.reserve(dirs.size());
        for (const GradedPoint& d : dirs) {
            g.push_back(m * d);
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LevelCheck {
    bool ok = true;
    double constant = 0.0;
    std::size_t group = 0;
    std::size_t probe = 0;
    std::string reason;
};

}  // namespace

TameEstimate tame_grade_estimate(const SeminormFamily& a, const SeminormFamily& b,
                                 const std::vector<std::vector<GradedPoint>>& groups,
                                 std::size_t levels, std::size_t max_grade, double stability)
{
    // Evaluate both families once per probe.
    std::vector<std::vector<std::vector<double>>> A(groups.size());
    std::vector<std::vector<std::vector<double>>> Bv(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (const GradedPoint& v : groups[g]) {
            A[g].push_back(a(v, levels));
            Bv[g].push_back(b(v, levels));
        }
    }

    auto check = [&](std::size_t n, std::size_t r) {
        LevelCheck res;
        double lo = kInf;
        double hi = 0.0;
        bool any = false;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            double gmax = 0.0;
            bool gany = false;
            for (std::size_t j = 0; j < groups[g].size(); ++j) {
                const double num = A[g][j][n];
                const double den = Bv[g][j][n + r];
                if (num == 0.0) {
                    continue;
                }
                const double ratio = den == 0.0 ? kInf : num / den;
                gany = true;
                if (ratio > gmax) {
                    gmax = ratio;
                    if (!std::isfinite(ratio)) {
                        res.ok = false;
                        res.group = g;
                        res.probe = j;
                        res.reason = "infinite ratio";
                        return res;
                    }
                    if (gmax >= hi) {
                        res.group = g;
                        res.probe = j;
                    }
                }
            }
            if (gany) {
                any = true;
                lo = std::min(lo, gmax);
                hi = std::max(hi, gmax);
            }
        }
        res.constant = any ? hi : 0.0;
        if (any && hi >= stability * lo) {
            res.ok = false;
            res.reason = "unstable across magnitudes";
        }
        return res;
    };

    TameEstimate est;
    est.stability_threshold = stability;
    LevelCheck first_failure;
    std::size_t first_failure_level = 0;
    bool have_failure = false;
    for (std::size_t r = 0; r <= max_grade && r + 1 < levels; ++r) {
        const std::size_t top = levels - r;  // n + r < levels
        std::vector<LevelCheck> checks(top);
        for (std::size_t n = 0; n < top; ++n) {
            checks[n] = check(n, r);
        }
        for (std::size_t base = 0; base + 1 < top; ++base) {
            bool ok = true;
            for (std::size_t n = base + 1; n < top; ++n) {
                if (!checks[n].ok) {
                    ok = false;
                    if (!have_failure) {
                        have_failure = true;
                        first_failure = checks[n];
                        first_failure_level = n;
                    }
                    break;
                }
            }
            if (ok) {
                est.satisfied = true;
                est.base = base;
                est.grade = r;
                for (std::size_t n = base + 1; n < top; ++n) {
                    est.constants.push_back(checks[n].constant);
                }
                return est;
            }
        }
    }
    est.satisfied = false;
    if (have_failure) {
        est.witness = groups[first_failure.group][first_failure.probe];
        est.witness_level = first_failure_level;
        est.reason = first_failure.reason;
    } else {
        est.reason = "no admissible (base, grade) pair";
    }
    return est;
}

}  // namespace frechet
