#include "frechet/solver.hpp"

#include <algorithm>
#include <cmath>

#include "frechet/calculus.hpp"

namespace frechet {

std::vector<std::pair<std::size_t, GradedPoint>> SolveTrace::retained() const
{
    std::vector<std::pair<std::size_t, GradedPoint>> out = head;
    for (const auto& it : tail) {
        if (out.empty() || it.first > out.back().first) {
            out.push_back(it);
        }
    }
    return out;
}

std::size_t banach_iterations_needed(double rho, double d01, double tol)
{
    if (d01 == 0.0 || rho == 0.0) {
        return 1;
    }
    std::size_t n = 1;
    double p = rho;
    while (p / (1.0 - rho) * d01 > tol) {
        p *= rho;
        ++n;
        if (n > 100000000) {
            break;
        }
    }
    return n;
}

FixedPointResult banach_fixed_point(const PointMap& T, const GradedPoint& x0, const GradedSpace& space,
                                    double rho, double tol, std::size_t max_iter, std::size_t keep,
                                    const std::function<double(const GradedPoint&)>& residual)
{
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw ContractionViolation("banach_fixed_point: rho must lie in [0,1)");
    }
    if (!(tol > 0.0)) {
        throw DomainError("banach_fixed_point: tol must be positive");
    }
    SolveTrace tr;
    tr.rho = rho;
    tr.keep = keep;
    auto res = [&](const GradedPoint& x, const GradedPoint& next) {
        return residual ? residual(x) : space.distance(next, x);
    };
    auto remember = [&](std::size_t n, const GradedPoint& x) {
        if (tr.head.size() < keep) {
            tr.head.emplace_back(n, x);
        }
        tr.tail.emplace_back(n, x);
        if (tr.tail.size() > keep) {
            tr.tail.erase(tr.tail.begin());
        }
    };

    GradedPoint x = x0;
    remember(0, x);
    std::size_t consecutive = 0;
    for (std::size_t n = 0;; ++n) {
        if (n >= max_iter) {
            tr.iterations = n;
            throw SolveNonConvergence("banach_fixed_point: max_iter reached before the planned " +
                                          std::to_string(tr.planned) + " iterations",
                                      std::move(tr));
        }
        GradedPoint next = T(x);
        if (!next.all_finite()) {
            tr.iterations = n;
            throw SolveNonConvergence("banach_fixed_point: non-finite iterate", std::move(tr));
        }
        tr.residuals.push_back(res(x, next));
        const double step = space.distance(next, x);
        tr.steps.push_back(step);
        if (n == 0) {
            tr.d01 = step;
            tr.planned = banach_iterations_needed(rho, step, tol);
        } else {
            const double prev = tr.steps[n - 1];
            const double ratio = prev == 0.0 ? (step == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                                             : step / prev;
            tr.ratios.push_back(ratio);
            if (ratio > rho + 1e-9 && prev > kStepNoiseFloor) {
                ++tr.violations;
                if (++consecutive >= 3) {
                    tr.iterations = n + 1;
                    throw SolveCertificateViolation(
                        "banach_fixed_point: step ratio " + std::to_string(ratio) +
                            " exceeds rho = " + std::to_string(rho) + " three times in a row",
                        std::move(tr));
                }
            } else {
                consecutive = 0;
            }
        }
        tr.bound_curve.push_back(std::pow(rho, static_cast<double>(n)) / (1.0 - rho) * tr.d01);
        x = std::move(next);
        remember(n + 1, x);
        if (n + 1 >= tr.planned) {
            tr.iterations = n + 1;
            break;
        }
    }
    tr.bound_curve.push_back(std::pow(rho, static_cast<double>(tr.iterations)) / (1.0 - rho) * tr.d01);
    tr.residuals.push_back(residual ? residual(x) : space.distance(T(x), x));
    return {std::move(x), std::move(tr)};
}

RightInverseResult right_inverse_solve(const PointMap& f, const LinearMap& R0, double R0_bound,
                                       const GradedPoint& y, const GradedPoint& x0,
                                       const GradedSpace& space, double rho, double tol,
                                       std::size_t max_iter, double r0)
{
    require_compatible(x0, y);
    if (!(R0_bound > 0.0)) {
        throw DomainError("right_inverse_solve: R0 bound must be positive");
    }
    InverseCertificate cert;
    cert.base = x0;
    cert.r0 = r0;
    cert.rho = rho;
    cert.inverse_bound = R0_bound;
    cert.lower_lipschitz = (1.0 - rho) / R0_bound;
    cert.target_radius = (1.0 - rho) / R0_bound * r0;
    cert.target_distance = space.distance(y, f(x0));
    cert.target_inside = cert.target_distance <= cert.target_radius;

    const PointMap Phi = [&](const GradedPoint& x) { return x - R0.apply(f(x) - y); };
    const auto residual = [&](const GradedPoint& x) { return space.distance(f(x), y); };
    FixedPointResult fp = banach_fixed_point(Phi, x0, space, rho, tol, max_iter, 5, residual);
    RightInverseResult out{fp.x, std::move(fp.trace), cert, 0.0};
    out.residual = residual(out.x);
    return out;
}

InverseCertificate left_inverse_certificate(const PointMap& f, double L0_bound, const GradedPoint& x0,
                                            double r, const GradedSpace& space, double rho,
                                            const std::vector<std::pair<GradedPoint, GradedPoint>>& pairs)
{
    if (!(rho < 1.0)) {
        throw ContractionViolation("left_inverse_certificate: rho >= 1, no certificate");
    }
    InverseCertificate cert;
    cert.base = x0;
    cert.r0 = r;
    cert.rho = rho;
    cert.inverse_bound = L0_bound;
    cert.lower_lipschitz = (1.0 - rho) / L0_bound;
    cert.worst_slack = std::numeric_limits<double>::infinity();
    for (const auto& [x1, x2] : pairs) {
        if (!(space.distance(x1, x0) < r) || !(space.distance(x2, x0) < r)) {
            continue;
        }
        const double lhs = cert.lower_lipschitz * space.distance(x1, x2);
        const double rhs = space.distance(f(x1), f(x2));
        const double slack = rhs - lhs;
        cert.worst_slack = std::min(cert.worst_slack, slack);
        ++cert.pairs_checked;
        if (slack < -1e-9) {
            throw LeftInverseViolation("left_inverse_certificate: lower Lipschitz bound violated by " +
                                           std::to_string(-slack),
                                       x1, x2);
        }
    }
    return cert;
}

InverseDerivativeCheck inverse_derivative_check(const PointMap& f, const PointMap& phi,
                                                const GradedPoint& b,
                                                const std::vector<GradedPoint>& directions,
                                                const GradedSpace& space, double neumann_tol)
{
    const GradedPoint xb = phi(b);
    const Eigen::MatrixXd J = finite_difference_jacobian(f, xb);
    const LinearMap Jmap = LinearMap::dense(xb.kind, J);
    const NeumannResult inv = neumann_invert(Jmap, space, std::numeric_limits<double>::infinity(),
                                             neumann_tol, 100000);
    InverseDerivativeCheck out;
    for (const GradedPoint& v : directions) {
        const GradedPoint lhs = directional_derivative(phi, b, v).value;
        const GradedPoint rhs = inv.inverse.apply(v);
        const double dev = space.norm(lhs - rhs);
        out.deviations.push_back(dev);
        out.max_deviation = std::max(out.max_deviation, dev);
    }
    return out;
}

}  // namespace frechet
