#pragma once

// Independent reference computations for tests. Nothing here calls the
// library code it is used to check.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline double phi(double x) { return x / (1.0 + x); }

/// Σ_{n>=1} r^n Φ(δ_{n-1}) with the ladder held at its last value, summed
/// term by term until the weights vanish in double precision.
inline double held_standard_norm(const std::vector<double>& ladder, double r)
{
    double sum = 0.0;
    double w = r;
    for (std::size_t n = 0; w > 1e-300; ++n, w *= r) {
        const double d = ladder.empty() ? 0.0 : ladder[std::min(n, ladder.size() - 1)];
        sum += w * phi(d);
    }
    return sum;
}

inline std::vector<double> partial_sums(const std::vector<double>& v)
{
    std::vector<double> out(v.size());
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += std::abs(v[i]);
        out[i] = s;
    }
    return out;
}

/// Damped Newton for x + c τ(sin x) = y, τ the down-shift.
inline Eigen::VectorXd tau_sine_newton(double c, const Eigen::VectorXd& y)
{
    const Eigen::Index n = y.size();
    auto F = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd r = x - y;
        for (Eigen::Index i = 1; i < n; ++i) {
            r(i) += c * std::sin(x(i - 1));
        }
        return r;
    };
    Eigen::VectorXd x = y;
    for (int it = 0; it < 200; ++it) {
        const Eigen::VectorXd r = F(x);
        if (r.cwiseAbs().maxCoeff() < 1e-17) {
            break;
        }
        Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n);
        for (Eigen::Index i = 1; i < n; ++i) {
            J(i, i - 1) = c * std::cos(x(i - 1));
        }
        const Eigen::VectorXd dx = J.partialPivLu().solve(r);
        double step = 1.0;
        while (step > 1e-10 && F(x - step * dx).norm() > r.norm()) {
            step *= 0.5;
        }
        x -= step * dx;
        if (dx.cwiseAbs().maxCoeff() * step < 1e-18) {
            break;
        }
    }
    return x;
}

/// Singular values of F from the eigenvalues of FᵀF, ascending.
inline std::vector<double> singular_values(const Eigen::MatrixXd& F)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(F.transpose() * F);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        out.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
    }
    return out;
}

/// Random matrix with orthonormal columns from a seeded QR.
inline Eigen::MatrixXd random_orthonormal(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd A(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            A(i, j) = nd(rng);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

}  // namespace oracle
