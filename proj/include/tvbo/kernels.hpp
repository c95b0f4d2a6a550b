#pragma once

#include <Eigen/Dense>
#include <vector>

namespace tvbo {

enum class KernelFamily { SquaredExponential, Matern };

// Stationary covariance spec. Matern smoothness is restricted to the
// half-integers 1/2, 3/2, 5/2, which admit closed forms without Bessel
// functions. output_scale is the prior variance, so eval(x, x) == output_scale.
struct KernelSpec {
    KernelFamily family = KernelFamily::Matern;
    double nu = 1.5;
    double lengthscale = 0.2;
    double output_scale = 1.0;

    void validate() const; // throws std::invalid_argument
};

// Jitter added to Gram diagonals before any factorization. Duplicate inputs
// arise naturally from re-queried points, so Gram matrices are PSD but often
// singular without it.
inline constexpr double kGramJitter = 1e-10;

// k as a function of the pairwise distance r = ||x - x'||_2.
double kernel_eval_r(const KernelSpec& spec, double r);

// k(x, x2).
double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& x2);

// Symmetric n x n matrix K with K(i, j) = k(X[i], X[j]).
Eigen::MatrixXd kernel_gram(const KernelSpec& spec,
                            const std::vector<Eigen::VectorXd>& points);

// n-vector with entry i equal to k(X[i], x).
Eigen::VectorXd kernel_cross(const KernelSpec& spec,
                             const std::vector<Eigen::VectorXd>& points,
                             const Eigen::VectorXd& x);

} // namespace tvbo
