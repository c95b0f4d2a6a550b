#include "tvbo/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace tvbo {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kSqrt5 = 2.23606797749979;

bool is_half_integer_nu(double nu) {
    return nu == 0.5 || nu == 1.5 || nu == 2.5;
}

} // namespace

void KernelSpec::validate() const {
    if (!(lengthscale > 0.0))
        throw std::invalid_argument("KernelSpec: lengthscale must be > 0");
    if (!(output_scale > 0.0))
        throw std::invalid_argument("KernelSpec: output_scale must be > 0");
    if (family == KernelFamily::Matern && !is_half_integer_nu(nu))
        throw std::invalid_argument("KernelSpec: Matern nu must be one of 0.5, 1.5, 2.5");
}

double kernel_eval_r(const KernelSpec& spec, double r) {
    const double l = spec.lengthscale;
    const double s2 = spec.output_scale;
    if (spec.family == KernelFamily::SquaredExponential)
        return s2 * std::exp(-0.5 * (r / l) * (r / l));
    if (spec.nu == 0.5)
        return s2 * std::exp(-r / l);
    if (spec.nu == 1.5) {
        const double z = kSqrt3 * r / l;
        return s2 * (1.0 + z) * std::exp(-z);
    }
    // nu == 2.5
    const double z = kSqrt5 * r / l;
    return s2 * (1.0 + z + z * z / 3.0) * std::exp(-z);
}

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& x2) {
    return kernel_eval_r(spec, (x - x2).norm());
}

Eigen::MatrixXd kernel_gram(const KernelSpec& spec,
                            const std::vector<Eigen::VectorXd>& points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        gram(i, i) = spec.output_scale;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = kernel_eval(spec, points[i], points[j]);
            gram(i, j) = v;
            gram(j, i) = v;
        }
    }
    return gram;
}

Eigen::VectorXd kernel_cross(const KernelSpec& spec,
                             const std::vector<Eigen::VectorXd>& points,
                             const Eigen::VectorXd& x) {
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i)
        out(i) = kernel_eval(spec, points[i], x);
    return out;
}

} // namespace tvbo
