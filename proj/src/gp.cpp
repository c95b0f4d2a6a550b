#include "tvbo/gp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace tvbo {

void ObservationSet::append(Eigen::VectorXd x, Eigen::VectorXd y, long t,
                            double proxy) {
    if (output_dim == 0)
        output_dim = static_cast<int>(y.size());
    if (y.size() != output_dim)
        throw std::invalid_argument("ObservationSet: output dimension mismatch");
    if (!(proxy > 0.0))
        throw std::invalid_argument("ObservationSet: variance proxy must be > 0");
    inputs.push_back(std::move(x));
    outputs.push_back(std::move(y));
    acquired_at.push_back(t);
    variance_proxies.push_back(proxy);
}

void ObservationSet::clear() {
    inputs.clear();
    outputs.clear();
    acquired_at.clear();
    variance_proxies.clear();
}

void ObservationSet::validate() const {
    const auto n = inputs.size();
    if (outputs.size() != n || acquired_at.size() != n ||
        variance_proxies.size() != n)
        throw std::invalid_argument("ObservationSet: field lengths differ");
    for (const auto& y : outputs)
        if (y.size() != output_dim)
            throw std::invalid_argument("ObservationSet: output dimension mismatch");
    for (double p : variance_proxies)
        if (!(p > 0.0))
            throw std::invalid_argument("ObservationSet: variance proxy must be > 0");
}

namespace {

// Cholesky of K + diag(noise) + jitter I, plus its log-determinant.
std::pair<Eigen::MatrixXd, double>
factorize_cov(const KernelSpec& kernel, const std::vector<Eigen::VectorXd>& points,
              const std::vector<double>& noise) {
    Eigen::MatrixXd cov = kernel_gram(kernel, points);
    for (Eigen::Index i = 0; i < cov.rows(); ++i)
        cov(i, i) += (noise.empty() ? 0.0 : noise[static_cast<size_t>(i)]) + kGramJitter;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw NumericalError("GP covariance factorization failed");
    Eigen::MatrixXd lower = llt.matrixL();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < lower.rows(); ++i)
        log_det += 2.0 * std::log(lower(i, i));
    if (!std::isfinite(log_det))
        throw NumericalError("GP covariance log-determinant is not finite");
    return {std::move(lower), log_det};
}

} // namespace

PosteriorModel PosteriorModel::prior(const KernelSpec& kernel, int m) {
    kernel.validate();
    PosteriorModel model;
    model.kernel_ = kernel;
    model.m_ = m;
    return model;
}

PosteriorModel PosteriorModel::fit(const KernelSpec& kernel,
                                   const ObservationSet& obs) {
    obs.validate();
    if (obs.empty())
        return prior(kernel, obs.output_dim);

    PosteriorModel model;
    model.kernel_ = kernel;
    model.m_ = obs.output_dim;
    model.train_inputs_ = obs.inputs;

    auto [lower, log_det] = factorize_cov(kernel, obs.inputs, obs.variance_proxies);
    const auto n = lower.rows();
    Eigen::MatrixXd targets(n, obs.output_dim);
    for (Eigen::Index i = 0; i < n; ++i)
        targets.row(i) = obs.outputs[static_cast<size_t>(i)].transpose();

    // weights = (K + Sigma)^{-1} Y via the two triangular solves
    Eigen::MatrixXd w = lower.triangularView<Eigen::Lower>().solve(targets);
    lower.triangularView<Eigen::Lower>().transpose().solveInPlace(w);

    model.chol_lower_ = std::move(lower);
    model.weights_ = std::move(w);
    model.log_det_ = log_det;
    return model;
}

PosteriorModel::Prediction PosteriorModel::predict(const Eigen::VectorXd& x) const {
    Prediction out;
    if (train_inputs_.empty()) {
        out.mean = Eigen::VectorXd::Zero(m_);
        out.std = Eigen::VectorXd::Constant(m_, std::sqrt(kernel_.output_scale));
        return out;
    }
    const Eigen::VectorXd k_x = kernel_cross(kernel_, train_inputs_, x);
    const Eigen::VectorXd v = chol_lower_.triangularView<Eigen::Lower>().solve(k_x);
    const double var = std::max(0.0, kernel_.output_scale - v.squaredNorm());
    out.mean = weights_.transpose() * k_x;
    out.std = Eigen::VectorXd::Constant(m_, std::sqrt(var));
    return out;
}

void PosteriorModel::predict_many(const std::vector<Eigen::VectorXd>& xs,
                                  Eigen::MatrixXd& mean_out,
                                  Eigen::VectorXd& std_out) const {
    const auto g = static_cast<Eigen::Index>(xs.size());
    mean_out.resize(m_, g);
    std_out.resize(g);
    if (train_inputs_.empty()) {
        mean_out.setZero();
        std_out.setConstant(std::sqrt(kernel_.output_scale));
        return;
    }
    const auto n = static_cast<Eigen::Index>(train_inputs_.size());
    Eigen::MatrixXd cross(n, g);
    for (Eigen::Index j = 0; j < g; ++j)
        cross.col(j) = kernel_cross(kernel_, train_inputs_, xs[static_cast<size_t>(j)]);
    mean_out = weights_.transpose() * cross;
    chol_lower_.triangularView<Eigen::Lower>().solveInPlace(cross);
    for (Eigen::Index j = 0; j < g; ++j) {
        const double var =
            std::max(0.0, kernel_.output_scale - cross.col(j).squaredNorm());
        std_out(j) = std::sqrt(var);
    }
}

namespace {

double beta_from_logdet(double log_det_cov, const ObservationSet& obs, double delta,
                        double rkhs_bound, int m, BetaDenominator denom,
                        const KernelSpec& kernel) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("beta: delta must lie in (0, 1)");
    if (rkhs_bound < 0.0)
        throw std::invalid_argument("beta: RKHS bound must be >= 0");
    if (m < 1)
        throw std::invalid_argument("beta: output dimension must be >= 1");

    double log_det_den = 0.0;
    if (!obs.empty()) {
        if (denom == BetaDenominator::Sigma) {
            for (double p : obs.variance_proxies)
                log_det_den += std::log(p);
        } else {
            log_det_den = factorize_cov(kernel, obs.inputs, {}).second;
        }
    }
    const double arg =
        std::log(static_cast<double>(m) / delta) + 0.5 * (log_det_cov - log_det_den);
    if (!std::isfinite(arg))
        throw NumericalError("beta: non-finite log-determinant ratio");
    return rkhs_bound + std::sqrt(2.0 * arg);
}

} // namespace

double beta_value(const KernelSpec& kernel, const ObservationSet& obs, double delta,
                  double rkhs_bound, int m, BetaDenominator denom) {
    obs.validate();
    const double log_det_cov =
        obs.empty() ? 0.0
                    : factorize_cov(kernel, obs.inputs, obs.variance_proxies).second;
    return beta_from_logdet(log_det_cov, obs, delta, rkhs_bound, m, denom, kernel);
}

double beta_value(const PosteriorModel& model, const ObservationSet& obs,
                  double delta, double rkhs_bound, int m, BetaDenominator denom) {
    return beta_from_logdet(model.log_det_cov(), obs, delta, rkhs_bound, m, denom,
                            model.kernel());
}

ConfidenceBox make_box(const Eigen::VectorXd& mean, const Eigen::VectorXd& std,
                       double beta) {
    if (beta < 0.0)
        throw std::invalid_argument("confidence_box: beta must be >= 0");
    return {mean - beta * std, mean + beta * std};
}

ConfidenceBox confidence_box(const PosteriorModel& model, const Eigen::VectorXd& x,
                             double beta) {
    const auto pred = model.predict(x);
    return make_box(pred.mean, pred.std, beta);
}

double information_gain(const KernelSpec& kernel,
                        const std::vector<Eigen::VectorXd>& points,
                        double noise_var) {
    if (!(noise_var > 0.0))
        throw std::invalid_argument("information_gain: noise_var must be > 0");
    if (points.empty())
        return 0.0;
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd a = kernel_gram(kernel, points) / noise_var;
    a += Eigen::MatrixXd::Identity(n, n);
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
        throw NumericalError("information_gain: factorization failed");
    double log_det = 0.0;
    const Eigen::MatrixXd lower = llt.matrixL();
    for (Eigen::Index i = 0; i < n; ++i)
        log_det += 2.0 * std::log(lower(i, i));
    return 0.5 * log_det;
}

} // namespace tvbo
