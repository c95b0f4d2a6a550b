#pragma once

#include "tvbo/errors.hpp"
#include "tvbo/kernels.hpp"

#include <Eigen/Dense>
#include <vector>

namespace tvbo {

// Time-stamped training data with one effective noise variance per
// observation. Outputs are m-vectors; the m coordinates are modeled by
// independent GPs sharing inputs, kernel, and noise.
struct ObservationSet {
    std::vector<Eigen::VectorXd> inputs;
    std::vector<Eigen::VectorXd> outputs;
    std::vector<long> acquired_at;
    std::vector<double> variance_proxies;
    int output_dim = 0;

    ObservationSet() = default;
    explicit ObservationSet(int m) : output_dim(m) {}

    int size() const { return static_cast<int>(inputs.size()); }
    bool empty() const { return inputs.empty(); }
    void append(Eigen::VectorXd x, Eigen::VectorXd y, long t, double proxy);
    void clear();
    void validate() const; // throws std::invalid_argument
};

enum class BetaDenominator { K, Sigma };

// Heteroscedastic GP posterior over m output coordinates. Immutable after
// construction; safe to read concurrently. With no observations it is the
// prior: mean 0 and standard deviation sqrt(output_scale) everywhere.
class PosteriorModel {
public:
    struct Prediction {
        Eigen::VectorXd mean; // m
        Eigen::VectorXd std;  // m, identical coordinates (shared kernel/noise)
    };

    static PosteriorModel prior(const KernelSpec& kernel, int m);

    // Factorizes K + diag(proxies) + jitter I once and solves for the m
    // weight vectors. Throws NumericalError if the factorization fails.
    static PosteriorModel fit(const KernelSpec& kernel, const ObservationSet& obs);

    Prediction predict(const Eigen::VectorXd& x) const;

    // Batched prediction: mean_out is m x G, std_out is G (std is shared
    // across output coordinates).
    void predict_many(const std::vector<Eigen::VectorXd>& xs,
                      Eigen::MatrixXd& mean_out, Eigen::VectorXd& std_out) const;

    // log|K + Sigma + jitter I| of the fitted system; 0 for the prior.
    double log_det_cov() const { return log_det_; }

    int output_dim() const { return m_; }
    int train_size() const { return static_cast<int>(train_inputs_.size()); }
    const KernelSpec& kernel() const { return kernel_; }

private:
    PosteriorModel() = default;

    KernelSpec kernel_;
    int m_ = 0;
    std::vector<Eigen::VectorXd> train_inputs_;
    Eigen::MatrixXd chol_lower_; // L with L L^T = K + Sigma + jitter I
    Eigen::MatrixXd weights_;    // n x m
    double log_det_ = 0.0;
};

// Confidence scaling
//   beta = B + sqrt(2 log((m/delta) |Sigma+K|^{1/2} / |D|^{1/2}))
// where D is K + jitter I or Sigma depending on the denominator flag.
// Throws NumericalError on non-finite log-determinants.
double beta_value(const KernelSpec& kernel, const ObservationSet& obs, double delta,
                  double rkhs_bound, int m,
                  BetaDenominator denom = BetaDenominator::Sigma);

// Same, reusing the factorization of an already-fitted model for the
// numerator.
double beta_value(const PosteriorModel& model, const ObservationSet& obs,
                  double delta, double rkhs_bound, int m,
                  BetaDenominator denom = BetaDenominator::Sigma);

// Axis-aligned confidence region [mean - beta std, mean + beta std].
struct ConfidenceBox {
    Eigen::VectorXd lcb;
    Eigen::VectorXd ucb;
};

ConfidenceBox make_box(const Eigen::VectorXd& mean, const Eigen::VectorXd& std,
                       double beta);
ConfidenceBox confidence_box(const PosteriorModel& model, const Eigen::VectorXd& x,
                             double beta);

// gamma = 1/2 log det(I + noise_var^{-1} K). Diagnostic only.
double information_gain(const KernelSpec& kernel,
                        const std::vector<Eigen::VectorXd>& points,
                        double noise_var);

} // namespace tvbo
