#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <span>
#include <vector>

namespace txdisc {

enum class KernelFamily {
  kMatern52,
  kSquaredExponential,
  kConstant,
  kLinear,
  kSum,      // sum of child kernels
  kProduct,  // product of child kernels
};

struct KernelSpec {
  KernelFamily family = KernelFamily::kMatern52;
  double signal_var = 1.0;
  double lengthscale = 1.0;
  std::vector<KernelSpec> children;  // only for kSum / kProduct
};

// k(x, x') for a single input pair. Throws on dimension mismatch or an
// empty composite.
double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& x_prime);

// Dense kernel matrix K(A, B) with rows of A and B as inputs.
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& a,
                              const Eigen::MatrixXd& b);

struct GpDataset {
  Eigen::MatrixXd inputs;     // n x p
  Eigen::VectorXd labels;     // n
  Eigen::VectorXd noise_var;  // size 1 (shared) or n (per-point variances)

  Eigen::Index size() const { return inputs.rows(); }
  // Per-point noise variance, resolving the shared-scalar case.
  double noise_at(Eigen::Index i) const {
    return noise_var.size() == 1 ? noise_var(0) : noise_var(i);
  }
};

struct GpPrediction {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  Eigen::VectorXd std;  // sqrt of the clamped covariance diagonal
};

// Exact GP conditioned on its dataset. The Cholesky factorization of
// K(X,X) + diag(noise) + jitter*I is computed once at construction; a small
// noise floor is always added and the jitter escalates x10 up to 1e-2 if
// the factorization fails.
class GpModel {
 public:
  GpModel(KernelSpec kernel, double mean_const, GpDataset dataset);

  const KernelSpec& kernel() const { return kernel_; }
  double mean_const() const { return mean_const_; }
  const GpDataset& dataset() const { return dataset_; }
  double jitter() const { return jitter_; }

  GpPrediction predict(const Eigen::MatrixXd& test_inputs) const;
  double log_marginal_likelihood() const;

  // Lower Cholesky factor of the regularized train covariance (n = 0 gives
  // an empty matrix). Exposed for factorization-consistency checks.
  Eigen::MatrixXd chol_lower() const;

  static constexpr double kNoiseFloor = 1e-6;
  static constexpr double kMaxJitter = 1e-2;

 private:
  KernelSpec kernel_;
  double mean_const_ = 0.0;
  GpDataset dataset_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;  // [K + noise]^-1 (y - mean)
  double jitter_ = 0.0;
};

// Posterior mean/covariance at the test inputs (the prior when the model's
// dataset is empty).
GpPrediction posterior_predict(const GpModel& model,
                               const Eigen::MatrixXd& test_inputs);

double log_marginal_likelihood(const GpModel& model);

struct FitOptions {
  double log_sv_lo = -6.0, log_sv_hi = 4.0;
  double log_ell_lo = -4.0, log_ell_hi = 4.0;
  int grid_per_dim = 8;     // coarse log-grid seeding the local searches
  int restarts = 8;         // Nelder-Mead starts taken from the best seeds
  int max_evals_per_start = 60;
};

// Maximizes the log marginal likelihood over (signal_var, lengthscale) with
// a coarse log-grid followed by Nelder-Mead restarts. Requires n >= 2 and a
// leaf kernel family.
GpModel fit_hyperparams(const GpDataset& dataset, const KernelSpec& spec,
                        double mean_const, const FitOptions& opts = {});

// Coefficient of determination 1 - SS_res / SS_tot. Requires equal lengths
// >= 2 and non-constant truth.
double r2_score(std::span<const double> truth,
                std::span<const double> predictions);

}  // namespace txdisc
