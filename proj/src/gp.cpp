#include "txdisc/gp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace txdisc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double stationary_eval(const KernelSpec& spec, double r) {
  switch (spec.family) {
    case KernelFamily::kMatern52: {
      const double s = std::sqrt(5.0) * r / spec.lengthscale;
      return spec.signal_var * (1.0 + s + s * s / 3.0) * std::exp(-s);
    }
    case KernelFamily::kSquaredExponential: {
      const double q = r / spec.lengthscale;
      return spec.signal_var * std::exp(-0.5 * q * q);
    }
    default:
      throw std::logic_error("stationary_eval: not a stationary family");
  }
}

bool is_stationary(KernelFamily f) {
  return f == KernelFamily::kMatern52 ||
         f == KernelFamily::kSquaredExponential;
}

}  // namespace

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& x_prime) {
  if (x.size() != x_prime.size()) {
    throw std::invalid_argument("kernel_eval: input dimension mismatch");
  }
  switch (spec.family) {
    case KernelFamily::kMatern52:
    case KernelFamily::kSquaredExponential:
      return stationary_eval(spec, (x - x_prime).norm());
    case KernelFamily::kConstant:
      return spec.signal_var;
    case KernelFamily::kLinear:
      return spec.signal_var * x.dot(x_prime);
    case KernelFamily::kSum:
    case KernelFamily::kProduct: {
      if (spec.children.empty()) {
        throw std::invalid_argument("kernel_eval: empty composite kernel");
      }
      double acc = spec.family == KernelFamily::kSum ? 0.0 : 1.0;
      for (const KernelSpec& child : spec.children) {
        const double v = kernel_eval(child, x, x_prime);
        acc = spec.family == KernelFamily::kSum ? acc + v : acc * v;
      }
      return acc;
    }
  }
  throw std::logic_error("kernel_eval: unknown family");
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& a,
                              const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("kernel_matrix: input dimension mismatch");
  }
  Eigen::MatrixXd k(a.rows(), b.rows());
  if (is_stationary(spec.family)) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < b.rows(); ++j) {
        k(i, j) = stationary_eval(spec, (a.row(i) - b.row(j)).norm());
      }
    }
    return k;
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      k(i, j) = kernel_eval(spec, a.row(i).transpose(), b.row(j).transpose());
    }
  }
  return k;
}

GpModel::GpModel(KernelSpec kernel, double mean_const, GpDataset dataset)
    : kernel_(std::move(kernel)),
      mean_const_(mean_const),
      dataset_(std::move(dataset)) {
  const Eigen::Index n = dataset_.size();
  if (n == 0) return;
  if (dataset_.labels.size() != n) {
    throw std::invalid_argument("GpModel: labels/inputs size mismatch");
  }
  if (dataset_.noise_var.size() != 1 && dataset_.noise_var.size() != n) {
    throw std::invalid_argument("GpModel: noise vector must be scalar or n");
  }
  for (Eigen::Index i = 0; i < dataset_.noise_var.size(); ++i) {
    if (!(dataset_.noise_var(i) >= 0.0)) {
      throw std::invalid_argument("GpModel: negative noise variance");
    }
  }

  Eigen::MatrixXd a = kernel_matrix(kernel_, dataset_.inputs, dataset_.inputs);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) += dataset_.noise_at(i) + kNoiseFloor;
  }

  for (double jitter = 0.0;;) {
    Eigen::MatrixXd regularized = a;
    if (jitter > 0.0) {
      regularized.diagonal().array() += jitter;
    }
    llt_.compute(regularized);
    if (llt_.info() == Eigen::Success) {
      jitter_ = jitter;
      break;
    }
    jitter = jitter == 0.0 ? 1e-8 : jitter * 10.0;
    if (jitter > kMaxJitter) {
      throw std::runtime_error(
          "GpModel: covariance factorization failed at maximum jitter");
    }
  }

  alpha_ = llt_.solve(dataset_.labels -
                      Eigen::VectorXd::Constant(n, mean_const_));
}

Eigen::MatrixXd GpModel::chol_lower() const {
  if (dataset_.size() == 0) return {};
  return llt_.matrixL();
}

GpPrediction GpModel::predict(const Eigen::MatrixXd& test_inputs) const {
  GpPrediction out;
  const Eigen::Index m = test_inputs.rows();
  out.mean = Eigen::VectorXd::Constant(m, mean_const_);
  out.cov = kernel_matrix(kernel_, test_inputs, test_inputs);

  if (dataset_.size() > 0) {
    if (test_inputs.cols() != dataset_.inputs.cols()) {
      throw std::invalid_argument("predict: input dimension mismatch");
    }
    const Eigen::MatrixXd cross =
        kernel_matrix(kernel_, dataset_.inputs, test_inputs);  // n x m
    out.mean += cross.transpose() * alpha_;
    const Eigen::MatrixXd v =
        llt_.matrixL().solve(cross);  // L^-1 K(X, X*), n x m
    out.cov -= v.transpose() * v;
    out.cov = (0.5 * (out.cov + out.cov.transpose())).eval();
  }

  out.std = out.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return out;
}

double GpModel::log_marginal_likelihood() const {
  const Eigen::Index n = dataset_.size();
  if (n < 1) {
    throw std::invalid_argument("log_marginal_likelihood: empty dataset");
  }
  const Eigen::VectorXd centered =
      dataset_.labels - Eigen::VectorXd::Constant(n, mean_const_);
  const double quad = centered.dot(alpha_);
  const double log_det =
      2.0 * Eigen::MatrixXd(llt_.matrixL()).diagonal().array().log().sum();
  return -0.5 * quad - 0.5 * log_det - 0.5 * n * std::log(2.0 * M_PI);
}

GpPrediction posterior_predict(const GpModel& model,
                               const Eigen::MatrixXd& test_inputs) {
  return model.predict(test_inputs);
}

double log_marginal_likelihood(const GpModel& model) {
  return model.log_marginal_likelihood();
}

namespace {

struct LmlObjective {
  const GpDataset& dataset;
  KernelSpec spec;  // leaf; signal_var / lengthscale overwritten per eval
  double mean_const;
  const FitOptions& opts;

  double operator()(double log_sv, double log_ell) const {
    KernelSpec s = spec;
    s.signal_var = std::exp(std::clamp(log_sv, opts.log_sv_lo, opts.log_sv_hi));
    s.lengthscale =
        std::exp(std::clamp(log_ell, opts.log_ell_lo, opts.log_ell_hi));
    try {
      return GpModel(s, mean_const, dataset).log_marginal_likelihood();
    } catch (const std::runtime_error&) {
      return kNegInf;
    }
  }
};

struct Candidate {
  double value = kNegInf;
  double log_sv = 0.0;
  double log_ell = 0.0;
};

// Minimal 2-simplex Nelder-Mead ascent on the (clamped) objective. Tracks
// and returns the best point ever evaluated.
Candidate nelder_mead(const LmlObjective& f, Candidate start, int max_evals) {
  struct Vertex {
    double x, y, v;
  };
  auto eval = [&](double x, double y) { return f(x, y); };

  std::array<Vertex, 3> simplex{
      Vertex{start.log_sv, start.log_ell, start.value},
      Vertex{start.log_sv + 0.5, start.log_ell, 0.0},
      Vertex{start.log_sv, start.log_ell + 0.5, 0.0}};
  simplex[1].v = eval(simplex[1].x, simplex[1].y);
  simplex[2].v = eval(simplex[2].x, simplex[2].y);
  int evals = 2;

  Candidate best = start;
  auto consider = [&](const Vertex& vx) {
    if (vx.v > best.value) best = {vx.v, vx.x, vx.y};
  };
  consider(simplex[1]);
  consider(simplex[2]);

  while (evals < max_evals) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.v > b.v; });
    if (simplex[0].v - simplex[2].v < 1e-4) break;

    const double cx = 0.5 * (simplex[0].x + simplex[1].x);
    const double cy = 0.5 * (simplex[0].y + simplex[1].y);
    Vertex refl{cx + (cx - simplex[2].x), cy + (cy - simplex[2].y), 0.0};
    refl.v = eval(refl.x, refl.y);
    ++evals;
    consider(refl);

    if (refl.v > simplex[0].v) {
      Vertex exp_{cx + 2.0 * (cx - simplex[2].x), cy + 2.0 * (cy - simplex[2].y),
                  0.0};
      exp_.v = eval(exp_.x, exp_.y);
      ++evals;
      consider(exp_);
      simplex[2] = exp_.v > refl.v ? exp_ : refl;
    } else if (refl.v > simplex[1].v) {
      simplex[2] = refl;
    } else {
      Vertex contr{cx + 0.5 * (simplex[2].x - cx), cy + 0.5 * (simplex[2].y - cy),
                   0.0};
      contr.v = eval(contr.x, contr.y);
      ++evals;
      consider(contr);
      if (contr.v > simplex[2].v) {
        simplex[2] = contr;
      } else {
        // shrink toward the best vertex
        for (int i = 1; i < 3; ++i) {
          simplex[i].x = 0.5 * (simplex[i].x + simplex[0].x);
          simplex[i].y = 0.5 * (simplex[i].y + simplex[0].y);
          simplex[i].v = eval(simplex[i].x, simplex[i].y);
          ++evals;
          consider(simplex[i]);
        }
      }
    }
  }
  return best;
}

}  // namespace

GpModel fit_hyperparams(const GpDataset& dataset, const KernelSpec& spec,
                        double mean_const, const FitOptions& opts) {
  if (dataset.size() < 2) {
    throw std::invalid_argument("fit_hyperparams: need at least two samples");
  }
  if (!spec.children.empty() || spec.family == KernelFamily::kSum ||
      spec.family == KernelFamily::kProduct) {
    throw std::invalid_argument("fit_hyperparams: composite kernels not fitted");
  }

  const LmlObjective objective{dataset, spec, mean_const, opts};

  std::vector<Candidate> grid;
  grid.reserve(opts.grid_per_dim * opts.grid_per_dim);
  for (int i = 0; i < opts.grid_per_dim; ++i) {
    for (int j = 0; j < opts.grid_per_dim; ++j) {
      Candidate c;
      c.log_sv = opts.log_sv_lo + (opts.log_sv_hi - opts.log_sv_lo) * i /
                                      (opts.grid_per_dim - 1);
      c.log_ell = opts.log_ell_lo + (opts.log_ell_hi - opts.log_ell_lo) * j /
                                        (opts.grid_per_dim - 1);
      c.value = objective(c.log_sv, c.log_ell);
      grid.push_back(c);
    }
  }
  std::sort(grid.begin(), grid.end(),
            [](const Candidate& a, const Candidate& b) { return a.value > b.value; });

  Candidate best = grid.front();
  const int restarts = std::min<int>(opts.restarts, static_cast<int>(grid.size()));
  for (int r = 0; r < restarts; ++r) {
    if (grid[r].value == kNegInf) break;
    const Candidate local =
        nelder_mead(objective, grid[r], opts.max_evals_per_start);
    if (local.value > best.value) best = local;
  }
  if (best.value == kNegInf) {
    throw std::runtime_error("fit_hyperparams: no factorizable candidate");
  }

  KernelSpec fitted = spec;
  fitted.signal_var =
      std::exp(std::clamp(best.log_sv, opts.log_sv_lo, opts.log_sv_hi));
  fitted.lengthscale =
      std::exp(std::clamp(best.log_ell, opts.log_ell_lo, opts.log_ell_hi));
  return GpModel(fitted, mean_const, dataset);
}

double r2_score(std::span<const double> truth,
                std::span<const double> predictions) {
  if (truth.size() != predictions.size() || truth.size() < 2) {
    throw std::invalid_argument("r2_score: need equal lengths >= 2");
  }
  double mean = 0.0;
  for (double t : truth) mean += t;
  mean /= static_cast<double>(truth.size());

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ss_res += (truth[i] - predictions[i]) * (truth[i] - predictions[i]);
    ss_tot += (truth[i] - mean) * (truth[i] - mean);
  }
  if (ss_tot == 0.0) {
    throw std::invalid_argument("r2_score: constant truth has no variance");
  }
  return 1.0 - ss_res / ss_tot;
}

}  // namespace txdisc
