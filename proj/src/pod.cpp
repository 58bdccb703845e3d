#include "txdisc/pod.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "txdisc/csv.hpp"

namespace txdisc {

double PodModel::predict(double rssi) const {
  Eigen::MatrixXd x(1, 1);
  x(0, 0) = rssi;
  return std::clamp(gp.predict(x).mean(0), 0.0, 1.0);
}

GpPrediction PodModel::predict_raw(const std::vector<double>& rssi) const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rssi.size()), 1);
  for (std::size_t i = 0; i < rssi.size(); ++i) {
    x(static_cast<Eigen::Index>(i), 0) = rssi[i];
  }
  return gp.predict(x);
}

std::vector<PodTrainingSample> collect_training_dataset(
    const RadioModel& radio, const DetectionModel& det,
    const TargetMotionModel& motion, const TimingConfig& timing, Rng& rng) {
  if (timing.nu < 1) {
    throw std::invalid_argument("collect_training_dataset: nu must be >= 1");
  }
  const double nu = timing.nu;
  const double noise_floor = 1.0 / (4.0 * nu * nu);

  std::vector<PodTrainingSample> samples;
  samples.reserve(timing.n_train);

  double d = rng.uniform(motion.d_min, motion.d_max);
  for (int j = 0; j < timing.n_train; ++j) {
    const double p = pod_true(det, d);
    int hits = 0;
    for (int frame = 0; frame < timing.nu; ++frame) {
      hits += rng.bernoulli(p) ? 1 : 0;
    }
    PodTrainingSample s;
    s.empirical_pod = hits / nu;
    s.rssi_iso = path_loss(radio, d);
    s.label_noise_var =
        std::max(s.empirical_pod * (1.0 - s.empirical_pod) / nu, noise_floor);
    samples.push_back(s);

    d = step_target_motion(motion, d, rng);
  }
  return samples;
}

PodModel train_pod_model(const std::vector<PodTrainingSample>& samples,
                         const KernelSpec& spec) {
  if (samples.size() < 2) {
    throw std::invalid_argument("train_pod_model: need at least two samples");
  }
  GpDataset data;
  const auto n = static_cast<Eigen::Index>(samples.size());
  data.inputs.resize(n, 1);
  data.labels.resize(n);
  data.noise_var.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    data.inputs(i, 0) = samples[i].rssi_iso;
    data.labels(i) = samples[i].empirical_pod;
    data.noise_var(i) = samples[i].label_noise_var;
  }
  return PodModel{fit_hyperparams(data, spec, /*mean_const=*/0.0)};
}

double invert_path_loss(const RadioModel& radio, double r) {
  if (!std::isfinite(r)) {
    throw std::invalid_argument("invert_path_loss: non-finite RSSI");
  }
  if (radio.n_exp == 0.0) {
    throw std::invalid_argument("invert_path_loss: zero path-loss exponent");
  }
  return radio.delta * std::pow(10.0, (radio.kappa - r) / (10.0 * radio.n_exp));
}

double evaluate_pod_fit(const PodModel& model, const DetectionModel& det,
                        const RadioModel& radio,
                        const std::vector<double>& grid) {
  if (grid.empty()) {
    throw std::invalid_argument("evaluate_pod_fit: empty grid");
  }
  std::vector<double> truth(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    truth[i] = pod_true(det, invert_path_loss(radio, grid[i]));
  }
  const GpPrediction pred = model.predict_raw(grid);
  std::vector<double> clamped(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    clamped[i] = std::clamp(pred.mean(static_cast<Eigen::Index>(i)), 0.0, 1.0);
  }
  return r2_score(truth, clamped);
}

void write_pod_dataset_csv(const std::string& path,
                           const std::vector<PodTrainingSample>& samples) {
  CsvWriter csv(path, {"rssi_dbm", "empirical_pod", "noise_var"});
  for (const PodTrainingSample& s : samples) {
    csv.row({format_double(s.rssi_iso), format_double(s.empirical_pod),
             format_double(s.label_noise_var)});
  }
}

void write_pod_fit_csv(const std::string& path, const PodModel& model,
                       const DetectionModel& det, const RadioModel& radio,
                       const std::vector<double>& grid) {
  const GpPrediction pred = model.predict_raw(grid);
  CsvWriter csv(path, {"rssi_dbm", "pod_true", "pod_pred_mean", "pod_pred_std"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    csv.row({format_double(grid[i]),
             format_double(pod_true(det, invert_path_loss(radio, grid[i]))),
             format_double(std::clamp(pred.mean(k), 0.0, 1.0)),
             format_double(pred.std(k))});
  }
}

}  // namespace txdisc
