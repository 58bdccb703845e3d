#pragma once

#include <string>
#include <vector>

#include "txdisc/gp.hpp"
#include "txdisc/world.hpp"

namespace txdisc {

// One self-labeled training pair: the RSSI sample collected over an
// interval and the fraction of the nu camera frames in that interval that
// detected the target. label_noise_var is the binomial variance of the
// label, floored so the heteroscedastic diagonal stays positive.
struct PodTrainingSample {
  double rssi_iso = 0.0;       // dBm
  double empirical_pod = 0.0;  // in {0, 1/nu, ..., 1}
  double label_noise_var = 0.0;
};

// Detectability GP over scalar RSSI. Predictions are clamped to [0, 1] at
// query time; the regression itself is unconstrained.
struct PodModel {
  GpModel gp;

  double predict(double rssi) const;
  // Unclamped posterior at a grid of RSSI values.
  GpPrediction predict_raw(const std::vector<double>& rssi) const;
};

// Simulates the training phase: a single target whose distance follows the
// random walk, perfectly tracked by the platform (every frame in FoV), with
// nu Bernoulli detections per RSSI tick. The recorded RSSI input is the
// mean path-loss value at the tick's distance; see README on why the
// training inputs carry no receiver noise.
std::vector<PodTrainingSample> collect_training_dataset(
    const RadioModel& radio, const DetectionModel& det,
    const TargetMotionModel& motion, const TimingConfig& timing, Rng& rng);

// Fits the heteroscedastic GP (zero mean) on the training samples.
PodModel train_pod_model(const std::vector<PodTrainingSample>& samples,
                         const KernelSpec& spec);

// R^2 of the model against the ground-truth detectability at each grid
// RSSI, obtained by inverting the noise-free path-loss model.
double evaluate_pod_fit(const PodModel& model, const DetectionModel& det,
                        const RadioModel& radio,
                        const std::vector<double>& grid);

// Distance whose mean RSSI equals r under the path-loss model.
double invert_path_loss(const RadioModel& radio, double r);

// CSV emission (columns are part of the interface):
//   dataset: rssi_dbm, empirical_pod, noise_var
//   fit:     rssi_dbm, pod_true, pod_pred_mean, pod_pred_std
void write_pod_dataset_csv(const std::string& path,
                           const std::vector<PodTrainingSample>& samples);
void write_pod_fit_csv(const std::string& path, const PodModel& model,
                       const DetectionModel& det, const RadioModel& radio,
                       const std::vector<double>& grid);

}  // namespace txdisc
