#pragma once

#include <array>
#include <vector>

#include "txdisc/rng.hpp"

namespace txdisc {

// Wraps an angle into [-pi, pi). Throws on non-finite input.
double wrap_angle(double theta);

// Timing of the sensing loop: one RSSI sample (and one control input) every
// t_rf seconds, with nu camera frames in between (camera period t_rf / nu).
struct TimingConfig {
  double t_rf = 0.1;   // seconds between RSSI samples
  int nu = 10;         // camera frames per RSSI sample
  int n_test = 120;    // RSSI samples per discovery episode
  int n_train = 900;   // samples in the detectability training set

  double camera_period() const { return t_rf / nu; }
};

// Pan-only platform; the camera field of view is the angular sector of
// half-width fov_half_width centered on the pan axis.
struct PlatformState {
  double pan = 0.0;             // radians, kept in [-pi, pi)
  double fov_half_width = 0.0;  // radians, in (0, pi)
};

struct Target {
  std::array<double, 2> position{};  // meters, on the ground plane
  double distance = 0.0;             // meters from the platform origin
  double bearing = 0.0;              // radians in [-pi, pi)

  static Target from_polar(double distance, double bearing);
  static Target from_position(double x, double y);
};

struct World {
  std::vector<Target> targets;
  int tx_index = 0;  // which target carries the transmitter
};

// Log-distance path-loss channel with additive Gaussian RSSI noise and a
// quadratic (clamped) radiation attenuation for the directional receiver.
struct RadioModel {
  double kappa = -30.0;      // dBm, RSSI at the reference distance
  double n_exp = 2.0;        // path-loss exponent
  double delta = 1.0;        // meters, reference distance
  double sigma_rf = 3.0;     // dBm, RSSI noise std
  double atten_coeff = 0.5;  // quadratic misalignment coefficient
};

// Double-sigmoid probability of detection as a function of distance.
struct DetectionModel {
  double slope_far = 4.0;
  double center_far = 4.5;   // meters, far cutoff
  double slope_near = 1.0;
  double center_near = 2.5;  // meters, near ramp
};

// Random-walk distance dynamics used during detectability training,
// reflected at [d_min, d_max].
struct TargetMotionModel {
  double noise_var = 0.04;  // m^2 per step
  double d_min = 1.0;
  double d_max = 6.0;
};

// New platform state after applying control u (radians, |u| <= pi).
PlatformState step_platform(const PlatformState& state, double u);

// True iff the target bearing lies within the camera field of view.
bool in_fov(const PlatformState& state, const Target& target);

// Mean RSSI at distance d (dBm). Requires d > 0.
double path_loss(const RadioModel& radio, double d);

// Attenuation of the directional receiver for pan s and source bearing
// gamma; 1 at alignment, clamped to [0, 1].
double radiation_attenuation(const RadioModel& radio, double s, double gamma);

// One omnidirectional RSSI sample at distance d.
double sample_rssi_iso(const RadioModel& radio, double d, Rng& rng);

// One directional RSSI sample: path loss scaled by the radiation pattern.
double sample_rssi_dir(const RadioModel& radio, double d, double s,
                       double gamma, Rng& rng);

// Probability of detection at distance d, in [0, 1].
double pod_true(const DetectionModel& det, double d);

// One camera frame: for each target, a Bernoulli detection draw when it is
// in the field of view, deterministically false otherwise.
std::vector<bool> detect_frame(const World& world, const PlatformState& state,
                               const DetectionModel& det, Rng& rng);

// One random-walk step of the target distance, reflected at the bounds.
double step_target_motion(const TargetMotionModel& motion, double d, Rng& rng);

// Random world: bearings uniform on [-pi, pi) with pairwise wrapped
// separation >= eps_gamma, distances uniform on [d_range[0], d_range[1]],
// transmitter index uniform.
World spawn_world(int n_targets, const std::array<double, 2>& d_range,
                  double eps_gamma, Rng& rng);

}  // namespace txdisc
