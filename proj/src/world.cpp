#include "txdisc/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace txdisc {

double wrap_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("wrap_angle: non-finite angle");
  }
  const double two_pi = 2.0 * M_PI;
  double w = theta - two_pi * std::floor((theta + M_PI) / two_pi);
  // floor rounding can land exactly on pi; fold it back to -pi
  if (w >= M_PI) w -= two_pi;
  return w;
}

Target Target::from_polar(double distance, double bearing) {
  if (!(distance > 0.0)) {
    throw std::invalid_argument("Target: distance must be positive");
  }
  Target t;
  t.distance = distance;
  t.bearing = wrap_angle(bearing);
  t.position = {distance * std::cos(t.bearing), distance * std::sin(t.bearing)};
  return t;
}

Target Target::from_position(double x, double y) {
  Target t;
  t.position = {x, y};
  t.distance = std::hypot(x, y);
  if (!(t.distance > 0.0)) {
    throw std::invalid_argument("Target: position must be away from the origin");
  }
  t.bearing = wrap_angle(std::atan2(y, x));
  return t;
}

PlatformState step_platform(const PlatformState& state, double u) {
  if (!std::isfinite(u) || u < -M_PI || u > M_PI) {
    throw std::invalid_argument("step_platform: control outside [-pi, pi]");
  }
  PlatformState next = state;
  next.pan = wrap_angle(state.pan + u);
  return next;
}

bool in_fov(const PlatformState& state, const Target& target) {
  return std::abs(wrap_angle(target.bearing - state.pan)) <=
         state.fov_half_width;
}

double path_loss(const RadioModel& radio, double d) {
  if (!(d > 0.0)) {
    throw std::invalid_argument("path_loss: distance must be positive");
  }
  return radio.kappa - 10.0 * radio.n_exp * std::log10(d / radio.delta);
}

double radiation_attenuation(const RadioModel& radio, double s, double gamma) {
  const double mis = wrap_angle(s - gamma);
  const double rho = 1.0 - radio.atten_coeff * mis * mis;
  return std::clamp(rho, 0.0, 1.0);
}

double sample_rssi_iso(const RadioModel& radio, double d, Rng& rng) {
  return path_loss(radio, d) + rng.normal(0.0, radio.sigma_rf);
}

double sample_rssi_dir(const RadioModel& radio, double d, double s,
                       double gamma, Rng& rng) {
  return path_loss(radio, d) * radiation_attenuation(radio, s, gamma) +
         rng.normal(0.0, radio.sigma_rf);
}

double pod_true(const DetectionModel& det, double d) {
  const double far_term = 1.0 + std::exp(det.slope_far * (d - det.center_far));
  const double near_term =
      1.0 + std::exp(-det.slope_near * (d - det.center_near));
  return 1.0 / (far_term * near_term);
}

std::vector<bool> detect_frame(const World& world, const PlatformState& state,
                               const DetectionModel& det, Rng& rng) {
  std::vector<bool> hits(world.targets.size(), false);
  for (std::size_t i = 0; i < world.targets.size(); ++i) {
    const Target& t = world.targets[i];
    if (in_fov(state, t)) {
      hits[i] = rng.bernoulli(pod_true(det, t.distance));
    }
  }
  return hits;
}

double step_target_motion(const TargetMotionModel& motion, double d, Rng& rng) {
  if (d < motion.d_min || d > motion.d_max) {
    throw std::invalid_argument("step_target_motion: distance outside bounds");
  }
  double next = d + rng.normal(0.0, std::sqrt(motion.noise_var));
  while (next < motion.d_min || next > motion.d_max) {
    if (next > motion.d_max) next = 2.0 * motion.d_max - next;
    if (next < motion.d_min) next = 2.0 * motion.d_min - next;
  }
  return next;
}

World spawn_world(int n_targets, const std::array<double, 2>& d_range,
                  double eps_gamma, Rng& rng) {
  if (n_targets < 1) {
    throw std::invalid_argument("spawn_world: need at least one target");
  }
  if (!(eps_gamma > 0.0) || n_targets * eps_gamma >= 2.0 * M_PI) {
    throw std::invalid_argument(
        "spawn_world: infeasible bearing separation eps_gamma");
  }
  if (!(d_range[0] > 0.0) || !(d_range[1] >= d_range[0])) {
    throw std::invalid_argument("spawn_world: bad distance range");
  }

  std::vector<double> bearings;
  bearings.reserve(n_targets);
  constexpr int kMaxTries = 1000000;
  int tries = 0;
  while (static_cast<int>(bearings.size()) < n_targets) {
    if (++tries > kMaxTries) {
      throw std::runtime_error("spawn_world: bearing rejection sampling stuck");
    }
    const double candidate = rng.uniform(-M_PI, M_PI);
    bool ok = true;
    for (double b : bearings) {
      if (std::abs(wrap_angle(candidate - b)) < eps_gamma) {
        ok = false;
        break;
      }
    }
    if (ok) bearings.push_back(candidate);
  }

  World world;
  world.targets.reserve(n_targets);
  for (double b : bearings) {
    world.targets.push_back(
        Target::from_polar(rng.uniform(d_range[0], d_range[1]), b));
  }
  world.tx_index = rng.uniform_int(n_targets);
  return world;
}

}  // namespace txdisc
