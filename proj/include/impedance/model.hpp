// Copyright 2026 The Impedance Space Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace impspace {

/// Desired mass-spring-damper impedance. SI units: kg, N*s/m, N/m.
struct ImpedanceParams {
  double mass = 0.0;
  double damping = 0.0;
  double stiffness = 0.0;

  /// Throws Error(kArgument) unless all fields are finite and >= 0.
  void validate() const;

  /// k_d - m_d * w^2, the only stiffness-like term visible at one frequency.
  double lumped_stiffness(double omega) const {
    return stiffness - mass * omega * omega;
  }
};

/// Sinusoidal position deviation e(t) = amplitude * cos(omega * t).
struct SinusoidInput {
  double amplitude = 1.0;  // [m]
  double omega = 1.0;      // [rad/s]

  void validate() const;
  double period() const;
};

/// A point z = (e, e_dot, f_int) of the impedance space.
struct ImpedanceState {
  double e = 0.0;
  double e_dot = 0.0;
  double f_int = 0.0;

  Eigen::Vector3d vec() const { return {e, e_dot, f_int}; }
  static ImpedanceState from(const Eigen::Vector3d& v) {
    return {v.x(), v.y(), v.z()};
  }
};

struct Sample {
  double t = 0.0;
  ImpedanceState state;
};

/// Time-ordered impedance-space samples. Construction enforces a non-empty
/// sequence with strictly increasing timestamps and finite states.
class Trajectory {
 public:
  explicit Trajectory(std::vector<Sample> samples);

  std::span<const Sample> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  const Sample& front() const { return samples_.front(); }
  const Sample& back() const { return samples_.back(); }
  auto begin() const { return samples_.begin(); }
  auto end() const { return samples_.end(); }

  std::vector<ImpedanceState> states() const;
  double duration() const { return samples_.back().t - samples_.front().t; }

 private:
  std::vector<Sample> samples_;
};

struct Deviation {
  double e = 0.0;
  double e_dot = 0.0;
};

/// e(t) = a cos(w t) and its analytic derivative.
Deviation eval_deviation(const SinusoidInput& input, double t);

/// Steady-state interaction force
/// a (k cos(w t) - d w sin(w t) - m w^2 cos(w t)).
double eval_force(const ImpedanceParams& params, const SinusoidInput& input,
                  double t);

ImpedanceState eval_state(const ImpedanceParams& params,
                          const SinusoidInput& input, double t);

/// n uniformly spaced samples over [t0, t1], both ends included.
Trajectory sample_trajectory(const ImpedanceParams& params,
                             const SinusoidInput& input, double t0, double t1,
                             std::size_t n);

}  // namespace impspace
