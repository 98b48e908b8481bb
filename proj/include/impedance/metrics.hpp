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

#include "impedance/fitting.hpp"
#include "impedance/geometry.hpp"
#include "impedance/model.hpp"

namespace impspace {

/// Angle between two unit binormals, in [0, pi].
double orientation_error(const Binormal& desired, const Binormal& measured);

struct AngleErrors {
  double d_phi = 0.0;  // stiffness error, measured - desired
  double d_rho = 0.0;  // damping error, measured - desired
};

AngleErrors stiffness_damping_errors(const RotationAngles& desired,
                                     const RotationAngles& measured);

struct ForceFidelity {
  double rms = 0.0;
  double max = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

struct ForceFidelityOptions {
  /// Samples whose normalized phase radius is below this are skipped.
  double min_phase_radius = 1e-9;
};

/// Pairs each measured sample with the desired ellipse point of equal phase,
/// theta = atan2(-e_dot / (a w), e / a), and aggregates |f_meas - f_des|.
/// Throws Error(kDegenerateData) when every sample is skipped.
ForceFidelity force_fidelity(const Ellipse3D& desired, const Trajectory& measured,
                             const ForceFidelityOptions& options = {});

struct MetricReport {
  double force_fidelity_rms = 0.0;  // [N]
  double force_fidelity_max = 0.0;  // [N]
  double orientation_error = 0.0;   // [rad]
  double stiffness_error = 0.0;     // [rad]
  double damping_error = 0.0;       // [rad]
  std::size_t samples_used = 0;
  std::size_t samples_skipped = 0;
};

MetricReport evaluate_metrics(const ImpedanceParams& desired,
                              const SinusoidInput& input,
                              const Binormal& measured_binormal,
                              const Trajectory& measured);

/// Convenience: fits the plane of `measured` first.
MetricReport evaluate_metrics(const ImpedanceParams& desired,
                              const SinusoidInput& input,
                              const Trajectory& measured);

}  // namespace impspace
