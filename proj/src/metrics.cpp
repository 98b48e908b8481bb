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

#include "impedance/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "impedance/errors.hpp"

namespace impspace {

double orientation_error(const Binormal& desired, const Binormal& measured) {
  const Eigen::Vector3d a = desired.vec();
  const Eigen::Vector3d b = measured.vec();
  // Same angle as acos(clamp(a . b)) for unit vectors, without the loss of
  // precision near 0 and pi.
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

AngleErrors stiffness_damping_errors(const RotationAngles& desired,
                                     const RotationAngles& measured) {
  return {measured.phi - desired.phi, measured.rho - desired.rho};
}

ForceFidelity force_fidelity(const Ellipse3D& desired, const Trajectory& measured,
                             const ForceFidelityOptions& options) {
  const double a = desired.input.amplitude;
  const double aw = desired.input.amplitude * desired.input.omega;

  ForceFidelity out;
  double sq = 0.0;
  for (const auto& sample : measured) {
    const double x = (sample.state.e - desired.center.e) / a;
    const double y = -(sample.state.e_dot - desired.center.e_dot) / aw;
    if (std::hypot(x, y) < options.min_phase_radius) {
      ++out.skipped;
      continue;
    }
    const double theta = std::atan2(y, x);
    const double diff =
        std::abs(sample.state.f_int - eval_parametric(desired, theta).f_int);
    sq += diff * diff;
    out.max = std::max(out.max, diff);
    ++out.used;
  }
  if (out.used == 0) {
    throw Error(ErrorKind::kDegenerateData, "force_fidelity",
                "no sample has a defined phase");
  }
  out.rms = std::sqrt(sq / static_cast<double>(out.used));
  return out;
}

MetricReport evaluate_metrics(const ImpedanceParams& desired,
                              const SinusoidInput& input,
                              const Binormal& measured_binormal,
                              const Trajectory& measured) {
  const auto ellipse = transform_chain(desired, input);
  const auto fidelity = force_fidelity(ellipse, measured);
  const auto desired_b = binormal(desired, input);
  const auto errors = stiffness_damping_errors(
      rotation_angles(desired, input), angles_from_binormal(measured_binormal));

  MetricReport report;
  report.force_fidelity_rms = fidelity.rms;
  report.force_fidelity_max = fidelity.max;
  report.samples_used = fidelity.used;
  report.samples_skipped = fidelity.skipped;
  report.orientation_error = orientation_error(desired_b, measured_binormal);
  report.stiffness_error = errors.d_phi;
  report.damping_error = errors.d_rho;
  return report;
}

MetricReport evaluate_metrics(const ImpedanceParams& desired,
                              const SinusoidInput& input,
                              const Trajectory& measured) {
  return evaluate_metrics(desired, input, fit_plane(measured).binormal(), measured);
}

}  // namespace impspace
