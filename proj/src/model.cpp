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

#include "impedance/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "impedance/errors.hpp"
#include "impedance/kernels.hpp"

namespace impspace {

namespace {

void require_nonnegative(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(ErrorKind::kArgument, "model",
                std::string(name) + " must be finite and non-negative");
  }
}

}  // namespace

void ImpedanceParams::validate() const {
  require_nonnegative(mass, "mass");
  require_nonnegative(damping, "damping");
  require_nonnegative(stiffness, "stiffness");
}

void SinusoidInput::validate() const {
  if (!std::isfinite(amplitude) || amplitude <= 0.0) {
    throw Error(ErrorKind::kArgument, "model",
                "amplitude must be finite and positive");
  }
  if (!std::isfinite(omega) || omega <= 0.0) {
    throw Error(ErrorKind::kArgument, "model",
                "omega must be finite and positive");
  }
}

double SinusoidInput::period() const { return 2.0 * std::numbers::pi / omega; }

Trajectory::Trajectory(std::vector<Sample> samples)
    : samples_(std::move(samples)) {
  if (samples_.empty()) {
    throw Error(ErrorKind::kArgument, "trajectory", "empty trajectory");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.state.e) ||
        !std::isfinite(s.state.e_dot) || !std::isfinite(s.state.f_int)) {
      throw Error(ErrorKind::kArgument, "trajectory",
                  "non-finite value at sample " + std::to_string(i));
    }
    if (i > 0 && !(s.t > samples_[i - 1].t)) {
      throw Error(ErrorKind::kArgument, "trajectory",
                  "timestamps not strictly increasing at sample " +
                      std::to_string(i));
    }
  }
}

std::vector<ImpedanceState> Trajectory::states() const {
  std::vector<ImpedanceState> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.state);
  return out;
}

Deviation eval_deviation(const SinusoidInput& input, double t) {
  const double phase = input.omega * t;
  return {input.amplitude * std::cos(phase),
          -input.amplitude * input.omega * std::sin(phase)};
}

double eval_force(const ImpedanceParams& params, const SinusoidInput& input,
                  double t) {
  const double w = input.omega;
  const double c = std::cos(w * t);
  const double s = std::sin(w * t);
  return input.amplitude * (params.stiffness * c - params.damping * w * s -
                            params.mass * w * w * c);
}

ImpedanceState eval_state(const ImpedanceParams& params,
                          const SinusoidInput& input, double t) {
  const auto dev = eval_deviation(input, t);
  return {dev.e, dev.e_dot, eval_force(params, input, t)};
}

Trajectory sample_trajectory(const ImpedanceParams& params,
                             const SinusoidInput& input, double t0, double t1,
                             std::size_t n) {
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
    throw Error(ErrorKind::kArgument, "sample_trajectory",
                "time range requires finite t1 > t0");
  }
  if (n < 2) {
    throw Error(ErrorKind::kArgument, "sample_trajectory",
                "need at least 2 samples");
  }
  params.validate();
  input.validate();

  const double step = (t1 - t0) / static_cast<double>(n - 1);
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i) {
    times[i] = t0 + step * static_cast<double>(i);
  }
  times.back() = t1;

  std::vector<ImpedanceState> states(n);
  kernels::sample_model(params, input, times, states);

  std::vector<Sample> samples(n);
  for (std::size_t i = 0; i < n; ++i) samples[i] = {times[i], states[i]};
  return Trajectory(std::move(samples));
}

}  // namespace impspace
