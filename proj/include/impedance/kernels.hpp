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

// Data-parallel inner loops. Each kernel has an OpenMP version used by the
// library and a serial reference in `kernels::serial` kept for tests and the
// benchmark. Parallel reductions combine fixed-size blocks in index order, so
// results do not depend on the thread count.

#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "impedance/geometry.hpp"
#include "impedance/model.hpp"

namespace impspace::kernels {

/// out[i] = eval_parametric(ellipse, thetas[i]).
void synthesize(const Ellipse3D& ellipse, std::span<const double> thetas,
                std::span<ImpedanceState> out);

/// out[i] = eval_state(params, input, times[i]).
void sample_model(const ImpedanceParams& params, const SinusoidInput& input,
                  std::span<const double> times, std::span<ImpedanceState> out);

struct Moments {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  /// Sum over samples of (x - mean)(x - mean)^T.
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  std::size_t count = 0;
};

Moments moments(std::span<const ImpedanceState> states);

/// max_i |a[i] - b[i]|_inf
double max_abs_difference(std::span<const ImpedanceState> a,
                          std::span<const ImpedanceState> b);

namespace serial {

void synthesize(const Ellipse3D& ellipse, std::span<const double> thetas,
                std::span<ImpedanceState> out);
void sample_model(const ImpedanceParams& params, const SinusoidInput& input,
                  std::span<const double> times, std::span<ImpedanceState> out);
Moments moments(std::span<const ImpedanceState> states);
double max_abs_difference(std::span<const ImpedanceState> a,
                          std::span<const ImpedanceState> b);

}  // namespace serial

}  // namespace impspace::kernels
