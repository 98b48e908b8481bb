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

#include "impedance/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "impedance/errors.hpp"

namespace impspace::kernels {

namespace {

// Block size for reductions; fixed so the summation tree is independent of
// the number of threads.
constexpr std::ptrdiff_t kBlock = 1024;

void check_sizes(std::size_t in, std::size_t out, const char* stage) {
  if (in != out) {
    throw Error(ErrorKind::kArgument, stage, "input/output size mismatch");
  }
}

Moments block_moments(std::span<const ImpedanceState> states) {
  Moments m;
  m.count = states.size();
  if (states.empty()) return m;
  for (const auto& s : states) m.mean += s.vec();
  m.mean /= static_cast<double>(states.size());
  for (const auto& s : states) {
    const Eigen::Vector3d d = s.vec() - m.mean;
    m.scatter.noalias() += d * d.transpose();
  }
  return m;
}

// Chan et al. pairwise update of mean and scatter.
void merge(Moments& acc, const Moments& other) {
  if (other.count == 0) return;
  if (acc.count == 0) {
    acc = other;
    return;
  }
  const double na = static_cast<double>(acc.count);
  const double nb = static_cast<double>(other.count);
  const double n = na + nb;
  const Eigen::Vector3d delta = other.mean - acc.mean;
  acc.mean += delta * (nb / n);
  acc.scatter += other.scatter + delta * delta.transpose() * (na * nb / n);
  acc.count += other.count;
}

}  // namespace

void synthesize(const Ellipse3D& ellipse, std::span<const double> thetas,
                std::span<ImpedanceState> out) {
  check_sizes(thetas.size(), out.size(), "kernels::synthesize");
  const Eigen::Matrix3d m = ellipse.composite();
  const auto n = static_cast<std::ptrdiff_t>(thetas.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double th = thetas[i];
    const Eigen::Vector3d z =
        m.col(0) * std::cos(th) + m.col(1) * std::sin(th) + ellipse.center.vec();
    out[i] = ImpedanceState::from(z);
  }
}

void sample_model(const ImpedanceParams& params, const SinusoidInput& input,
                  std::span<const double> times, std::span<ImpedanceState> out) {
  check_sizes(times.size(), out.size(), "kernels::sample_model");
  const auto n = static_cast<std::ptrdiff_t>(times.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = eval_state(params, input, times[i]);
  }
}

Moments moments(std::span<const ImpedanceState> states) {
  const auto n = static_cast<std::ptrdiff_t>(states.size());
  const std::ptrdiff_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<Moments> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::ptrdiff_t lo = b * kBlock;
    const std::ptrdiff_t hi = std::min(n, lo + kBlock);
    partial[static_cast<std::size_t>(b)] =
        block_moments(states.subspan(static_cast<std::size_t>(lo),
                                     static_cast<std::size_t>(hi - lo)));
  }
  Moments acc;
  for (const auto& p : partial) merge(acc, p);
  return acc;
}

double max_abs_difference(std::span<const ImpedanceState> a,
                          std::span<const ImpedanceState> b) {
  check_sizes(a.size(), b.size(), "kernels::max_abs_difference");
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    worst = std::max(worst, (a[i].vec() - b[i].vec()).cwiseAbs().maxCoeff());
  }
  return worst;
}

namespace serial {

void synthesize(const Ellipse3D& ellipse, std::span<const double> thetas,
                std::span<ImpedanceState> out) {
  check_sizes(thetas.size(), out.size(), "kernels::serial::synthesize");
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    out[i] = eval_parametric(ellipse, thetas[i]);
  }
}

void sample_model(const ImpedanceParams& params, const SinusoidInput& input,
                  std::span<const double> times, std::span<ImpedanceState> out) {
  check_sizes(times.size(), out.size(), "kernels::serial::sample_model");
  for (std::size_t i = 0; i < times.size(); ++i) {
    out[i] = eval_state(params, input, times[i]);
  }
}

// Two-pass textbook version.
Moments moments(std::span<const ImpedanceState> states) {
  return block_moments(states);
}

double max_abs_difference(std::span<const ImpedanceState> a,
                          std::span<const ImpedanceState> b) {
  check_sizes(a.size(), b.size(), "kernels::serial::max_abs_difference");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, (a[i].vec() - b[i].vec()).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace serial

}  // namespace impspace::kernels
