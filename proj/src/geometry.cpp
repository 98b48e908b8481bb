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

#include "impedance/geometry.hpp"

#include <cmath>
#include <numbers>

#include "impedance/errors.hpp"
#include "impedance/fitting.hpp"
#include "impedance/kernels.hpp"

namespace impspace {

namespace {

constexpr double kPi = std::numbers::pi;

// Maps a direction angle onto (-pi/2, pi/2].
double wrap_half_turn(double angle) {
  while (angle <= -kPi / 2) angle += kPi;
  while (angle > kPi / 2) angle -= kPi;
  return angle;
}

}  // namespace

Eigen::Vector2d Ellipse2D::point(double angle) const {
  const double c = std::cos(tilt);
  const double s = std::sin(tilt);
  const double x = semi_major * std::cos(angle);
  const double y = semi_minor * std::sin(angle);
  return center + Eigen::Vector2d(c * x - s * y, s * x + c * y);
}

const char* to_string(ProjectionPlane plane) {
  switch (plane) {
    case ProjectionPlane::kStiffness: return "stiffness";
    case ProjectionPlane::kDamping: return "damping";
    case ProjectionPlane::kPhase: return "phase";
  }
  return "unknown";
}

Binormal binormal(const ImpedanceParams& params, const SinusoidInput& input) {
  const double lumped = params.lumped_stiffness(input.omega);
  const double norm = std::hypot(lumped, params.damping, 1.0);
  return {lumped / norm, params.damping / norm, -1.0 / norm};
}

RotationAngles rotation_angles(const ImpedanceParams& params,
                               const SinusoidInput& input) {
  const double lumped = params.lumped_stiffness(input.omega);
  return {std::atan(-lumped / std::hypot(params.damping, 1.0)),
          std::atan(params.damping)};
}

RotationAngles angles_from_binormal(const Binormal& b) {
  // The plane normal is defined up to sign; use the b3 < 0 representative.
  const double sign = b.b3 > 0.0 ? -1.0 : 1.0;
  const double b1 = sign * b.b1;
  const double b2 = sign * b.b2;
  const double b3 = sign * b.b3;
  return {std::atan2(-b1, std::hypot(b2, b3)), std::atan2(b2, -b3)};
}

Eigen::Matrix3d rotation_about_e(double rho) {
  const double c = std::cos(rho);
  const double s = std::sin(rho);
  Eigen::Matrix3d m;
  m << 1.0, 0.0, 0.0,
       0.0, c, -s,
       0.0, s, c;
  return m;
}

Eigen::Matrix3d rotation_about_edot(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Eigen::Matrix3d m;
  m << c, 0.0, s,
       0.0, 1.0, 0.0,
       -s, 0.0, c;
  return m;
}

Ellipse3D transform_chain(const ImpedanceParams& params,
                          const SinusoidInput& input) {
  params.validate();
  input.validate();

  const double a = input.amplitude;
  const double w = input.omega;
  const double lumped = params.lumped_stiffness(w);
  const double dd = std::hypot(params.damping, 1.0);  // sqrt(d^2 + 1)

  Ellipse3D out;
  out.params = params;
  out.input = input;

  // Conjugate diameters as columns.
  out.r(0, 0) = a * std::hypot(lumped / dd, 1.0);
  out.r(0, 1) = 0.0;
  out.r(1, 0) = a * params.damping * lumped / dd;
  out.r(1, 1) = -a * w * dd;

  out.t_f.setIdentity();
  out.t_f.topLeftCorner<2, 2>() = out.r;

  const auto angles = rotation_angles(params, input);
  out.t_e = rotation_about_e(angles.rho);
  out.t_edot = rotation_about_edot(angles.phi);
  return out;
}

ImpedanceState eval_parametric(const Ellipse3D& ellipse, double theta) {
  const Eigen::Vector3d unit(std::cos(theta), std::sin(theta), 0.0);
  return ImpedanceState::from(ellipse.t_e * (ellipse.t_edot * (ellipse.t_f * unit)) +
                              ellipse.center.vec());
}

std::vector<double> theta_grid(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
  }
  return out;
}

std::vector<ImpedanceState> sample_ellipse(const Ellipse3D& ellipse,
                                           std::size_t n) {
  if (n == 0) {
    throw Error(ErrorKind::kArgument, "sample_ellipse", "grid size must be > 0");
  }
  const auto thetas = theta_grid(n);
  std::vector<ImpedanceState> out(n);
  kernels::synthesize(ellipse, thetas, out);
  return out;
}

Eigen::Vector2d project_point(const ImpedanceState& s, ProjectionPlane plane) {
  switch (plane) {
    case ProjectionPlane::kStiffness: return {s.e, s.f_int};
    case ProjectionPlane::kDamping: return {s.e_dot, s.f_int};
    case ProjectionPlane::kPhase: return {s.e, s.e_dot};
  }
  return {0.0, 0.0};
}

std::vector<Eigen::Vector2d> project(std::span<const ImpedanceState> states,
                                     ProjectionPlane plane) {
  if (states.empty()) {
    throw Error(ErrorKind::kArgument, "project", "empty input");
  }
  std::vector<Eigen::Vector2d> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(project_point(s, plane));
  return out;
}

std::vector<Eigen::Vector2d> project(const Trajectory& traj,
                                     ProjectionPlane plane) {
  const auto states = traj.states();
  return project(states, plane);
}

std::vector<Eigen::Vector2d> project(const Ellipse3D& ellipse,
                                     ProjectionPlane plane, std::size_t n) {
  const auto states = sample_ellipse(ellipse, n);
  return project(states, plane);
}

ProjectedAxis major_axis(std::span<const Eigen::Vector2d> points,
                         const ProjectedAngleOptions& options) {
  if (points.empty()) {
    throw Error(ErrorKind::kArgument, "major_axis", "empty input");
  }
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const Eigen::Vector2d d = p - mean;
    sxx += d.x() * d.x();
    sxy += d.x() * d.y();
    syy += d.y() * d.y();
  }

  const double half_trace = 0.5 * (sxx + syy);
  const double radius = std::hypot(0.5 * (sxx - syy), sxy);
  const double lambda_max = half_trace + radius;
  if (!(lambda_max > 0.0)) {
    throw Error(ErrorKind::kDegenerateData, "major_axis",
                "projection collapses to a point");
  }
  // Principal direction; pick the better conditioned of the two equivalent
  // eigenvector forms.
  const Eigen::Vector2d v1(sxy, lambda_max - sxx);
  const Eigen::Vector2d v2(lambda_max - syy, sxy);
  const Eigen::Vector2d dir =
      (v1.squaredNorm() >= v2.squaredNorm() ? v1 : v2).normalized();

  // Residual scatter across the principal direction, summed directly: the
  // determinant route cancels catastrophically for collinear data.
  const Eigen::Vector2d normal(-dir.y(), dir.x());
  double lambda_min = 0.0;
  for (const auto& p : points) {
    const double r = normal.dot(p - mean);
    lambda_min += r * r;
  }

  ProjectedAxis axis;
  if (lambda_min <= options.line_threshold * lambda_max) {
    axis.degenerate = true;
    axis.angle = wrap_half_turn(std::atan2(dir.y(), dir.x()));
    axis.slope = dir.y() / dir.x();
    return axis;
  }

  const auto ellipse = fit_ellipse_geometric(points);
  axis.angle = ellipse.tilt;
  axis.slope = std::tan(ellipse.tilt);
  return axis;
}

ProjectedAngles projected_angles(const ImpedanceParams& params,
                                 const SinusoidInput& input,
                                 const ProjectedAngleOptions& options) {
  const auto states = sample_ellipse(transform_chain(params, input), options.grid);
  const auto stiffness = project(states, ProjectionPlane::kStiffness);
  const auto damping = project(states, ProjectionPlane::kDamping);
  return {major_axis(stiffness, options), major_axis(damping, options)};
}

}  // namespace impspace
