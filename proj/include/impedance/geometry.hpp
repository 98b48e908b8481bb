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

#include "impedance/model.hpp"

namespace impspace {

/// Unit normal of the trajectory plane, oriented with b3 < 0.
struct Binormal {
  double b1 = 0.0;  // e-axis
  double b2 = 0.0;  // e_dot-axis
  double b3 = -1.0; // f_int-axis

  Eigen::Vector3d vec() const { return {b1, b2, b3}; }
};

/// Sequential rotation angles of the binormal: rho about the e-axis, then
/// phi about the (rotated) e_dot-axis.
struct RotationAngles {
  double phi = 0.0;
  double rho = 0.0;
};

/// The synthesized impedance ellipse z(theta) = T_e T_edot T_f [cos, sin, 0]^T.
/// Keeps the generating parameters so callers can map back to time.
struct Ellipse3D {
  Eigen::Matrix3d t_e = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d t_edot = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d t_f = Eigen::Matrix3d::Identity();
  Eigen::Matrix2d r = Eigen::Matrix2d::Identity();
  ImpedanceState center;
  ImpedanceParams params;
  SinusoidInput input;

  /// T_e * T_edot * T_f, applied to the unit circle.
  Eigen::Matrix3d composite() const { return t_e * t_edot * t_f; }
};

/// Geometric ellipse in a 2D plane. tilt is the major-axis angle, in
/// (-pi/2, pi/2], and is 0 for circles.
struct Ellipse2D {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double semi_major = 1.0;
  double semi_minor = 1.0;
  double tilt = 0.0;

  Eigen::Vector2d point(double angle) const;
};

enum class ProjectionPlane {
  kStiffness,  // (e, f_int)
  kDamping,    // (e_dot, f_int)
  kPhase,      // (e, e_dot)
};

const char* to_string(ProjectionPlane plane);

inline constexpr std::size_t kDefaultThetaGrid = 720;

Binormal binormal(const ImpedanceParams& params, const SinusoidInput& input);

/// phi = atan((m w^2 - k) / sqrt(d^2 + 1)), rho = atan(d).
RotationAngles rotation_angles(const ImpedanceParams& params,
                               const SinusoidInput& input);

/// Angles recovered from any binormal via tan(phi) = -b1 / sqrt(b2^2 + b3^2)
/// and tan(rho) = -b2 / b3. Agrees with rotation_angles on synthesized ones.
RotationAngles angles_from_binormal(const Binormal& b);

/// Right-handed rotation about the e-axis.
Eigen::Matrix3d rotation_about_e(double rho);
/// Right-handed rotation about the e_dot-axis.
Eigen::Matrix3d rotation_about_edot(double phi);

Ellipse3D transform_chain(const ImpedanceParams& params,
                          const SinusoidInput& input);

ImpedanceState eval_parametric(const Ellipse3D& ellipse, double theta);

/// theta_k = 2 pi k / n for k in [0, n): one period without the duplicate end.
std::vector<double> theta_grid(std::size_t n);

std::vector<ImpedanceState> sample_ellipse(const Ellipse3D& ellipse,
                                           std::size_t n = kDefaultThetaGrid);

Eigen::Vector2d project_point(const ImpedanceState& s, ProjectionPlane plane);

/// Coordinate-drop projection. Throws Error(kArgument) on empty input.
std::vector<Eigen::Vector2d> project(std::span<const ImpedanceState> states,
                                     ProjectionPlane plane);
std::vector<Eigen::Vector2d> project(const Trajectory& traj,
                                     ProjectionPlane plane);
std::vector<Eigen::Vector2d> project(const Ellipse3D& ellipse,
                                     ProjectionPlane plane,
                                     std::size_t n = kDefaultThetaGrid);

/// Major-axis direction of a planar scatter. Lines are handled with a total
/// least squares fit; ellipses with the direct conic fit.
struct ProjectedAxis {
  double angle = 0.0;  // in (-pi/2, pi/2]
  double slope = 0.0;  // tan(angle); +-inf for a vertical axis
  bool degenerate = false;
};

struct ProjectedAngleOptions {
  std::size_t grid = kDefaultThetaGrid;
  /// Scatter is treated as a line when lambda_min / lambda_max of its
  /// covariance falls below this.
  double line_threshold = 1e-16;
};

ProjectedAxis major_axis(std::span<const Eigen::Vector2d> points,
                         const ProjectedAngleOptions& options = {});

struct ProjectedAngles {
  ProjectedAxis phi_hat;  // stiffness plane
  ProjectedAxis rho_hat;  // damping plane
};

ProjectedAngles projected_angles(const ImpedanceParams& params,
                                 const SinusoidInput& input,
                                 const ProjectedAngleOptions& options = {});

}  // namespace impspace
