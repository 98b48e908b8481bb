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

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "impedance/geometry.hpp"
#include "impedance/model.hpp"

namespace impspace {

/// A x^2 + B xy + C y^2 + D x + E y + F = 0.
struct Conic2D {
  std::array<double, 6> coeffs{};

  double a() const { return coeffs[0]; }
  double b() const { return coeffs[1]; }
  double c() const { return coeffs[2]; }
  double d() const { return coeffs[3]; }
  double e() const { return coeffs[4]; }
  double f() const { return coeffs[5]; }

  double discriminant() const { return b() * b() - 4.0 * a() * c(); }
  double eval(const Eigen::Vector2d& p) const;
  Eigen::Vector2d gradient(const Eigen::Vector2d& p) const;

  /// Unit coefficient norm, sign chosen so that A + C > 0.
  Conic2D normalized() const;
};

struct PlaneFit {
  Eigen::Vector3d normal{0.0, 0.0, -1.0};
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  double rms_out_of_plane = 0.0;
  /// In-plane orthonormal axes, ordered by scatter variance, with
  /// axes[0] x axes[1] == normal.
  std::array<Eigen::Vector3d, 2> axes{Eigen::Vector3d::UnitX(),
                                      Eigen::Vector3d::UnitY()};

  Binormal binormal() const { return {normal.x(), normal.y(), normal.z()}; }
};

struct RecoveredParameters {
  double lumped_km = 0.0;
  double recovered_d = 0.0;
  std::optional<double> recovered_k;
  std::optional<double> assumed_m;
  double omega_used = 0.0;
};

struct FitResiduals {
  double plane_rms = 0.0;
  double conic_rms = 0.0;
};

struct FitReport {
  PlaneFit plane;
  Ellipse2D ellipse2d_in_plane;
  Conic2D conic_in_plane;
  RecoveredParameters recovered;
  FitResiduals residuals;
  std::size_t samples = 0;
};

struct FitOptions {
  /// |n_f| / |n| below this makes recover_parameters fail.
  double conditioning_threshold = 1e-9;
};

/// Least-squares plane via the smallest principal direction of the
/// per-channel normalized scatter.
PlaneFit fit_plane(std::span<const ImpedanceState> states);
PlaneFit fit_plane(const Trajectory& traj);

/// Halir-Flusser direct least squares ellipse fit.
Conic2D fit_ellipse_direct(std::span<const Eigen::Vector2d> points);

Ellipse2D conic_to_geometric(const Conic2D& conic);

/// Same fit as fit_ellipse_direct, reduced to geometric form before the
/// translation back to the input frame. Stays accurate when the center lies
/// far from the origin relative to the axes.
Ellipse2D fit_ellipse_geometric(std::span<const Eigen::Vector2d> points);
Conic2D geometric_to_conic(const Ellipse2D& ellipse);

std::vector<Eigen::Vector2d> sample_ellipse2d(const Ellipse2D& ellipse,
                                              std::size_t n);

/// Root-mean-square Sampson distance of the points to the conic.
double conic_rms(const Conic2D& conic, std::span<const Eigen::Vector2d> points);

RecoveredParameters recover_parameters(const Eigen::Vector3d& normal,
                                       double omega,
                                       std::optional<double> assumed_m,
                                       const FitOptions& options = {});
inline RecoveredParameters recover_parameters(const PlaneFit& plane,
                                              double omega,
                                              std::optional<double> assumed_m,
                                              const FitOptions& options = {}) {
  return recover_parameters(plane.normal, omega, assumed_m, options);
}

/// fit_plane -> in-plane coordinates -> fit_ellipse_direct ->
/// geometric form -> recover_parameters. Errors keep the failing stage.
FitReport fit_trajectory(const Trajectory& traj, double omega,
                         std::optional<double> assumed_m,
                         const FitOptions& options = {});

/// Plane coordinates (along plane.axes) of states relative to the centroid.
std::vector<Eigen::Vector2d> to_plane_coordinates(
    const PlaneFit& plane, std::span<const ImpedanceState> states);

}  // namespace impspace
