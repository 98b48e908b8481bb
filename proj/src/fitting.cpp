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

#include "impedance/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "impedance/errors.hpp"
#include "impedance/kernels.hpp"

namespace impspace {

namespace {

constexpr double kPi = std::numbers::pi;

// lambda_mid / lambda_max of the normalized scatter below this is treated as
// collinear data.
constexpr double kCollinearThreshold = 1e-14;

// Relative eigenvalue gap under which a quadratic form counts as a circle.
constexpr double kCircleTolerance = 1e-12;

double wrap_half_turn(double angle) {
  while (angle <= -kPi / 2) angle += kPi;
  while (angle > kPi / 2) angle -= kPi;
  return angle;
}

// Substitutes x' = (x - mx) / sx, y' = (y - my) / sy into a conic written in
// primed coordinates, giving the conic in x, y.
Conic2D denormalize(const Eigen::Matrix<double, 6, 1>& c, double mx, double my,
                    double sx, double sy) {
  const double p = 1.0 / sx;
  const double q = 1.0 / sy;
  const double u0 = p * mx;
  const double v0 = q * my;
  const double a = c[0], b = c[1], cc = c[2], d = c[3], e = c[4], f = c[5];

  Conic2D out;
  out.coeffs[0] = a * p * p;
  out.coeffs[1] = b * p * q;
  out.coeffs[2] = cc * q * q;
  out.coeffs[3] = p * (d - 2.0 * a * u0 - b * v0);
  out.coeffs[4] = q * (e - b * u0 - 2.0 * cc * v0);
  out.coeffs[5] = a * u0 * u0 + b * u0 * v0 + cc * v0 * v0 - d * u0 - e * v0 + f;
  return out;
}

}  // namespace

double Conic2D::eval(const Eigen::Vector2d& p) const {
  const double x = p.x();
  const double y = p.y();
  return a() * x * x + b() * x * y + c() * y * y + d() * x + e() * y + f();
}

Eigen::Vector2d Conic2D::gradient(const Eigen::Vector2d& p) const {
  return {2.0 * a() * p.x() + b() * p.y() + d(),
          b() * p.x() + 2.0 * c() * p.y() + e()};
}

Conic2D Conic2D::normalized() const {
  double norm = 0.0;
  for (double v : coeffs) norm += v * v;
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) {
    throw Error(ErrorKind::kDomain, "conic", "zero coefficient vector");
  }
  const double sign = (a() + c()) < 0.0 ? -1.0 : 1.0;
  Conic2D out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    out.coeffs[i] = sign * coeffs[i] / norm;
  }
  return out;
}

PlaneFit fit_plane(std::span<const ImpedanceState> states) {
  if (states.size() < 3) {
    throw Error(ErrorKind::kDegenerateData, "fit_plane",
                "need at least 3 samples, got " + std::to_string(states.size()));
  }
  const auto m = kernels::moments(states);

  // Channels differ in scale by many orders of magnitude (metres vs newtons),
  // so the principal axes are taken on the scatter normalized per channel.
  Eigen::Vector3d scale = m.scatter.diagonal().cwiseSqrt();
  const double largest = scale.maxCoeff();
  if (!(largest > 0.0)) {
    throw Error(ErrorKind::kDegenerateData, "fit_plane",
                "all samples coincide (no motion)");
  }
  // A constant channel (e.g. zero force) keeps the scale of the others.
  for (int i = 0; i < 3; ++i) {
    if (!(scale[i] > largest * 1e-100)) scale[i] = largest;
  }
  const Eigen::Matrix3d inv = scale.cwiseInverse().asDiagonal();
  const Eigen::Matrix3d normalized = inv * m.scatter * inv;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(normalized);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumerical, "fit_plane", "eigen solve failed");
  }
  const Eigen::Vector3d lambda = eig.eigenvalues();  // ascending
  if (!(lambda[1] > kCollinearThreshold * lambda[2])) {
    throw Error(ErrorKind::kDegenerateData, "fit_plane",
                "samples are collinear; plane undefined");
  }

  // n' . x' = 0 with x' = S^-1 (x - c) gives n = S^-1 n'.
  Eigen::Vector3d normal = inv * eig.eigenvectors().col(0);
  normal.normalize();
  if (normal.z() > 0.0) normal = -normal;

  PlaneFit fit;
  fit.normal = normal;
  fit.centroid = m.mean;

  double sq = 0.0;
  for (const auto& s : states) {
    const double r = normal.dot(s.vec() - m.mean);
    sq += r * r;
  }
  fit.rms_out_of_plane = std::sqrt(sq / static_cast<double>(states.size()));

  // In-plane axes: any orthonormal pair spanning the plane, then rotated onto
  // the principal directions of the in-plane scatter.
  const Eigen::Vector3d helper =
      std::abs(normal.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d w1 = (helper - normal * normal.dot(helper)).normalized();
  const Eigen::Vector3d w2 = normal.cross(w1);
  const double sxx = w1.dot(m.scatter * w1);
  const double syy = w2.dot(m.scatter * w2);
  const double sxy = w1.dot(m.scatter * w2);
  const double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  Eigen::Vector3d u1 = std::cos(angle) * w1 + std::sin(angle) * w2;
  Eigen::Vector3d u2 = normal.cross(u1);
  fit.axes = {u1.normalized(), u2.normalized()};
  return fit;
}

PlaneFit fit_plane(const Trajectory& traj) {
  const auto states = traj.states();
  return fit_plane(states);
}

namespace {

struct CenteredFit {
  Conic2D conic;  // in coordinates relative to `mean`
  Eigen::Vector2d mean;
};

CenteredFit fit_centered(std::span<const Eigen::Vector2d> points) {
  if (points.size() < 6) {
    throw Error(ErrorKind::kArgument, "fit_ellipse_direct",
                "need at least 6 points, got " + std::to_string(points.size()));
  }
  for (const auto& p : points) {
    if (!p.allFinite()) {
      throw Error(ErrorKind::kArgument, "fit_ellipse_direct", "non-finite point");
    }
  }

  // Center and scale each axis to unit RMS.
  const double n = static_cast<double>(points.size());
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : points) mean += p;
  mean /= n;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector2d d = p - mean;
    cov += d * d.transpose();
  }
  cov /= n;
  const double sx = std::sqrt(cov(0, 0));
  const double sy = std::sqrt(cov(1, 1));
  if (!(sx > 0.0) || !(sy > 0.0)) {
    throw Error(ErrorKind::kNoEllipse, "fit_ellipse_direct",
                "points are collinear");
  }
  const double corr = cov(0, 1) / (sx * sy);
  if (1.0 - std::abs(corr) <= 1e-14) {
    throw Error(ErrorKind::kNoEllipse, "fit_ellipse_direct",
                "points are collinear");
  }

  // Design matrix split into quadratic and linear parts.
  Eigen::Matrix3d s1 = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d s2 = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d s3 = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const double x = (p.x() - mean.x()) / sx;
    const double y = (p.y() - mean.y()) / sy;
    const Eigen::Vector3d quad(x * x, x * y, y * y);
    const Eigen::Vector3d lin(x, y, 1.0);
    s1.noalias() += quad * quad.transpose();
    s2.noalias() += quad * lin.transpose();
    s3.noalias() += lin * lin.transpose();
  }

  const Eigen::LDLT<Eigen::Matrix3d> s3_solver(s3);
  if (s3_solver.info() != Eigen::Success || !s3_solver.isPositive() ||
      s3_solver.vectorD().minCoeff() <= 1e-14 * s3_solver.vectorD().maxCoeff()) {
    throw Error(ErrorKind::kDegenerateData, "fit_ellipse_direct",
                "linear scatter block is singular");
  }
  // Linear coefficients as a function of the quadratic ones.
  const Eigen::Matrix3d t = -s3_solver.solve(s2.transpose());
  const Eigen::Matrix3d reduced = s1 + s2 * t;

  // Premultiply by the inverse of the constraint matrix for 4AC - B^2 = 1.
  Eigen::Matrix3d m;
  m.row(0) = reduced.row(2) / 2.0;
  m.row(1) = -reduced.row(1);
  m.row(2) = reduced.row(0) / 2.0;

  Eigen::EigenSolver<Eigen::Matrix3d> eig(m);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumerical, "fit_ellipse_direct", "eigen solve failed");
  }

  int best = -1;
  double best_lambda = std::numeric_limits<double>::infinity();
  Eigen::Vector3d quad_coeffs = Eigen::Vector3d::Zero();
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3d v = eig.eigenvectors().col(k).real();
    const double cond = 4.0 * v[0] * v[2] - v[1] * v[1];
    if (cond <= 0.0) continue;
    const double lambda = eig.eigenvalues()[k].real();
    if (best < 0 || lambda < best_lambda) {
      best = k;
      best_lambda = lambda;
      quad_coeffs = v;
    }
  }
  if (best < 0) {
    throw Error(ErrorKind::kNoEllipse, "fit_ellipse_direct",
                "no eigenvector satisfies the ellipse constraint");
  }

  Eigen::Matrix<double, 6, 1> coeffs;
  coeffs.head<3>() = quad_coeffs;
  coeffs.tail<3>() = t * quad_coeffs;

  const Conic2D conic = denormalize(coeffs, 0.0, 0.0, sx, sy).normalized();
  if (!(conic.discriminant() < 0.0)) {
    throw Error(ErrorKind::kNoEllipse, "fit_ellipse_direct",
                "fit is not an ellipse after back-substitution");
  }
  return {conic, mean};
}

}  // namespace

Conic2D fit_ellipse_direct(std::span<const Eigen::Vector2d> points) {
  const auto fit = fit_centered(points);
  Eigen::Matrix<double, 6, 1> c;
  for (int i = 0; i < 6; ++i) c[i] = fit.conic.coeffs[static_cast<std::size_t>(i)];
  const Conic2D conic =
      denormalize(c, fit.mean.x(), fit.mean.y(), 1.0, 1.0).normalized();
  if (!(conic.discriminant() < 0.0)) {
    throw Error(ErrorKind::kNoEllipse, "fit_ellipse_direct",
                "fit is not an ellipse after back-substitution");
  }
  return conic;
}

Ellipse2D fit_ellipse_geometric(std::span<const Eigen::Vector2d> points) {
  const auto fit = fit_centered(points);
  Ellipse2D out = conic_to_geometric(fit.conic);
  out.center += fit.mean;
  return out;
}

Ellipse2D conic_to_geometric(const Conic2D& conic) {
  const double a = conic.a(), b = conic.b(), c = conic.c();
  const double d = conic.d(), e = conic.e(), f = conic.f();
  if (!(conic.discriminant() < 0.0)) {
    throw Error(ErrorKind::kDomain, "conic_to_geometric",
                "conic is not an ellipse (B^2 - 4AC >= 0)");
  }

  // Center: gradient of the conic vanishes.
  const double det = 4.0 * a * c - b * b;
  Ellipse2D out;
  out.center = {(b * e - 2.0 * c * d) / det, (b * d - 2.0 * a * e) / det};
  // Conic value at the center.
  const double f0 = f + 0.5 * (d * out.center.x() + e * out.center.y());

  // Quadratic form [[a, b/2], [b/2, c]]. Make it positive definite.
  const double sign = (a + c) < 0.0 ? -1.0 : 1.0;
  const double qa = sign * a, qb = sign * b, qc = sign * c, qf = sign * f0;
  if (!(qf < 0.0)) {
    throw Error(ErrorKind::kDomain, "conic_to_geometric",
                "imaginary or point ellipse");
  }
  const double half_trace = 0.5 * (qa + qc);
  const double radius = std::hypot(0.5 * (qa - qc), 0.5 * qb);
  const double lambda_big = half_trace + radius;
  // det / lambda_big avoids cancellation in half_trace - radius.
  const double lambda_small = (qa * qc - 0.25 * qb * qb) / lambda_big;

  out.semi_major = std::sqrt(-qf / lambda_small);
  out.semi_minor = std::sqrt(-qf / lambda_big);

  if (radius <= kCircleTolerance * half_trace) {
    out.tilt = 0.0;
    return out;
  }
  // The major axis is the eigenvector of the small eigenvalue.
  const Eigen::Vector2d v1(0.5 * qb, lambda_small - qa);
  const Eigen::Vector2d v2(lambda_small - qc, 0.5 * qb);
  const Eigen::Vector2d v = v1.squaredNorm() >= v2.squaredNorm() ? v1 : v2;
  out.tilt = wrap_half_turn(std::atan2(v.y(), v.x()));
  return out;
}

Conic2D geometric_to_conic(const Ellipse2D& ellipse) {
  if (!(ellipse.semi_major > 0.0) || !(ellipse.semi_minor > 0.0)) {
    throw Error(ErrorKind::kDomain, "geometric_to_conic",
                "semi-axes must be positive");
  }
  const double c = std::cos(ellipse.tilt);
  const double s = std::sin(ellipse.tilt);
  const double ia = 1.0 / (ellipse.semi_major * ellipse.semi_major);
  const double ib = 1.0 / (ellipse.semi_minor * ellipse.semi_minor);
  const double a = c * c * ia + s * s * ib;
  const double b = 2.0 * c * s * (ia - ib);
  const double cc = s * s * ia + c * c * ib;
  const double x0 = ellipse.center.x();
  const double y0 = ellipse.center.y();
  Conic2D out;
  out.coeffs = {a,
                b,
                cc,
                -2.0 * a * x0 - b * y0,
                -b * x0 - 2.0 * cc * y0,
                a * x0 * x0 + b * x0 * y0 + cc * y0 * y0 - 1.0};
  return out.normalized();
}

std::vector<Eigen::Vector2d> sample_ellipse2d(const Ellipse2D& ellipse,
                                              std::size_t n) {
  std::vector<Eigen::Vector2d> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = ellipse.point(2.0 * kPi * static_cast<double>(k) /
                           static_cast<double>(n));
  }
  return out;
}

double conic_rms(const Conic2D& conic, std::span<const Eigen::Vector2d> points) {
  if (points.empty()) return 0.0;
  double sq = 0.0;
  for (const auto& p : points) {
    const double g = conic.gradient(p).norm();
    const double r = g > 0.0 ? conic.eval(p) / g : 0.0;
    sq += r * r;
  }
  return std::sqrt(sq / static_cast<double>(points.size()));
}

RecoveredParameters recover_parameters(const Eigen::Vector3d& normal,
                                       double omega,
                                       std::optional<double> assumed_m,
                                       const FitOptions& options) {
  if (!normal.allFinite() || !(normal.norm() > 0.0)) {
    throw Error(ErrorKind::kArgument, "recover_parameters",
                "normal must be finite and non-zero");
  }
  if (!std::isfinite(omega) || !(omega > 0.0)) {
    throw Error(ErrorKind::kArgument, "recover_parameters",
                "omega must be finite and positive");
  }
  if (assumed_m && (!std::isfinite(*assumed_m) || *assumed_m < 0.0)) {
    throw Error(ErrorKind::kArgument, "recover_parameters",
                "assumed mass must be finite and non-negative");
  }
  if (std::abs(normal.z()) < options.conditioning_threshold * normal.norm()) {
    throw Error(ErrorKind::kIllConditioned, "recover_parameters",
                "plane nearly contains the force axis");
  }
  // Scale so the force component is -1: n = (k - m w^2, d, -1).
  const Eigen::Vector3d n = normal / -normal.z();

  RecoveredParameters out;
  out.lumped_km = n.x();
  out.recovered_d = n.y();
  out.assumed_m = assumed_m;
  out.omega_used = omega;
  if (assumed_m) out.recovered_k = out.lumped_km + *assumed_m * omega * omega;
  return out;
}

std::vector<Eigen::Vector2d> to_plane_coordinates(
    const PlaneFit& plane, std::span<const ImpedanceState> states) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(states.size());
  for (const auto& s : states) {
    const Eigen::Vector3d d = s.vec() - plane.centroid;
    out.emplace_back(plane.axes[0].dot(d), plane.axes[1].dot(d));
  }
  return out;
}

FitReport fit_trajectory(const Trajectory& traj, double omega,
                         std::optional<double> assumed_m,
                         const FitOptions& options) {
  if (traj.size() < 6) {
    throw Error(ErrorKind::kDegenerateData, "fit_trajectory",
                "need at least 6 samples, got " + std::to_string(traj.size()));
  }
  const auto states = traj.states();

  FitReport report;
  report.samples = states.size();
  report.plane = fit_plane(states);
  report.residuals.plane_rms = report.plane.rms_out_of_plane;

  const auto in_plane = to_plane_coordinates(report.plane, states);
  report.conic_in_plane = fit_ellipse_direct(in_plane);
  report.ellipse2d_in_plane = fit_ellipse_geometric(in_plane);
  report.residuals.conic_rms = conic_rms(report.conic_in_plane, in_plane);

  report.recovered = recover_parameters(report.plane, omega, assumed_m, options);
  return report;
}

}  // namespace impspace
