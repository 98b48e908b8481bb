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
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "impedance/model.hpp"

namespace impspace {

/// Column selectors: a header name, or a zero-based index written as digits.
/// Deviation comes from `dev` when set and present, otherwise eq - pos.
struct ColumnMap {
  std::string time = "t";
  std::optional<std::string> pos;
  std::optional<std::string> eq;
  std::optional<std::string> dev = "e";
  std::string force = "f_int";
  /// Used when present in the file; otherwise velocity is estimated.
  std::optional<std::string> vel = "e_dot";
};

enum class PositionUnit { kMeter, kMillimeter };
enum class ForceUnit { kNewton };

struct Units {
  PositionUnit position = PositionUnit::kMeter;
  ForceUnit force = ForceUnit::kNewton;
};

PositionUnit parse_position_unit(const std::string& s);
ForceUnit parse_force_unit(const std::string& s);

/// Parsed log in SI units.
struct RawLog {
  std::vector<double> t;
  std::vector<double> e;
  std::vector<double> f_int;
  std::optional<std::vector<double>> e_dot;

  std::size_t size() const { return t.size(); }
};

RawLog load_csv(const std::filesystem::path& path, const ColumnMap& columns = {},
                const Units& units = {});
RawLog parse_csv(std::istream& in, const ColumnMap& columns = {},
                 const Units& units = {});

enum class DiffMethod { kCentral, kSmoothed };

DiffMethod parse_diff_method(const std::string& s);

inline constexpr std::size_t kDefaultSmoothingWindow = 11;

/// Estimates e_dot from e. Central: three-point second-order differences,
/// one-sided at the ends. Smoothed: degree-2 local least squares over
/// `window` samples, shifted inward near the ends.
std::vector<double> differentiate(const std::vector<double>& t,
                                  const std::vector<double>& e,
                                  DiffMethod method,
                                  std::size_t window = kDefaultSmoothingWindow);

Trajectory differentiate(const RawLog& log, DiffMethod method,
                         std::size_t window = kDefaultSmoothingWindow);

/// Uses the logged velocity when available, else differentiates.
Trajectory to_trajectory(const RawLog& log, DiffMethod method,
                         std::size_t window = kDefaultSmoothingWindow);

/// Linear interpolation onto a uniform grid with spacing dt.
RawLog resample_uniform(const RawLog& log, double dt);

struct Segmentation {
  std::vector<Trajectory> segments;
  std::size_t discarded = 0;
};

/// Splits at upward zero crossings of e and keeps pieces lasting at least
/// `min_fraction` of the nominal period 2 pi / omega.
Segmentation segment_periods(const Trajectory& traj, double omega,
                             double min_fraction = 0.8);

/// Angular frequency from the mean spacing of upward zero crossings of e;
/// nullopt with fewer than two crossings.
std::optional<double> estimate_omega(const Trajectory& traj);

}  // namespace impspace
