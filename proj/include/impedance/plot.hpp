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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "impedance/geometry.hpp"
#include "impedance/model.hpp"

namespace impspace {

struct PlotSeries {
  std::string label;
  std::vector<ImpedanceState> points;
};

PlotSeries make_series(const Ellipse3D& ellipse, std::string label,
                       std::size_t n = kDefaultThetaGrid);
PlotSeries make_series(const Trajectory& traj, std::string label);

struct PlotStyle {
  int width = 640;
  int height = 480;
  std::string title;
  double stroke_width = 1.5;
  /// Cycled per series.
  std::vector<std::string> palette = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                      "#d62728", "#9467bd", "#8c564b"};
};

/// Orthographic camera; angles in degrees.
struct View3D {
  double azimuth = -37.5;
  double elevation = 30.0;
  bool ghost_projections = true;
};

/// 2D plot of the series projected on `plane`, with axes, ticks, units and a
/// legend. Output is byte-stable for identical input.
std::string plot_projection(std::span<const PlotSeries> series,
                            ProjectionPlane plane, const PlotStyle& style = {});

/// Wireframe of the impedance space. Each axis is scaled independently to
/// the unit cube; tick labels carry physical values.
std::string plot_impedance_space(std::span<const PlotSeries> series,
                                 const View3D& view = {},
                                 const PlotStyle& style = {});

/// CSV blocks, one per series, separated by a blank line. Each block header
/// is `e[label],e_dot[label],f_int[label]`.
std::string format_plotdata(std::span<const PlotSeries> series);
void export_plotdata(std::span<const PlotSeries> series,
                     const std::filesystem::path& path);

/// Write to a temporary sibling then rename over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace impspace
