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

#include "impedance/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string_view>

#include <fmt/format.h>

#include "impedance/errors.hpp"

namespace impspace {

namespace {

constexpr double kPi = std::numbers::pi;

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  double span() const { return hi - lo; }
};

// Widens empty or single-valued ranges and pads by a fraction of the span.
Range padded(double lo, double hi, double pad = 0.05) {
  if (!(hi > lo)) {
    const double mag = std::max(std::abs(lo), 1e-12);
    return {lo - 0.5 * mag, hi + 0.5 * mag};
  }
  const double p = (hi - lo) * pad;
  return {lo - p, hi + p};
}

double nice_step(double span, int target_ticks) {
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double nice = 10.0;
  if (norm <= 1.0) nice = 1.0;
  else if (norm <= 2.0) nice = 2.0;
  else if (norm <= 5.0) nice = 5.0;
  return nice * mag;
}

std::vector<double> ticks(const Range& r, int target = 5) {
  const double step = nice_step(r.span(), target);
  std::vector<double> out;
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step) {
    // Snap tiny values to zero to avoid "-0" and 1e-17 labels.
    out.push_back(std::abs(v) < 1e-9 * step ? 0.0 : v);
  }
  return out;
}

std::string num(double v) { return fmt::format("{:.2f}", v); }

std::string tick_label(double v) { return fmt::format("{:.6g}", v); }

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* axis_label(int axis) {
  switch (axis) {
    case 0: return "e [m]";
    case 1: return "\xC4\x97 [m/s]";  // e with dot above
    default: return "f_int [N]";
  }
}

std::array<int, 2> plane_axes(ProjectionPlane plane) {
  switch (plane) {
    case ProjectionPlane::kStiffness: return {0, 2};
    case ProjectionPlane::kDamping: return {1, 2};
    case ProjectionPlane::kPhase: return {0, 1};
  }
  return {0, 2};
}

double component(const ImpedanceState& s, int axis) {
  return axis == 0 ? s.e : axis == 1 ? s.e_dot : s.f_int;
}

void require_series(std::span<const PlotSeries> series, const char* stage) {
  if (series.empty()) {
    throw Error(ErrorKind::kArgument, stage, "no series given");
  }
  for (const auto& s : series) {
    if (s.points.empty()) {
      throw Error(ErrorKind::kArgument, stage,
                  "series '" + s.label + "' has no points");
    }
  }
}

const std::string& color(const PlotStyle& style, std::size_t i) {
  static const std::string kFallback = "#000000";
  if (style.palette.empty()) return kFallback;
  return style.palette[i % style.palette.size()];
}

void open_svg(std::string& out, const PlotStyle& style) {
  out += fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      "width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      style.width, style.height);
  if (!style.title.empty()) {
    out += fmt::format(
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        num(style.width / 2.0), escape(style.title));
  }
}

void polyline(std::string& out, const std::vector<std::array<double, 2>>& pts,
              const std::string& stroke, double width, std::string_view extra = {}) {
  if (pts.size() == 1) {
    out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"{}/>\n",
                       num(pts[0][0]), num(pts[0][1]), stroke, extra);
    return;
  }
  out += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
         num(width) + "\"" + std::string(extra) + " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += num(pts[i][0]) + "," + num(pts[i][1]);
  }
  out += "\"/>\n";
}

void legend(std::string& out, std::span<const PlotSeries> series,
            const PlotStyle& style, double x, double y) {
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double yy = y + 16.0 * static_cast<double>(i);
    out += fmt::format(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" "
        "stroke-width=\"2\"/>\n"
        "<text x=\"{}\" y=\"{}\">{}</text>\n",
        num(x), num(yy), num(x + 18.0), num(yy), color(style, i), num(x + 22.0),
        num(yy + 4.0), escape(series[i].label));
  }
}

}  // namespace

PlotSeries make_series(const Ellipse3D& ellipse, std::string label, std::size_t n) {
  auto points = sample_ellipse(ellipse, n);
  points.push_back(points.front());  // closed curve
  return {std::move(label), std::move(points)};
}

PlotSeries make_series(const Trajectory& traj, std::string label) {
  return {std::move(label), traj.states()};
}

std::string plot_projection(std::span<const PlotSeries> series,
                            ProjectionPlane plane, const PlotStyle& style) {
  require_series(series, "plot_projection");
  const auto [ax, ay] = plane_axes(plane);

  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      xlo = std::min(xlo, component(p, ax));
      xhi = std::max(xhi, component(p, ax));
      ylo = std::min(ylo, component(p, ay));
      yhi = std::max(yhi, component(p, ay));
    }
  }
  const Range xr = padded(xlo, xhi);
  const Range yr = padded(ylo, yhi);

  const double left = 80.0, right = 150.0, top = 40.0, bottom = 50.0;
  const double pw = style.width - left - right;
  const double ph = style.height - top - bottom;
  const auto sx = [&](double v) { return left + (v - xr.lo) / xr.span() * pw; };
  const auto sy = [&](double v) { return top + (yr.hi - v) / yr.span() * ph; };

  std::string out;
  open_svg(out, style);
  out += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      num(left), num(top), num(pw), num(ph));

  for (double v : ticks(xr)) {
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#dddddd\"/>\n"
        "<text x=\"{0}\" y=\"{3}\" text-anchor=\"middle\">{4}</text>\n",
        num(sx(v)), num(top), num(top + ph), num(top + ph + 16.0), tick_label(v));
  }
  for (double v : ticks(yr)) {
    out += fmt::format(
        "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#dddddd\"/>\n"
        "<text x=\"{3}\" y=\"{4}\" text-anchor=\"end\">{5}</text>\n",
        num(sy(v)), num(left), num(left + pw), num(left - 6.0), num(sy(v) + 4.0),
        tick_label(v));
  }
  // Zero axes when in range.
  if (xr.lo < 0.0 && xr.hi > 0.0) {
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#888888\"/>\n",
        num(sx(0.0)), num(top), num(top + ph));
  }
  if (yr.lo < 0.0 && yr.hi > 0.0) {
    out += fmt::format(
        "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#888888\"/>\n",
        num(sy(0.0)), num(left), num(left + pw));
  }
  out += fmt::format(
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n"
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 {} {})\">{}</text>\n",
      num(left + pw / 2.0), num(style.height - 12.0), axis_label(ax), num(18.0),
      num(top + ph / 2.0), num(18.0), num(top + ph / 2.0), axis_label(ay));

  for (std::size_t i = 0; i < series.size(); ++i) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(series[i].points.size());
    for (const auto& p : series[i].points) {
      pts.push_back({sx(component(p, ax)), sy(component(p, ay))});
    }
    polyline(out, pts, color(style, i), style.stroke_width);
  }
  legend(out, series, style, left + pw + 12.0, top + 10.0);
  out += "</svg>\n";
  return out;
}

std::string plot_impedance_space(std::span<const PlotSeries> series,
                                 const View3D& view, const PlotStyle& style) {
  require_series(series, "plot_impedance_space");

  // Independent symmetric scaling per axis onto [-1, 1].
  std::array<double, 3> scale{0.0, 0.0, 0.0};
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      for (int a = 0; a < 3; ++a) {
        scale[a] = std::max(scale[a], std::abs(component(p, a)));
      }
    }
  }
  for (auto& v : scale) {
    if (!(v > 0.0)) v = 1.0;
  }

  const double az = view.azimuth * kPi / 180.0;
  const double el = view.elevation * kPi / 180.0;
  const double cx = (style.width - 150.0) / 2.0 + 20.0;
  const double cy = style.height / 2.0 + 10.0;
  const double r = 0.33 * std::min(style.width - 150.0, style.height - 40.0);
  // Orthographic view: e and e_dot span the ground, f_int points up.
  const auto to_screen = [&](double x, double y, double z) -> std::array<double, 2> {
    const double u = std::cos(az) * x + std::sin(az) * y;
    const double v = -std::sin(el) * std::sin(az) * x +
                     std::sin(el) * std::cos(az) * y + std::cos(el) * z;
    return {cx + r * u, cy - r * v};
  };
  const auto unit = [&](const ImpedanceState& p) -> std::array<double, 3> {
    return {p.e / scale[0], p.e_dot / scale[1], p.f_int / scale[2]};
  };

  std::string out;
  open_svg(out, style);

  // Bounding cube.
  out += "<g stroke=\"#cccccc\" stroke-width=\"0.8\" fill=\"none\">\n";
  for (int i = 0; i < 4; ++i) {
    const double a = (i & 1) ? 1.0 : -1.0;
    const double b = (i & 2) ? 1.0 : -1.0;
    const std::array<std::array<std::array<double, 3>, 2>, 3> edges{{
        {{{-1.0, a, b}, {1.0, a, b}}},
        {{{a, -1.0, b}, {a, 1.0, b}}},
        {{{a, b, -1.0}, {a, b, 1.0}}},
    }};
    for (const auto& e : edges) {
      const auto p0 = to_screen(e[0][0], e[0][1], e[0][2]);
      const auto p1 = to_screen(e[1][0], e[1][1], e[1][2]);
      out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
                         num(p0[0]), num(p0[1]), num(p1[0]), num(p1[1]));
    }
  }
  out += "</g>\n";

  // Axes through the origin with end labels and physical extents.
  for (int a = 0; a < 3; ++a) {
    std::array<double, 3> lo{0.0, 0.0, 0.0}, hi{0.0, 0.0, 0.0};
    lo[a] = -1.0;
    hi[a] = 1.0;
    const auto p0 = to_screen(lo[0], lo[1], lo[2]);
    const auto p1 = to_screen(hi[0], hi[1], hi[2]);
    std::array<double, 3> tip{0.0, 0.0, 0.0};
    tip[a] = 1.15;
    const auto pt = to_screen(tip[0], tip[1], tip[2]);
    out += fmt::format(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#555555\"/>\n"
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n"
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"10\" "
        "fill=\"#555555\">{}</text>\n",
        num(p0[0]), num(p0[1]), num(p1[0]), num(p1[1]), num(pt[0]), num(pt[1]),
        axis_label(a), num(p1[0]), num(p1[1] + 12.0), tick_label(scale[a]));
  }

  if (view.ghost_projections) {
    // Back walls: damping plane at e = -1, stiffness plane at e_dot = +1,
    // phase plane on the floor f = -1.
    for (std::size_t i = 0; i < series.size(); ++i) {
      for (int wall = 0; wall < 3; ++wall) {
        std::vector<std::array<double, 2>> pts;
        for (const auto& p : series[i].points) {
          auto u = unit(p);
          if (wall == 0) u[0] = -1.0;
          if (wall == 1) u[1] = 1.0;
          if (wall == 2) u[2] = -1.0;
          pts.push_back(to_screen(u[0], u[1], u[2]));
        }
        polyline(out, pts, color(style, i), 1.0,
                 " stroke-opacity=\"0.35\" stroke-dasharray=\"4 3\"");
      }
    }
  }

  for (std::size_t i = 0; i < series.size(); ++i) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(series[i].points.size());
    for (const auto& p : series[i].points) {
      const auto u = unit(p);
      pts.push_back(to_screen(u[0], u[1], u[2]));
    }
    polyline(out, pts, color(style, i), style.stroke_width);
  }
  legend(out, series, style, style.width - 140.0, 40.0);
  out += "</svg>\n";
  return out;
}

std::string format_plotdata(std::span<const PlotSeries> series) {
  require_series(series, "export_plotdata");
  std::string out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i) out += '\n';
    const auto& label = series[i].label;
    out += fmt::format("e[{0}],e_dot[{0}],f_int[{0}]\n", label);
    for (const auto& p : series[i].points) {
      out += fmt::format("{:.17g},{:.17g},{:.17g}\n", p.e, p.e_dot, p.f_int);
    }
  }
  return out;
}

void export_plotdata(std::span<const PlotSeries> series,
                     const std::filesystem::path& path) {
  write_file_atomic(path, format_plotdata(series));
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorKind::kIo, "write", "cannot open '" + tmp.string() + "'");
    }
    out << content;
    out.flush();
    if (!out) {
      throw Error(ErrorKind::kIo, "write", "write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::kIo, "write",
                "cannot rename onto '" + path.string() + "'");
  }
}

}  // namespace impspace
