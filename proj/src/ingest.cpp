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

#include "impedance/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "impedance/errors.hpp"

namespace impspace {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record. Double-quoted fields may contain commas; "" escapes
// a quote.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  fields.push_back(trim(field));
  return fields;
}

Error parse_error(std::size_t line, const std::string& message) {
  return Error(ErrorKind::kParse, "load_csv",
               "row " + std::to_string(line) + ": " + message);
}

bool is_index(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return c >= '0' && c <= '9'; });
}

// Resolves a selector to a column index, or nullopt if absent.
std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       const std::string& selector) {
  if (is_index(selector)) {
    const auto idx = static_cast<std::size_t>(std::stoul(selector));
    if (idx < header.size()) return idx;
    return std::nullopt;
  }
  const auto it = std::find(header.begin(), header.end(), selector);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

std::size_t require_column(const std::vector<std::string>& header,
                           const std::string& selector, const char* role) {
  const auto idx = find_column(header, selector);
  if (!idx) {
    throw parse_error(1, std::string("missing ") + role + " column '" +
                             selector + "'");
  }
  return *idx;
}

double parse_number(const std::string& cell, std::size_t line,
                    const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || cell.empty() || !std::isfinite(value)) {
    throw parse_error(line, "non-numeric value '" + cell + "' in column '" +
                                column + "'");
  }
  return value;
}

void require_rows(std::size_t have, std::size_t need, const char* what) {
  if (have < need) {
    throw Error(ErrorKind::kArgument, "differentiate",
                std::string(what) + ": need at least " + std::to_string(need) +
                    " rows, got " + std::to_string(have));
  }
}

// Derivative at x of the quadratic through three points (Lagrange form).
double three_point(double x, double x0, double x1, double x2, double y0,
                   double y1, double y2) {
  const double l0 = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
  const double l1 = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
  const double l2 = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
  return l0 * y0 + l1 * y1 + l2 * y2;
}

}  // namespace

PositionUnit parse_position_unit(const std::string& s) {
  if (s == "m") return PositionUnit::kMeter;
  if (s == "mm") return PositionUnit::kMillimeter;
  throw Error(ErrorKind::kParse, "units", "unknown position unit '" + s + "'");
}

ForceUnit parse_force_unit(const std::string& s) {
  if (s == "N") return ForceUnit::kNewton;
  throw Error(ErrorKind::kParse, "units", "unknown force unit '" + s + "'");
}

DiffMethod parse_diff_method(const std::string& s) {
  if (s == "central") return DiffMethod::kCentral;
  if (s == "smoothed") return DiffMethod::kSmoothed;
  throw Error(ErrorKind::kArgument, "differentiate",
              "unknown method '" + s + "'");
}

RawLog parse_csv(std::istream& in, const ColumnMap& columns, const Units& units) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!trim(line).empty()) {
      header = split_record(line);
      break;
    }
  }
  if (header.empty()) throw parse_error(line_no, "missing header row");

  const std::size_t col_t = require_column(header, columns.time, "time");
  const std::size_t col_f = require_column(header, columns.force, "force");

  std::optional<std::size_t> col_dev;
  if (columns.dev) col_dev = find_column(header, *columns.dev);
  std::optional<std::size_t> col_pos, col_eq;
  if (!col_dev) {
    if (!columns.pos || !columns.eq) {
      throw parse_error(1, "deviation column '" + columns.dev.value_or("") +
                               "' not found and no position/equilibrium "
                               "columns configured");
    }
    col_pos = require_column(header, *columns.pos, "position");
    col_eq = require_column(header, *columns.eq, "equilibrium");
  }
  std::optional<std::size_t> col_vel;
  if (columns.vel) col_vel = find_column(header, *columns.vel);

  const double pos_scale = units.position == PositionUnit::kMillimeter ? 1e-3 : 1.0;

  RawLog log;
  if (col_vel) log.e_dot.emplace();
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_record(line);
    if (cells.size() != header.size()) {
      throw parse_error(line_no, "expected " + std::to_string(header.size()) +
                                     " fields, got " + std::to_string(cells.size()));
    }
    const double t = parse_number(cells[col_t], line_no, header[col_t]);
    if (!log.t.empty()) {
      if (t < log.t.back()) {
        throw parse_error(line_no, "timestamp decreases");
      }
      if (t == log.t.back()) {
        throw parse_error(line_no, "duplicate timestamp");
      }
    }
    double e = 0.0;
    if (col_dev) {
      e = parse_number(cells[*col_dev], line_no, header[*col_dev]);
    } else {
      const double x = parse_number(cells[*col_pos], line_no, header[*col_pos]);
      const double x_eq = parse_number(cells[*col_eq], line_no, header[*col_eq]);
      e = x_eq - x;
    }
    log.t.push_back(t);
    log.e.push_back(e * pos_scale);
    log.f_int.push_back(parse_number(cells[col_f], line_no, header[col_f]));
    if (col_vel) {
      log.e_dot->push_back(
          parse_number(cells[*col_vel], line_no, header[*col_vel]) * pos_scale);
    }
  }
  if (log.t.empty()) throw parse_error(line_no, "no data rows");
  return log;
}

RawLog load_csv(const std::filesystem::path& path, const ColumnMap& columns,
                const Units& units) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, "load_csv",
                "cannot open '" + path.string() + "'");
  }
  return parse_csv(in, columns, units);
}

std::vector<double> differentiate(const std::vector<double>& t,
                                  const std::vector<double>& e,
                                  DiffMethod method, std::size_t window) {
  if (t.size() != e.size()) {
    throw Error(ErrorKind::kArgument, "differentiate", "length mismatch");
  }
  const std::size_t n = t.size();
  std::vector<double> out(n);

  if (method == DiffMethod::kCentral) {
    require_rows(n, 3, "central differences");
    out[0] = three_point(t[0], t[0], t[1], t[2], e[0], e[1], e[2]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      out[i] = three_point(t[i], t[i - 1], t[i], t[i + 1], e[i - 1], e[i], e[i + 1]);
    }
    out[n - 1] = three_point(t[n - 1], t[n - 3], t[n - 2], t[n - 1], e[n - 3],
                             e[n - 2], e[n - 1]);
    return out;
  }

  if (window < 3 || window % 2 == 0) {
    throw Error(ErrorKind::kArgument, "differentiate",
                "smoothing window must be odd and >= 3");
  }
  require_rows(n, window, "smoothed derivative");
  const std::size_t half = window / 2;
  Eigen::MatrixXd design(window, 3);
  Eigen::VectorXd rhs(window);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = std::clamp(i, half, n - 1 - half) - half;
    // Local quadratic in (t - t_i), scaled by the window span.
    const double span = t[lo + window - 1] - t[lo];
    for (std::size_t k = 0; k < window; ++k) {
      const double u = (t[lo + k] - t[i]) / span;
      design(k, 0) = 1.0;
      design(k, 1) = u;
      design(k, 2) = u * u;
      rhs(k) = e[lo + k];
    }
    const Eigen::Vector3d coeffs = design.colPivHouseholderQr().solve(rhs);
    out[i] = coeffs(1) / span;
  }
  return out;
}

Trajectory differentiate(const RawLog& log, DiffMethod method, std::size_t window) {
  const auto e_dot = differentiate(log.t, log.e, method, window);
  std::vector<Sample> samples(log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    samples[i] = {log.t[i], {log.e[i], e_dot[i], log.f_int[i]}};
  }
  return Trajectory(std::move(samples));
}

Trajectory to_trajectory(const RawLog& log, DiffMethod method, std::size_t window) {
  if (!log.e_dot) return differentiate(log, method, window);
  std::vector<Sample> samples(log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    samples[i] = {log.t[i], {log.e[i], (*log.e_dot)[i], log.f_int[i]}};
  }
  return Trajectory(std::move(samples));
}

RawLog resample_uniform(const RawLog& log, double dt) {
  if (!std::isfinite(dt) || !(dt > 0.0)) {
    throw Error(ErrorKind::kArgument, "resample_uniform", "dt must be positive");
  }
  if (log.size() < 2) {
    throw Error(ErrorKind::kArgument, "resample_uniform", "need at least 2 rows");
  }
  const double t0 = log.t.front();
  const double t1 = log.t.back();
  const auto count = static_cast<std::size_t>(std::floor((t1 - t0) / dt + 1e-9)) + 1;

  RawLog out;
  if (log.e_dot) out.e_dot.emplace();
  std::size_t j = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = std::min(t0 + dt * static_cast<double>(i), t1);
    while (j + 2 < log.size() && log.t[j + 1] < t) ++j;
    const double w = (t - log.t[j]) / (log.t[j + 1] - log.t[j]);
    const auto lerp = [&](const std::vector<double>& v) {
      return v[j] + w * (v[j + 1] - v[j]);
    };
    out.t.push_back(t);
    out.e.push_back(lerp(log.e));
    out.f_int.push_back(lerp(log.f_int));
    if (log.e_dot) out.e_dot->push_back(lerp(*log.e_dot));
  }
  return out;
}

Segmentation segment_periods(const Trajectory& traj, double omega,
                             double min_fraction) {
  if (!std::isfinite(omega) || !(omega > 0.0)) {
    throw Error(ErrorKind::kArgument, "segment_periods", "omega must be positive");
  }
  const double period = 2.0 * std::numbers::pi / omega;
  const double min_duration = min_fraction * period;
  const auto samples = traj.samples();

  std::vector<std::size_t> cuts{0};
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i - 1].state.e < 0.0 && samples[i].state.e >= 0.0) cuts.push_back(i);
  }
  cuts.push_back(samples.size());

  Segmentation out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const std::size_t lo = cuts[k];
    const std::size_t hi = cuts[k + 1];
    if (hi == lo) continue;
    const double duration = samples[hi - 1].t - samples[lo].t;
    if (duration < min_duration) {
      ++out.discarded;
      continue;
    }
    out.segments.emplace_back(
        std::vector<Sample>(samples.begin() + static_cast<std::ptrdiff_t>(lo),
                            samples.begin() + static_cast<std::ptrdiff_t>(hi)));
  }
  if (out.segments.empty()) {
    throw Error(ErrorKind::kSegmentation, "segment_periods",
                "no complete period found");
  }
  return out;
}

std::optional<double> estimate_omega(const Trajectory& traj) {
  std::vector<double> crossings;
  const auto samples = traj.samples();
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double e0 = samples[i - 1].state.e;
    const double e1 = samples[i].state.e;
    if (e0 < 0.0 && e1 >= 0.0) {
      // Linear interpolation of the crossing time.
      const double w = -e0 / (e1 - e0);
      crossings.push_back(samples[i - 1].t + w * (samples[i].t - samples[i - 1].t));
    }
  }
  if (crossings.size() < 2) return std::nullopt;
  const double mean_period = (crossings.back() - crossings.front()) /
                             static_cast<double>(crossings.size() - 1);
  return 2.0 * std::numbers::pi / mean_period;
}

}  // namespace impspace
