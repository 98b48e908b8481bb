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

#include "impedance/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "impedance/errors.hpp"
#include "impedance/fitting.hpp"
#include "impedance/geometry.hpp"
#include "impedance/ingest.hpp"
#include "impedance/metrics.hpp"
#include "impedance/model.hpp"
#include "impedance/plot.hpp"
#include "impedance/report.hpp"

namespace impspace::cli {

namespace {

// Raised for flag combinations CLI11 cannot validate on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArgument:
    case ErrorKind::kIo:
      return kExitUsage;
    case ErrorKind::kDegenerateData:
    case ErrorKind::kNoEllipse:
    case ErrorKind::kDomain:
    case ErrorKind::kParse:
    case ErrorKind::kSegmentation:
      return kExitData;
    case ErrorKind::kIllConditioned:
    case ErrorKind::kNumerical:
      return kExitNumerical;
  }
  return kExitNumerical;
}

struct ParamFlags {
  double k = 0.0;
  double d = 0.0;
  double m = 0.0;
  double a = 1.0;
  double w = 1.0;

  void add_to(CLI::App& app) {
    app.add_option("--k", k, "Desired stiffness [N/m]")->capture_default_str();
    app.add_option("--d", d, "Desired damping [N*s/m]")->capture_default_str();
    app.add_option("--m", m, "Desired mass [kg]")->capture_default_str();
    app.add_option("--a", a, "Deviation amplitude [m]")->capture_default_str();
    app.add_option("--w", w, "Angular frequency [rad/s]")->capture_default_str();
  }

  ImpedanceParams params() const {
    ImpedanceParams p{m, d, k};
    p.validate();
    return p;
  }
  SinusoidInput input() const {
    SinusoidInput in{a, w};
    in.validate();
    return in;
  }
};

struct ColumnFlags {
  std::string time = "t";
  std::string pos;
  std::string eq;
  std::string dev = "e";
  std::string vel = "e_dot";
  std::string force = "f_int";
  std::string unit_pos = "m";
  std::string unit_force = "N";
  bool no_vel = false;
  std::string diff = "smoothed";
  std::size_t window = kDefaultSmoothingWindow;

  void add_to(CLI::App& app) {
    app.add_option("--col-time", time, "Time column (name or index)")
        ->capture_default_str();
    app.add_option("--col-pos", pos, "Position column");
    app.add_option("--col-eq", eq, "Equilibrium position column");
    app.add_option("--col-dev", dev, "Deviation column (e = x_eq - x)")
        ->capture_default_str();
    app.add_option("--col-vel", vel, "Velocity deviation column, used if present")
        ->capture_default_str();
    app.add_option("--col-force", force, "Interaction force column")
        ->capture_default_str();
    app.add_option("--unit-pos", unit_pos, "Position unit")
        ->check(CLI::IsMember({"m", "mm"}))
        ->capture_default_str();
    app.add_option("--unit-force", unit_force, "Force unit")
        ->check(CLI::IsMember({"N"}))
        ->capture_default_str();
    app.add_flag("--no-vel", no_vel, "Ignore any velocity column and differentiate");
    app.add_option("--diff", diff, "Velocity estimator when differentiating")
        ->check(CLI::IsMember({"central", "smoothed"}))
        ->capture_default_str();
    app.add_option("--window", window, "Smoothing window [samples, odd]")
        ->capture_default_str();
  }

  ColumnMap columns() const {
    ColumnMap map;
    map.time = time;
    map.force = force;
    map.dev = dev.empty() ? std::nullopt : std::optional(dev);
    // Explicit position columns take precedence over the default deviation.
    if (!pos.empty() || !eq.empty()) {
      map.pos = pos;
      map.eq = eq;
      if (dev == "e") map.dev = std::nullopt;
    }
    map.vel = (no_vel || vel.empty()) ? std::nullopt : std::optional(vel);
    return map;
  }

  Units units() const {
    return {parse_position_unit(unit_pos), parse_force_unit(unit_force)};
  }

  RawLog load(const std::string& path) const {
    return load_csv(path, columns(), units());
  }

  Trajectory trajectory(const RawLog& log) const {
    return to_trajectory(log, parse_diff_method(diff), window);
  }
};

std::vector<double> parse_list(const std::string& s, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": bad number '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

void emit(const std::string& content, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,e,e_dot,f_int\n";
  for (const auto& s : traj) {
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", s.t, s.state.e,
                       s.state.e_dot, s.state.f_int);
  }
  return out;
}

void add_matrix(KeyValueReport& r, const std::string& name,
                const Eigen::Ref<const Eigen::MatrixXd>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.add(fmt::format("{}_{}{}", name, i + 1, j + 1), m(i, j));
    }
  }
}

KeyValueReport ellipse_report(const ImpedanceParams& p, const SinusoidInput& in) {
  const auto ellipse = transform_chain(p, in);
  const auto b = binormal(p, in);
  const auto angles = rotation_angles(p, in);
  KeyValueReport r;
  r.add("k", p.stiffness);
  r.add("d", p.damping);
  r.add("m", p.mass);
  r.add("a", in.amplitude);
  r.add("w", in.omega);
  r.add("period", in.period());
  r.add("lumped_km", p.lumped_stiffness(in.omega));
  r.add("b1", b.b1);
  r.add("b2", b.b2);
  r.add("b3", b.b3);
  r.add("phi", angles.phi);
  r.add("rho", angles.rho);
  r.add("tan_phi", -b.b1 / std::hypot(b.b2, b.b3));
  r.add("tan_rho", -b.b2 / b.b3);
  add_matrix(r, "R", ellipse.r);
  add_matrix(r, "T_e", ellipse.t_e);
  add_matrix(r, "T_edot", ellipse.t_edot);
  add_matrix(r, "T_f", ellipse.t_f);
  return r;
}

KeyValueReport fit_report(const FitReport& f, const std::string& source) {
  KeyValueReport r;
  r.add("source", source);
  r.add("samples", static_cast<double>(f.samples));
  r.add("omega_used", f.recovered.omega_used);
  r.add("assumed_m", f.recovered.assumed_m ? *f.recovered.assumed_m : NAN);
  r.add("lumped_km", f.recovered.lumped_km);
  r.add("recovered_k", f.recovered.recovered_k ? *f.recovered.recovered_k : NAN);
  r.add("recovered_d", f.recovered.recovered_d);
  r.add("normal_e", f.plane.normal.x());
  r.add("normal_edot", f.plane.normal.y());
  r.add("normal_f", f.plane.normal.z());
  r.add("centroid_e", f.plane.centroid.x());
  r.add("centroid_edot", f.plane.centroid.y());
  r.add("centroid_f", f.plane.centroid.z());
  r.add("ellipse_center_u", f.ellipse2d_in_plane.center.x());
  r.add("ellipse_center_v", f.ellipse2d_in_plane.center.y());
  r.add("ellipse_semi_major", f.ellipse2d_in_plane.semi_major);
  r.add("ellipse_semi_minor", f.ellipse2d_in_plane.semi_minor);
  r.add("ellipse_tilt", f.ellipse2d_in_plane.tilt);
  r.add("plane_rms", f.residuals.plane_rms);
  r.add("conic_rms", f.residuals.conic_rms);
  return r;
}

void print_kv(std::ostream& out, const KeyValueReport& r) { out << r.str(); }

double report_number(const std::map<std::string, std::string>& kv,
                     const std::string& key, const std::string& path) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    throw Error(ErrorKind::kParse, "report",
                "'" + path + "' has no key '" + key + "'");
  }
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw Error(ErrorKind::kParse, "report",
                "'" + path + "': bad number for '" + key + "'");
  }
}

// ---------------------------------------------------------------- synth

struct SynthCmd {
  ParamFlags p;
  double t0 = 0.0;
  double periods = 2.0;
  std::size_t n = 500;
  double noise = 0.0;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string report_path;

  void setup(CLI::App& app) {
    p.add_to(app);
    app.add_option("--t0", t0, "Start time [s]")->capture_default_str();
    app.add_option("--periods", periods, "Duration in periods of 2 pi / w")
        ->capture_default_str();
    app.add_option("--n", n, "Number of samples")->capture_default_str();
    app.add_option("--noise", noise,
                   "Gaussian noise, as a fraction of each channel amplitude")
        ->capture_default_str();
    app.add_option("--seed", seed, "Noise seed")->capture_default_str();
    app.add_option("--out", out_path, "Trajectory CSV output");
    app.add_option("--report", report_path, "Ellipse report output (key = value)");
  }

  int run(std::ostream& out) const {
    const auto params = p.params();
    const auto input = p.input();
    if (!(periods > 0.0) || !std::isfinite(periods)) {
      throw UsageError("--periods must be positive");
    }
    if (noise < 0.0 || !std::isfinite(noise)) {
      throw UsageError("--noise must be non-negative");
    }
    auto traj = sample_trajectory(params, input, t0, t0 + periods * input.period(), n);
    if (noise > 0.0) {
      const double lumped = params.lumped_stiffness(input.omega);
      const std::array<double, 3> amp{
          input.amplitude, input.amplitude * input.omega,
          input.amplitude * std::hypot(lumped, params.damping * input.omega)};
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> gauss(0.0, 1.0);
      std::vector<Sample> noisy(traj.begin(), traj.end());
      for (auto& s : noisy) {
        s.state.e += noise * amp[0] * gauss(rng);
        s.state.e_dot += noise * amp[1] * gauss(rng);
        s.state.f_int += noise * amp[2] * gauss(rng);
      }
      traj = Trajectory(std::move(noisy));
    }
    auto report = ellipse_report(params, input);
    report.add("samples", static_cast<double>(n));
    report.add("noise", noise);
    report.add("seed", static_cast<double>(seed));

    if (!out_path.empty()) write_file_atomic(out_path, trajectory_csv(traj));
    if (!report_path.empty()) write_file_atomic(report_path, report.str());
    if (out_path.empty() && report_path.empty()) {
      out << trajectory_csv(traj);
    } else {
      print_kv(out, report);
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------- fit

struct FitCmd {
  std::string input_path;
  double w = 0.0;
  double assumed_m = 0.0;
  ColumnFlags cols;
  std::string out_path;
  double threshold = 1e-9;

  void setup(CLI::App& app) {
    app.add_option("input", input_path, "Trajectory CSV")->required();
    app.add_option("--w", w, "Excitation angular frequency [rad/s]")->required();
    app.add_option("--assumed-m", assumed_m, "Assumed rendered mass [kg]")
        ->capture_default_str();
    app.add_option("--threshold", threshold,
                   "Force-axis conditioning threshold")
        ->capture_default_str();
    app.add_option("--out", out_path, "Report output (key = value)");
    cols.add_to(app);
  }

  int run(std::ostream& out) const {
    const auto log = cols.load(input_path);
    const auto traj = cols.trajectory(log);
    FitOptions options;
    options.conditioning_threshold = threshold;
    const auto fit = fit_trajectory(traj, w, assumed_m, options);
    const auto report = fit_report(fit, input_path);
    if (!out_path.empty()) write_file_atomic(out_path, report.str());

    out << fmt::format(
        "# fit of {} ({} samples, velocity {})\n"
        "# rendered stiffness {:.6g} N/m, damping {:.6g} N*s/m "
        "(k - m w^2 = {:.6g} N/m, assumed m = {:.6g} kg)\n",
        input_path, fit.samples, log.e_dot && !cols.no_vel ? "logged" : cols.diff,
        fit.recovered.recovered_k.value_or(NAN), fit.recovered.recovered_d,
        fit.recovered.lumped_km, assumed_m);
    print_kv(out, report);
    return kExitOk;
  }
};

// ---------------------------------------------------------------- recover

struct RecoverCmd {
  std::string normal;
  double w = 0.0;
  std::optional<double> assumed_m;
  double threshold = 1e-9;

  void setup(CLI::App& app) {
    app.add_option("--normal", normal, "Plane normal 'b1,b2,b3'")->required();
    app.add_option("--w", w, "Excitation angular frequency [rad/s]")->required();
    app.add_option("--assumed-m", assumed_m, "Assumed rendered mass [kg]");
    app.add_option("--threshold", threshold, "Force-axis conditioning threshold")
        ->capture_default_str();
  }

  int run(std::ostream& out) const {
    const auto v = parse_list(normal, "--normal");
    if (v.size() != 3) throw UsageError("--normal needs three components");
    FitOptions options;
    options.conditioning_threshold = threshold;
    const auto rec =
        recover_parameters(Eigen::Vector3d(v[0], v[1], v[2]), w, assumed_m, options);
    KeyValueReport r;
    r.add("omega_used", rec.omega_used);
    r.add("assumed_m", rec.assumed_m ? *rec.assumed_m : NAN);
    r.add("lumped_km", rec.lumped_km);
    r.add("recovered_k", rec.recovered_k ? *rec.recovered_k : NAN);
    r.add("recovered_d", rec.recovered_d);
    print_kv(out, r);
    return kExitOk;
  }
};

// ---------------------------------------------------------------- metrics

struct MetricsCmd {
  ParamFlags p;
  std::string measured_path;
  std::string report_path;
  ColumnFlags cols;
  double omega_tolerance = 0.05;

  void setup(CLI::App& app) {
    p.add_to(app);
    auto* measured =
        app.add_option("--measured", measured_path, "Measured trajectory CSV");
    auto* report = app.add_option("--fit-report", report_path,
                                  "Fit report written by `fit --out`");
    measured->excludes(report);
    app.add_option("--omega-tolerance", omega_tolerance,
                   "Allowed relative mismatch between --w and the data")
        ->capture_default_str();
    cols.add_to(app);
  }

  int run(std::ostream& out) const {
    if (measured_path.empty() && report_path.empty()) {
      throw UsageError("one of --measured or --fit-report is required");
    }
    const auto params = p.params();
    const auto input = p.input();

    MetricReport m;
    if (!measured_path.empty()) {
      const auto traj = cols.trajectory(cols.load(measured_path));
      if (const auto est = estimate_omega(traj)) {
        if (std::abs(*est - input.omega) > omega_tolerance * input.omega) {
          throw UsageError(fmt::format(
              "measured data oscillates at {:.6g} rad/s but --w is {:.6g}", *est,
              input.omega));
        }
      }
      m = evaluate_metrics(params, input, traj);
    } else {
      std::ifstream in(report_path);
      if (!in) {
        throw Error(ErrorKind::kIo, "metrics", "cannot open '" + report_path + "'");
      }
      const auto kv = KeyValueReport::parse(in);
      const double omega = report_number(kv, "omega_used", report_path);
      if (std::abs(omega - input.omega) > omega_tolerance * input.omega) {
        throw UsageError(fmt::format(
            "fit report used w = {:.6g} rad/s but --w is {:.6g}", omega,
            input.omega));
      }
      const Eigen::Vector3d n(report_number(kv, "normal_e", report_path),
                              report_number(kv, "normal_edot", report_path),
                              report_number(kv, "normal_f", report_path));
      // Without samples, compare against the ellipse the fitted plane renders
      // under the desired input.
      const auto rec = recover_parameters(n, input.omega, 0.0);
      // A negative lumped term is carried as mass: k - m w^2 < 0.
      ImpedanceParams rendered{
          rec.lumped_km < 0.0 ? -rec.lumped_km / (input.omega * input.omega) : 0.0,
          std::max(rec.recovered_d, 0.0), std::max(rec.lumped_km, 0.0)};
      const auto period = input.period();
      const auto traj = sample_trajectory(rendered, input, 0.0,
                                          period * (1.0 - 1.0 / 720.0), 720);
      const Eigen::Vector3d unit = n.normalized();
      m = evaluate_metrics(params, input, Binormal{unit.x(), unit.y(), unit.z()},
                           traj);
    }

    KeyValueReport r;
    r.add("force_fidelity_rms", m.force_fidelity_rms);
    r.add("force_fidelity_max", m.force_fidelity_max);
    r.add("orientation_error", m.orientation_error);
    r.add("stiffness_error", m.stiffness_error);
    r.add("damping_error", m.damping_error);
    r.add("samples_used", static_cast<double>(m.samples_used));
    r.add("samples_skipped", static_cast<double>(m.samples_skipped));
    out << fmt::format(
        "# interaction force fidelity (RMS)  {:.6g} N\n"
        "# 3D orientation error             {:.6g} rad\n"
        "# stiffness error (d phi)          {:.6g} rad\n"
        "# damping error (d rho)            {:.6g} rad\n",
        m.force_fidelity_rms, m.orientation_error, m.stiffness_error,
        m.damping_error);
    print_kv(out, r);
    return kExitOk;
  }
};

// ---------------------------------------------------------------- plot

struct PlotCmd {
  std::string kind = "stiffness";
  std::string k = "0";
  std::string d = "0";
  std::string m = "0";
  std::string w = "1";
  double a = 1.0;
  std::size_t grid = kDefaultThetaGrid;
  std::string measured_path;
  ColumnFlags cols;
  std::string out_path;
  std::string data_path;
  std::string title;
  double azimuth = -37.5;
  double elevation = 30.0;
  bool no_ghost = false;
  int width = 640;
  int height = 480;

  void setup(CLI::App& app) {
    app.add_option("--kind", kind, "Plot type")
        ->check(CLI::IsMember({"stiffness", "damping", "phase", "space"}))
        ->capture_default_str();
    app.add_option("--k", k, "Stiffness value(s), comma separated")
        ->capture_default_str();
    app.add_option("--d", d, "Damping value(s)")->capture_default_str();
    app.add_option("--m", m, "Mass value(s)")->capture_default_str();
    app.add_option("--w", w, "Frequency value(s) [rad/s]")->capture_default_str();
    app.add_option("--a", a, "Amplitude [m]")->capture_default_str();
    app.add_option("--grid", grid, "Points per period")->capture_default_str();
    app.add_option("--measured", measured_path, "Overlay a measured trajectory CSV");
    app.add_option("--out", out_path, "SVG output (stdout if omitted)");
    app.add_option("--data", data_path, "Also write the plotted series as CSV");
    app.add_option("--title", title, "Plot title");
    app.add_option("--azimuth", azimuth, "3D view azimuth [deg]")
        ->capture_default_str();
    app.add_option("--elevation", elevation, "3D view elevation [deg]")
        ->capture_default_str();
    app.add_flag("--no-ghost", no_ghost, "Hide plane projections in 3D view");
    app.add_option("--width", width, "Canvas width [px]")->capture_default_str();
    app.add_option("--height", height, "Canvas height [px]")->capture_default_str();
    cols.add_to(app);
  }

  int run(std::ostream& out) const {
    const auto ks = parse_list(k, "--k");
    const auto ds = parse_list(d, "--d");
    const auto ms = parse_list(m, "--m");
    const auto ws = parse_list(w, "--w");

    std::vector<PlotSeries> series;
    for (double wv : ws) {
      for (double mv : ms) {
        for (double dv : ds) {
          for (double kv : ks) {
            const ImpedanceParams params{mv, dv, kv};
            params.validate();
            const SinusoidInput input{a, wv};
            input.validate();
            std::string label = fmt::format("k={:g} d={:g}", kv, dv);
            if (ms.size() > 1 || mv != 0.0) label += fmt::format(" m={:g}", mv);
            if (ws.size() > 1 || wv != 1.0) label += fmt::format(" w={:g}", wv);
            series.push_back(make_series(transform_chain(params, input), label, grid));
          }
        }
      }
    }
    if (!measured_path.empty()) {
      series.push_back(
          make_series(cols.trajectory(cols.load(measured_path)), "measured"));
    }

    PlotStyle style;
    style.title = title;
    style.width = width;
    style.height = height;
    std::string svg;
    if (kind == "space") {
      svg = plot_impedance_space(series, View3D{azimuth, elevation, !no_ghost}, style);
    } else {
      const auto plane = kind == "stiffness" ? ProjectionPlane::kStiffness
                         : kind == "damping" ? ProjectionPlane::kDamping
                                             : ProjectionPlane::kPhase;
      svg = plot_projection(series, plane, style);
    }
    emit(svg, out_path, out);
    if (!data_path.empty()) export_plotdata(series, data_path);
    return kExitOk;
  }
};

// ---------------------------------------------------------------- ingest-check

struct IngestCheckCmd {
  std::string input_path;
  std::optional<double> w;
  ColumnFlags cols;

  void setup(CLI::App& app) {
    app.add_option("input", input_path, "Trajectory CSV")->required();
    app.add_option("--w", w, "Nominal angular frequency, enables segmentation");
    cols.add_to(app);
  }

  int run(std::ostream& out) const {
    const auto log = cols.load(input_path);
    const auto traj = cols.trajectory(log);
    double dt_min = INFINITY, dt_max = 0.0;
    for (std::size_t i = 1; i < log.size(); ++i) {
      dt_min = std::min(dt_min, log.t[i] - log.t[i - 1]);
      dt_max = std::max(dt_max, log.t[i] - log.t[i - 1]);
    }
    const auto [emin, emax] = std::minmax_element(log.e.begin(), log.e.end());
    const auto [fmin, fmax] = std::minmax_element(log.f_int.begin(), log.f_int.end());

    KeyValueReport r;
    r.add("rows", static_cast<double>(log.size()));
    r.add("t_start", log.t.front());
    r.add("t_end", log.t.back());
    r.add("dt_min", log.size() > 1 ? dt_min : NAN);
    r.add("dt_max", log.size() > 1 ? dt_max : NAN);
    r.add("e_min", *emin);
    r.add("e_max", *emax);
    r.add("f_min", *fmin);
    r.add("f_max", *fmax);
    r.add("velocity", log.e_dot && !cols.no_vel ? std::string("logged") : cols.diff);
    const auto est = estimate_omega(traj);
    r.add("omega_estimate", est ? *est : NAN);
    if (w) {
      const auto seg = segment_periods(traj, *w);
      r.add("segments", static_cast<double>(seg.segments.size()));
      r.add("segments_discarded", static_cast<double>(seg.discarded));
    }
    print_kv(out, r);
    return kExitOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Impedance-space synthesis, fitting and scoring", "impspace"};
  app.set_config("--config", "", "Config file with the same keys as the flags");
  app.require_subcommand(0, 1);

  SynthCmd synth;
  FitCmd fit;
  RecoverCmd recover;
  MetricsCmd metrics;
  PlotCmd plot;
  IngestCheckCmd ingest_check;

  auto* synth_app = app.add_subcommand("synth", "Sample the impedance ellipse");
  synth.setup(*synth_app);
  auto* fit_app = app.add_subcommand("fit", "Fit plane and ellipse to a trajectory");
  fit.setup(*fit_app);
  auto* recover_app =
      app.add_subcommand("recover", "Impedance parameters from a plane normal");
  recover.setup(*recover_app);
  auto* metrics_app =
      app.add_subcommand("metrics", "Score measured data against desired params");
  metrics.setup(*metrics_app);
  auto* plot_app = app.add_subcommand("plot", "Render SVG figures");
  plot.setup(*plot_app);
  auto* ingest_app =
      app.add_subcommand("ingest-check", "Inspect a CSV log before fitting");
  ingest_check.setup(*ingest_app);

  // A bare command, or a subcommand without arguments, prints its help.
  if (args.empty()) {
    out << app.help();
    return kExitOk;
  }
  if (args.size() == 1) {
    for (auto* sub : app.get_subcommands({})) {
      if (sub->get_name() == args[0]) {
        out << sub->help();
        return kExitOk;
      }
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "impspace: usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (synth_app->parsed()) return synth.run(out);
    if (fit_app->parsed()) return fit.run(out);
    if (recover_app->parsed()) return recover.run(out);
    if (metrics_app->parsed()) return metrics.run(out);
    if (plot_app->parsed()) return plot.run(out);
    if (ingest_app->parsed()) return ingest_check.run(out);
    out << app.help();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "impspace: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "impspace: " << e.what() << " [stage " << e.stage() << "]\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "impspace: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace impspace::cli
