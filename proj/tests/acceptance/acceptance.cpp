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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "impedance/errors.hpp"
#include "impedance/fitting.hpp"
#include "impedance/geometry.hpp"
#include "impedance/ingest.hpp"
#include "impedance/metrics.hpp"
#include "impedance/model.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace impspace;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Per-case engines keep parallel sweeps reproducible.
oracle::Rng case_rng(std::uint64_t criterion, std::uint64_t index) {
  return oracle::Rng(criterion * 1000003ULL + index);
}

ImpedanceParams random_params(oracle::Rng& rng, bool massless = false) {
  return {massless ? 0.0 : rng.uniform(0, 10), rng.uniform(0, 500), rng.uniform(0, 5000)};
}

SinusoidInput random_input(oracle::Rng& rng) {
  return {rng.uniform(1e-3, 1), rng.uniform(0.1, 50)};
}

template <class F>
double parallel_max(int n, F&& f) {
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(dynamic, 8)
  for (int i = 0; i < n; ++i) worst = std::max(worst, f(i));
  return worst;
}

Outcome master_consistency() {
  const auto start = std::chrono::steady_clock::now();
  const double worst = parallel_max(1000, [](int i) {
    auto rng = case_rng(1, i);
    const auto p = random_params(rng);
    const auto in = random_input(rng);
    const auto el = transform_chain(p, in);
    double err = 0.0;
    for (double theta : theta_grid(720)) {
      const auto z = eval_parametric(el, theta).vec();
      const auto m = eval_state(p, in, theta / in.omega).vec();
      err = std::max(err, (z - m).norm());
    }
    return err / (in.amplitude * std::max(1.0, p.stiffness));
  });
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst < 1e-9 && secs < 10.0,
          fmt::format("max scaled error {:.3e} (< 1e-9), {:.2f} s (< 10 s)", worst, secs)};
}

Outcome binormal_and_angles() {
  struct Worst {
    double tan_rho = 0, tan_phi = 0, rho = 0, phi = 0, rotation = 0;
  };
  std::vector<Worst> per(1000);
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < 1000; ++i) {
    auto rng = case_rng(1, i);  // same sweep as criterion 1
    const auto p = random_params(rng);
    const auto in = random_input(rng);
    const auto b = binormal(p, in);
    const auto r = rotation_angles(p, in);
    const double want_tan_phi =
        (p.mass * in.omega * in.omega - p.stiffness) / std::sqrt(p.damping * p.damping + 1);
    Worst& w = per[i];
    // Tangents as ratios of binormal components; the angles themselves
    // against atan of the closed forms.
    w.tan_rho = oracle::relative_error(-b.b2 / b.b3, p.damping);
    if (p.damping == 0.0) w.tan_rho = std::abs(-b.b2 / b.b3);
    w.tan_phi = oracle::relative_error(-b.b1 / std::hypot(b.b2, b.b3), want_tan_phi);
    w.rho = std::abs(r.rho - std::atan(p.damping));
    w.phi = std::abs(r.phi - std::atan(want_tan_phi));
    const Eigen::Vector3d rotated =
        rotation_about_e(r.rho) * rotation_about_edot(r.phi) * Eigen::Vector3d(0, 0, -1);
    w.rotation = (rotated - b.vec()).norm();
  }
  Worst w;
  for (const auto& x : per) {
    w.tan_rho = std::max(w.tan_rho, x.tan_rho);
    w.tan_phi = std::max(w.tan_phi, x.tan_phi);
    w.rho = std::max(w.rho, x.rho);
    w.phi = std::max(w.phi, x.phi);
    w.rotation = std::max(w.rotation, x.rotation);
  }
  const bool ok = w.tan_rho < 1e-12 && w.tan_phi < 1e-12 && w.rho < 1e-12 && w.phi < 1e-12 &&
                  w.rotation < 1e-12;
  return {ok, fmt::format("tan rho rel {:.2e}, tan phi rel {:.2e}, rho {:.2e}, phi {:.2e}, "
                          "rotated axis {:.2e} (all < 1e-12)",
                          w.tan_rho, w.tan_phi, w.rho, w.phi, w.rotation)};
}

Outcome degenerate_projections() {
  double line_k = 0, line_d = 0, slope_k = 0, slope_d = 0;
  bool flagged = true;
  for (int i = 0; i < 200; ++i) {
    auto rng = case_rng(3, i);
    const double k = rng.uniform(1, 5000), d = rng.uniform(1, 500);
    const auto in = random_input(rng);
    for (const auto& q : project(transform_chain({0, 0, k}, in), ProjectionPlane::kStiffness)) {
      line_k = std::max(line_k, std::abs(q.y() - k * q.x()) / (in.amplitude * k));
    }
    for (const auto& q : project(transform_chain({0, d, 0}, in), ProjectionPlane::kDamping)) {
      line_d = std::max(line_d, std::abs(q.y() - d * q.x()) / (in.amplitude * d));
    }
    const auto ak = projected_angles({0, 0, k}, in);
    const auto ad = projected_angles({0, d, 0}, in);
    flagged = flagged && ak.phi_hat.degenerate && ad.rho_hat.degenerate;
    slope_k = std::max(slope_k, oracle::relative_error(ak.phi_hat.slope, k));
    slope_d = std::max(slope_d, oracle::relative_error(ad.rho_hat.slope, d));
  }
  // The captioned case itself.
  const auto cap_k = projected_angles({0, 0, 1000}, {1, 1}).phi_hat.slope;
  const auto cap_d = projected_angles({0, 200, 0}, {1, 1}).rho_hat.slope;
  slope_k = std::max(slope_k, oracle::relative_error(cap_k, 1000));
  slope_d = std::max(slope_d, oracle::relative_error(cap_d, 200));
  const bool ok = line_k < 1e-10 && line_d < 1e-10 && slope_k < 1e-8 && slope_d < 1e-8 && flagged;
  return {ok, fmt::format("line residual {:.2e}/{:.2e} (< 1e-10 a k), slope rel {:.2e}/{:.2e} "
                          "(< 1e-8), tan phi_hat {:.10g}, tan rho_hat {:.10g}",
                          line_k, line_d, slope_k, slope_d, cap_k, cap_d)};
}

Outcome projected_deviation() {
  const auto a = projected_angles({0, 200, 1000}, {1, 1});
  const double dk = std::abs(a.phi_hat.slope - 1000) / 1000;
  const double dd = std::abs(a.rho_hat.slope - 200) / 200;
  return {dk > 0.01 && dd > 0.01 && !a.phi_hat.degenerate && !a.rho_hat.degenerate,
          fmt::format("tan phi_hat {:.6g} (differs from k by {:.1f}%), tan rho_hat {:.6g} "
                      "(differs from d by {:.1f}%)",
                      a.phi_hat.slope, 100 * dk, a.rho_hat.slope, 100 * dd)};
}

Outcome frequency_influence() {
  bool identical = true;
  double scale = 0;
  for (int i = 0; i < 1000; ++i) {
    auto rng = case_rng(5, i);
    const auto p = random_params(rng, true);
    const auto in = random_input(rng);
    const auto r1 = transform_chain(p, in).r;
    const auto r2 = transform_chain(p, {in.amplitude, 2 * in.omega}).r;
    identical = identical && r1(0, 0) == r2(0, 0) && r1(0, 1) == r2(0, 1) && r1(1, 0) == r2(1, 0);
    scale = std::max(scale, oracle::relative_error(r2(1, 1), 2 * r1(1, 1)));
    const auto r3 = transform_chain(p, {in.amplitude, 3.7 * in.omega}).r;
    scale = std::max(scale, oracle::relative_error(r3(1, 1) / r1(1, 1), 3.7));
  }
  return {identical && scale < 1e-14,
          fmt::format("other entries bit-identical: {}, R22 linearity rel error {:.2e} (< 1e-14)",
                      identical ? "yes" : "no", scale)};
}

Outcome ellipse_fit_exactness() {
  const int n = 10000;
  std::vector<double> param_err(n, 0.0);
  std::vector<int> bad_conic(n, 0), failed(n, 0), noisy_ok(n, 0);
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < n; ++i) {
    auto rng = case_rng(6, i);
    Ellipse2D e;
    e.center = {rng.uniform(-10, 10), rng.uniform(-10, 10)};
    e.semi_major = std::exp(rng.uniform(std::log(1e-3), std::log(1e3)));
    e.semi_minor = e.semi_major * rng.uniform(0.05, 0.95);
    e.tilt = rng.uniform(-kPi / 2, kPi / 2);
    std::vector<Eigen::Vector2d> pts;
    const double c = std::cos(e.tilt), s = std::sin(e.tilt);
    for (int j = 0; j < 360; ++j) {
      const double u = 2 * kPi * j / 360;
      const double x = e.semi_major * std::cos(u), y = e.semi_minor * std::sin(u);
      pts.emplace_back(e.center.x() + c * x - s * y, e.center.y() + s * x + c * y);
    }
    try {
      if (!(fit_ellipse_direct(pts).discriminant() < 0)) bad_conic[i] = 1;
      const auto g = fit_ellipse_geometric(pts);
      param_err[i] = std::max(
          {(g.center - e.center).norm() / e.semi_major,
           oracle::relative_error(g.semi_major, e.semi_major),
           oracle::relative_error(g.semi_minor, e.semi_minor),
           oracle::axis_angle_difference(g.tilt, e.tilt)});
    } catch (const Error&) {
      failed[i] = 1;
    }
    // A noisy partial arc of the same ellipse; only the conic type is checked.
    pts.resize(20 + static_cast<int>(rng.uniform(0, 100)));
    for (auto& p : pts) {
      p += Eigen::Vector2d(rng.gauss(0.05 * e.semi_major), rng.gauss(0.05 * e.semi_major));
    }
    try {
      const auto conic = fit_ellipse_direct(pts);
      noisy_ok[i] = 1;
      if (!(conic.discriminant() < 0)) bad_conic[i] = 1;
    } catch (const Error&) {
    }
  }
  const double worst = *std::max_element(param_err.begin(), param_err.end());
  int bad = 0, fail = 0, noisy = 0;
  for (int i = 0; i < n; ++i) {
    bad += bad_conic[i];
    fail += failed[i];
    noisy += noisy_ok[i];
  }
  return {worst < 1e-8 && bad == 0 && fail == 0,
          fmt::format("max parameter error {:.2e} (< 1e-8), exact fits failed {}, "
                      "non-ellipse results {} over {} exact + {} noisy successful fits",
                      worst, fail, bad, n, noisy)};
}

Trajectory synth(const ImpedanceParams& p, const SinusoidInput& in) {
  return sample_trajectory(p, in, 0.0, 2 * in.period(), 500);
}

Outcome round_trip() {
  const auto start = std::chrono::steady_clock::now();
  const double worst = parallel_max(500, [](int i) {
    auto rng = case_rng(7, i);
    const auto p = random_params(rng, true);
    const auto in = random_input(rng);
    try {
      const auto rep = fit_trajectory(synth(p, in), in.omega, 0.0);
      return std::max(
          std::abs(*rep.recovered.recovered_k - p.stiffness) / std::max(p.stiffness, 1.0),
          std::abs(rep.recovered.recovered_d - p.damping) / std::max(p.damping, 1.0));
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  });

  const ImpedanceParams p{0, 200, 1000};
  const SinusoidInput in{1, 1};
  const auto clean = synth(p, in);
  const double amp[3] = {in.amplitude, in.amplitude * in.omega,
                         in.amplitude * std::hypot(p.stiffness, p.damping * in.omega)};
  std::vector<double> errs(100);
#pragma omp parallel for schedule(dynamic, 4)
  for (int seed = 0; seed < 100; ++seed) {
    auto rng = case_rng(70, seed);
    std::vector<Sample> noisy(clean.begin(), clean.end());
    for (auto& s : noisy) {
      s.state.e += rng.gauss(0.01 * amp[0]);
      s.state.e_dot += rng.gauss(0.01 * amp[1]);
      s.state.f_int += rng.gauss(0.01 * amp[2]);
    }
    try {
      const auto rep = fit_trajectory(Trajectory(noisy), in.omega, 0.0);
      errs[seed] = std::max(oracle::relative_error(*rep.recovered.recovered_k, p.stiffness),
                            oracle::relative_error(rep.recovered.recovered_d, p.damping));
    } catch (const Error&) {
      errs[seed] = INFINITY;
    }
  }
  std::nth_element(errs.begin(), errs.begin() + 50, errs.end());
  const double upper = errs[50];
  const double lower = *std::max_element(errs.begin(), errs.begin() + 50);
  const double median = 0.5 * (lower + upper);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst < 1e-6 && median < 0.05 && secs < 60.0,
          fmt::format("noiseless max rel error {:.2e} (< 1e-6), 1% noise median {:.2f}% "
                      "(< 5%), {:.2f} s (< 60 s)",
                      worst, 100 * median, secs)};
}

Trajectory full_period(const ImpedanceParams& p, const SinusoidInput& in, int n) {
  std::vector<Sample> s;
  for (int i = 0; i < n; ++i) {
    const double t = in.period() * i / n;
    s.push_back({t, eval_state(p, in, t)});
  }
  return Trajectory(s);
}

Outcome metrics_identity() {
  const double worst = parallel_max(1000, [](int i) {
    auto rng = case_rng(8, i);
    const auto p = random_params(rng);
    const auto in = random_input(rng);
    const auto r = evaluate_metrics(p, in, binormal(p, in), full_period(p, in, 360));
    return std::max({r.force_fidelity_rms, r.force_fidelity_max, r.orientation_error,
                     std::abs(r.stiffness_error), std::abs(r.damping_error)});
  });
  double closed = 0;
  for (double a : {1.0, 0.5, 0.01}) {
    for (double w : {1.0, 3.0}) {
      const SinusoidInput in{a, w};
      const auto ff = force_fidelity(transform_chain({0, 0, 1000}, in),
                                     full_period({0, 0, 1100}, in, 1000));
      closed = std::max(closed, std::abs(ff.rms - 100 * a / std::sqrt(2.0)));
    }
  }
  return {worst < 1e-10 && closed < 1e-9,
          fmt::format("self-comparison max {:.2e} (< 1e-10), closed-form RMS error {:.2e} "
                      "(< 1e-9)",
                      worst, closed)};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome figure_regeneration() {
  const fs::path base = fs::path(IMPSPACE_TEST_TMPDIR) / "figures";
  fs::remove_all(base);
  std::vector<fs::path> runs{base / "run1", base / "run2"};
  for (const auto& dir : runs) {
    fs::create_directories(dir);
    const std::string cmd = fmt::format("sh '{}' '{}' '{}' > '{}' 2>&1", IMPSPACE_FIGURE_SCRIPT,
                                        IMPSPACE_CLI, dir.string(), (base / "log.txt").string());
    if (std::system(cmd.c_str()) != 0) {
      return {false, "figure script failed: " + read_file(base / "log.txt")};
    }
  }
  const std::vector<std::string> expected{
      "stiffness_plane_basic.svg",         "damping_plane_basic.svg",
      "space_damping_only.svg",            "space_zero_impedance.svg",
      "space_stiffness_only.svg",          "space_stiffness_damping.svg",
      "damping_plane_stiffness_sweep.svg", "stiffness_plane_damping_sweep.svg",
      "stiffness_plane_frequency_sweep.svg"};
  const fs::path golden = IMPSPACE_GOLDEN_DIR;
  int mismatches = 0, missing = 0;
  std::string notes;
  for (const auto& name : expected) {
    if (!fs::exists(runs[0] / name) || !fs::exists(golden / name)) {
      ++missing;
      notes += " missing:" + name;
      continue;
    }
    const auto first = read_file(runs[0] / name);
    if (first != read_file(runs[1] / name) || first != read_file(golden / name)) {
      ++mismatches;
      notes += " differs:" + name;
    }
  }
  return {mismatches == 0 && missing == 0,
          fmt::format("{} figures, {} missing, {} not byte-identical to golden{}",
                      expected.size(), missing, mismatches, notes)};
}

double interior_error(double dt, DiffMethod method) {
  std::vector<double> t, e;
  const int n = static_cast<int>(std::floor(2 * kPi / dt));
  for (int i = 0; i <= n; ++i) {
    t.push_back(i * dt);
    e.push_back(std::cos(i * dt));
  }
  const auto d = differentiate(t, e, method);
  double worst = 0;
  // Interior: away from the one-sided end stencils and the smoothing window.
  for (std::size_t i = kDefaultSmoothingWindow; i + kDefaultSmoothingWindow < t.size(); ++i) {
    worst = std::max(worst, std::abs(d[i] + std::sin(t[i])));
  }
  return worst;
}

Outcome ingest_convergence() {
  const double c1 = interior_error(1e-3, DiffMethod::kCentral);
  const double c2 = interior_error(5e-4, DiffMethod::kCentral);
  const double s1 = interior_error(1e-3, DiffMethod::kSmoothed);
  const double s2 = interior_error(5e-4, DiffMethod::kSmoothed);
  const bool ok = c1 / c2 >= 3.5 && s1 / s2 >= 3.5 && c1 < 1e-6;
  return {ok, fmt::format("central {:.3e} -> {:.3e} (x{:.2f}), smoothed {:.3e} -> {:.3e} "
                          "(x{:.2f}), required x3.5",
                          c1, c2, c1 / c2, s1, s2, s1 / s2)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"master consistency", master_consistency},
      {"binormal and angles", binormal_and_angles},
      {"degenerate projections", degenerate_projections},
      {"projected-angle deviation", projected_deviation},
      {"frequency influence", frequency_influence},
      {"direct ellipse fit exactness", ellipse_fit_exactness},
      {"round-trip identification", round_trip},
      {"metrics identity and closed form", metrics_identity},
      {"figure regeneration", figure_regeneration},
      {"ingest convergence", ingest_convergence},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
