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

// Serial reference versus OpenMP kernels.

#include <vector>

#include <benchmark/benchmark.h>

#include "impedance/geometry.hpp"
#include "impedance/kernels.hpp"

namespace {

using namespace impspace;

const Ellipse3D& ellipse() {
  static const Ellipse3D e = transform_chain({0.5, 200.0, 1000.0}, {0.01, 6.0});
  return e;
}

template <auto Fn>
void bm_synthesize(benchmark::State& state) {
  const auto thetas = theta_grid(static_cast<std::size_t>(state.range(0)));
  std::vector<ImpedanceState> out(thetas.size());
  for (auto _ : state) {
    Fn(ellipse(), thetas, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void bm_sample_model(benchmark::State& state) {
  std::vector<double> times(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = 1e-3 * static_cast<double>(i);
  std::vector<ImpedanceState> out(times.size());
  for (auto _ : state) {
    Fn({0.5, 200.0, 1000.0}, {0.01, 6.0}, times, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void bm_moments(benchmark::State& state) {
  std::vector<ImpedanceState> pts(static_cast<std::size_t>(state.range(0)));
  kernels::synthesize(ellipse(), theta_grid(pts.size()), pts);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(pts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(bm_synthesize<kernels::serial::synthesize>)->Name("synthesize/serial")->Range(1 << 10, 1 << 20);
BENCHMARK(bm_synthesize<kernels::synthesize>)->Name("synthesize/parallel")->Range(1 << 10, 1 << 20);
BENCHMARK(bm_sample_model<kernels::serial::sample_model>)->Name("sample_model/serial")->Range(1 << 10, 1 << 20);
BENCHMARK(bm_sample_model<kernels::sample_model>)->Name("sample_model/parallel")->Range(1 << 10, 1 << 20);
BENCHMARK(bm_moments<kernels::serial::moments>)->Name("moments/serial")->Range(1 << 10, 1 << 20);
BENCHMARK(bm_moments<kernels::moments>)->Name("moments/parallel")->Range(1 << 10, 1 << 20);

}  // namespace

BENCHMARK_MAIN();
