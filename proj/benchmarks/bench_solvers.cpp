#include <benchmark/benchmark.h>

#include "annulus/analysis.hpp"
#include "annulus/fem.hpp"
#include "annulus/mesh.hpp"
#include "annulus/radial.hpp"
#include "annulus/webfunc.hpp"

using namespace annulus;

namespace {

AnnularDomain eccentric() {
  return {BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0.5, 0}, 1}), Vec2{0.5, 0}};
}

void BM_RadialShooting(benchmark::State& state) {
  const ShellSpec shell{static_cast<int>(state.range(0)), 1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(solve_shell(shell, 1.0).lambda);
}
BENCHMARK(BM_RadialShooting)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_RadialFd(benchmark::State& state) {
  const ShellSpec shell{2, 1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(solve_shell_fd(shell, 1.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_RadialFd)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_Assembly(benchmark::State& state) {
  const int nr = static_cast<int>(state.range(0));
  const Mesh mesh = mesh_annular(eccentric(), nr, 4 * nr);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(mesh, 1.0).free_count());
  state.counters["nodes"] = static_cast<double>(mesh.node_count());
}
BENCHMARK(BM_Assembly)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_EigenSolve(benchmark::State& state) {
  const int nr = static_cast<int>(state.range(0));
  const Mesh mesh = mesh_annular(eccentric(), nr, 4 * nr);
  const FemSystem sys = assemble(mesh, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(smallest_eigenpair(sys.operator_a, sys.mass).lambda);
}
BENCHMARK(BM_EigenSolve)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_WebQuadrature(benchmark::State& state) {
  const WebFunction web(eccentric(), solve_shell(ShellSpec{2, 1.0, 2.0}, 1.0));
  const int level = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rayleigh_quotient(web, 1.0, level, true).value);
}
BENCHMARK(BM_WebQuadrature)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_FindSplit(benchmark::State& state) {
  const auto member = ellipse_rectangle_member(2, 1, 1.5, 0.1);
  const ClassSData cs = class_s_data(member.domain);
  const auto radial = solve_shell(ShellSpec{2, cs.r_inner, cs.r_outer}, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(find_split(member.domain, radial));
}
BENCHMARK(BM_FindSplit)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
