// Microbenchmarks for the hot paths: one solver step, a full short run, the
// planner chain, the catalog prox maps, and power iteration.
#include <benchmark/benchmark.h>

#include "saddle/oracle.hpp"
#include "saddle/planner.hpp"
#include "saddle/problem.hpp"
#include "saddle/prox.hpp"
#include "saddle/solver.hpp"

namespace {

using namespace saddle;

GeneratedInstance make_instance(Eigen::Index n) {
  GeneratorSpec spec;
  spec.n = n;
  spec.m = n;
  spec.seed = 7;
  return generate_instance(spec);
}

void BM_solver_step(benchmark::State& state) {
  const auto gen = make_instance(state.range(0));
  const PlanReport rep = plan_iterate_rate_K(gen.problem.mu(), gen.problem.nu(),
                                             gen.problem.coupling().norm_bound());
  const Schedule sched = Schedule::from_plan(rep.plan);
  IterateState s = IterateState::start(PrimalVector::Zero(state.range(0)),
                                       DualVector::Zero(state.range(0)));
  for (auto _ : state) {
    s = step(gen.problem, s, sched);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_solver_step)->Arg(20)->Arg(100)->Arg(400);

void BM_solver_run_200(benchmark::State& state) {
  const auto gen = make_instance(20);
  const PlanReport rep = plan_iterate_rate_K(gen.problem.mu(), gen.problem.nu(),
                                             gen.problem.coupling().norm_bound());
  StoppingRule stop;
  stop.max_iter = 200;
  stop.displacement_tol = 0;
  const PrimalVector x0 = PrimalVector::Constant(20, 1.0);
  const DualVector y0 = DualVector::Constant(20, 1.0);
  for (auto _ : state) {
    Trace trace = run(gen.problem, rep.plan, x0, y0, stop);
    benchmark::DoNotOptimize(trace.records.back().k);
  }
}
BENCHMARK(BM_solver_run_200);

void BM_planner_iterate_K(benchmark::State& state) {
  for (auto _ : state) {
    const PlanReport rep = plan_iterate_rate_K(1.0, 1.0, 1.0);
    benchmark::DoNotOptimize(rep.plan.tau);
  }
}
BENCHMARK(BM_planner_iterate_K);

void BM_prox_elastic_net(benchmark::State& state) {
  const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(state.range(0), -3.0, 3.0);
  for (auto _ : state) {
    Eigen::VectorXd u = prox_elastic_net(0.5, 1.0, 0.7, v);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_prox_elastic_net)->Arg(1000)->Arg(100000);

void BM_prox_quadratic(benchmark::State& state) {
  const auto n = state.range(0);
  const auto gen = make_instance(n);
  const Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 0.5);
  for (auto _ : state) {
    Eigen::VectorXd u = prox_quadratic(gen.quadratic.A, gen.quadratic.a, 0.7, v);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_prox_quadratic)->Arg(20)->Arg(100);

void BM_operator_norm(benchmark::State& state) {
  const auto gen = make_instance(state.range(0));
  const LinearCoupling coupling(gen.quadratic.K, 0.0);
  for (auto _ : state) {
    const OperatorNormEstimate est = estimate_operator_norm(coupling);
    benchmark::DoNotOptimize(est.value);
  }
}
BENCHMARK(BM_operator_norm)->Arg(20)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
