#include <benchmark/benchmark.h>

#include "ufl/augment.hpp"
#include "ufl/clustering.hpp"
#include "ufl/game.hpp"
#include "ufl/generators.hpp"
#include "ufl/jms.hpp"
#include "ufl/lp.hpp"
#include "ufl/params.hpp"
#include "ufl/rounding.hpp"
#include "ufl/verification.hpp"

namespace {

ufl::Instance make_instance(int nf, int nc, std::uint64_t seed) {
  ufl::GenSpec spec;
  spec.seed = seed;
  spec.dim = 3;
  spec.n_facilities = nf;
  spec.n_clients = nc;
  spec.cost_lo = 0.05;
  spec.cost_hi = 0.3;
  spec.profile = ufl::GenProfile::uniform_box;
  return ufl::generate_random(spec);
}

const ufl::Instance& shared_instance() {
  static ufl::Instance inst = make_instance(10, 14, 17);
  return inst;
}

struct Pipeline {
  ufl::ParamSet params = ufl::ParamSet::defaults();
  ufl::LpResult lp;
  ufl::AugmentedSolution aug;
  ufl::ClusteringResult clustering;
};

const Pipeline& shared_pipeline() {
  static Pipeline p = [] {
    Pipeline q;
    q.lp = ufl::solve_relaxation(shared_instance(), q.params.lp_tol);
    q.aug = ufl::augment(q.lp.primal, q.lp.dec, q.params.gamma, shared_instance());
    std::vector<std::size_t> all(shared_instance().num_clients());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
    q.clustering = ufl::cluster_greedy(all, q.aug, q.params);
    return q;
  }();
  return p;
}

}  // namespace

static void BM_lp_solve(benchmark::State& state) {
  ufl::Instance inst = make_instance((int)state.range(0), (int)state.range(0) + 4, 11);
  for (auto _ : state) {
    ufl::LpResult lp = ufl::solve_relaxation(inst, 1e-9);
    benchmark::DoNotOptimize(lp.primal.objective);
  }
}
BENCHMARK(BM_lp_solve)->Arg(6)->Arg(10)->Arg(14);

static void BM_jms_solve(benchmark::State& state) {
  ufl::Instance inst = make_instance((int)state.range(0), (int)state.range(0) + 4, 13);
  for (auto _ : state) {
    ufl::RoundedSolution sol = ufl::jms_solve(inst);
    benchmark::DoNotOptimize(sol.total_cost);
  }
}
BENCHMARK(BM_jms_solve)->Arg(8)->Arg(16);

static void BM_greedy_add(benchmark::State& state) {
  ufl::Instance inst = make_instance(16, 20, 13);
  for (auto _ : state) {
    ufl::RoundedSolution sol = ufl::greedy_add_solve(inst);
    benchmark::DoNotOptimize(sol.total_cost);
  }
}
BENCHMARK(BM_greedy_add);

static void BM_augment(benchmark::State& state) {
  const Pipeline& p = shared_pipeline();
  for (auto _ : state) {
    ufl::AugmentedSolution aug =
        ufl::augment(p.lp.primal, p.lp.dec, p.params.gamma, shared_instance());
    benchmark::DoNotOptimize(aug.copies.size());
  }
}
BENCHMARK(BM_augment);

static void BM_cluster_greedy(benchmark::State& state) {
  const Pipeline& p = shared_pipeline();
  std::vector<std::size_t> all(shared_instance().num_clients());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  for (auto _ : state) {
    ufl::ClusteringResult res = ufl::cluster_greedy(all, p.aug, p.params);
    benchmark::DoNotOptimize(res.clusters.size());
  }
}
BENCHMARK(BM_cluster_greedy);

static void BM_round_once(benchmark::State& state) {
  const Pipeline& p = shared_pipeline();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    ufl::RoundedSolution sol = ufl::round_once(p.aug, p.clustering, seed++);
    benchmark::DoNotOptimize(sol.total_cost);
  }
}
BENCHMARK(BM_round_once);

static void BM_brute_force_opt(benchmark::State& state) {
  ufl::Instance inst = make_instance((int)state.range(0), 14, 19);
  for (auto _ : state) {
    ufl::OracleResult res = ufl::brute_force_opt(inst);
    benchmark::DoNotOptimize(res.opt_cost);
  }
}
BENCHMARK(BM_brute_force_opt)->Arg(10)->Arg(14);

static void BM_grid_search_coarse(benchmark::State& state) {
  ufl::ParamSet params = ufl::ParamSet::defaults();
  for (auto _ : state) {
    ufl::GridSearchReport rep = ufl::appendix_grid_search(params, 1e-2);
    benchmark::DoNotOptimize(rep.min_robust_margin);
  }
}
BENCHMARK(BM_grid_search_coarse)->Unit(benchmark::kMillisecond);

static void BM_game_ratio(benchmark::State& state) {
  ufl::GammaDistribution dist = ufl::mu1();
  for (auto _ : state) {
    auto [ratio, q] = ufl::worst_case_ratio(dist, ufl::GameVariant::nu, 0.0, 1e-3);
    benchmark::DoNotOptimize(ratio);
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_game_ratio)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
