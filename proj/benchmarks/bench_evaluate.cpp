#include <benchmark/benchmark.h>

#include <filesystem>
#include <map>

#include "random_model.hpp"

using namespace gabac;

namespace {

const testing::GeneratedModel& scaled(int nodes) {
  static std::map<int, testing::GeneratedModel> cache;
  auto it = cache.find(nodes);
  if (it == cache.end()) {
    testing::Rng rng(42);
    it = cache.emplace(nodes, testing::scale_model(rng, nodes, nodes * 3, nodes / 10)).first;
  }
  return it->second;
}

void BM_EvaluateScaled(benchmark::State& state) {
  const testing::GeneratedModel& gen = scaled(static_cast<int>(state.range(0)));
  testing::Rng rng(7);
  auto queries = testing::random_queries(rng, gen, 128);
  for (const AccessQuery& q : testing::targeted_queries(rng, gen, 128)) queries.push_back(q);
  const auto alg = static_cast<CombiningAlgorithm>(state.range(1));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(gen.model, queries[i++ % queries.size()], alg));
  }
  state.SetLabel(std::string(to_string(alg)));
}
BENCHMARK(BM_EvaluateScaled)
    ->ArgsProduct({{1000, 10000}, {static_cast<int>(CombiningAlgorithm::DenyOverrides),
                                   static_cast<int>(CombiningAlgorithm::ShortestPathDenyOverrides)}})
    ->Unit(benchmark::kMicrosecond);

void BM_MatcherVsOracle(benchmark::State& state) {
  const testing::GeneratedModel& gen = scaled(1000);
  testing::Rng rng(9);
  const auto queries = testing::random_queries(rng, gen, 64);
  const bool oracle = state.range(0) != 0;
  std::size_t i = 0;
  for (auto _ : state) {
    const AccessQuery& q = queries[i++ % queries.size()];
    benchmark::DoNotOptimize(oracle ? matching_policies_oracle(gen.model, q) : matching_policies(gen.model, q));
  }
  state.SetLabel(oracle ? "oracle" : "matcher");
}
BENCHMARK(BM_MatcherVsOracle)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_Healthcare(benchmark::State& state) {
  LoadResult loaded = load_model_file(std::filesystem::path(GABAC_MODELS_DIR) / "healthcare.abac");
  const Model& m = *loaded.model;
  const AccessQuery q = resolve_query(m.graph(), "John", "Write", "MR_1234");
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(m, q, CombiningAlgorithm::DenyOverrides));
}
BENCHMARK(BM_Healthcare);

void BM_LoadHealthcare(benchmark::State& state) {
  const auto path = std::filesystem::path(GABAC_MODELS_DIR) / "healthcare.abac";
  for (auto _ : state) benchmark::DoNotOptimize(load_model_file(path));
}
BENCHMARK(BM_LoadHealthcare);

void BM_BuildScaleModel(benchmark::State& state) {
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    testing::Rng rng(1);
    benchmark::DoNotOptimize(testing::scale_model(rng, nodes, nodes * 3, nodes / 10));
  }
}
BENCHMARK(BM_BuildScaleModel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
