#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "thermoshift/diagnostics.hpp"
#include "thermoshift/potential.hpp"
#include "thermoshift/pressure.hpp"

using namespace thermoshift;

namespace {

TransitionSchedule reference() { return TransitionSchedule::finite(1, {2, 4}); }

BinaryWord random_word(std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BinaryWord w(length);
  for (std::size_t i = 0; i < length; ++i) w.set(i, static_cast<int>(rng() & 1U));
  return w;
}

void BM_UpperBound(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const auto threads = static_cast<unsigned>(state.range(1));
  const auto ev = std::make_shared<const PotentialEvaluator>(reference());
  const CylinderSumBound bound(ev, L, L / 2, {kMaxCylinderLength, threads});
  const std::vector<double> betas{2, 3, 4, 6};
  for (auto _ : state) benchmark::DoNotOptimize(bound.evaluate(betas));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(betas.size()) << state.range(0));
}
BENCHMARK(BM_UpperBound)->Args({12, 1})->Args({16, 1})->Args({16, 4})->Args({20, 4})->Unit(benchmark::kMillisecond);

void BM_TableBuild(benchmark::State& state) {
  const auto R = static_cast<std::size_t>(state.range(0));
  const auto ev = std::make_shared<const PotentialEvaluator>(reference());
  for (auto _ : state) {
    const CylinderSumBound bound(ev, 2 * R + 1, R, {kMaxCylinderLength, 1});
    benchmark::DoNotOptimize(&bound);
  }
}
BENCHMARK(BM_TableBuild)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Membership(benchmark::State& state) {
  const auto length = static_cast<std::size_t>(state.range(0));
  const BinaryWord w = random_word(length, 1);
  for (auto _ : state) {
    for (unsigned n = 1; n <= 6; ++n) benchmark::DoNotOptimize(contains_word(SubshiftIndex(n), w));
  }
}
BENCHMARK(BM_Membership)->Arg(16)->Arg(64)->Arg(1024);

void BM_Phi(benchmark::State& state) {
  const auto R = static_cast<std::size_t>(state.range(0));
  const PotentialEvaluator ev(TransitionSchedule::infinite(1, {BetaRule::Kind::Geometric, 1, 2}));
  const CenteredWindow w(random_word(2 * R + 1, 2), R);
  for (auto _ : state) benchmark::DoNotOptimize(ev.phi(w));
}
BENCHMARK(BM_Phi)->Arg(8)->Arg(64);

void BM_CountLanguage(benchmark::State& state) {
  const auto j = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_language(SubshiftIndex(1), j));
}
BENCHMARK(BM_CountLanguage)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Pins(benchmark::State& state) {
  const BinaryWord w = sample_bernoulli_word(0.5, static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(pin_positions(w));
}
BENCHMARK(BM_Pins)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
