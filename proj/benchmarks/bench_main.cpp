#include <benchmark/benchmark.h>

#include "magicmps/haar.hpp"
#include "magicmps/magic.hpp"
#include "magicmps/mps.hpp"
#include "magicmps/random.hpp"

using namespace magicmps;

namespace {

MpsState deep_state(std::size_t n, std::size_t chi) {
  MpsState state = MpsState::zeros(n, TruncationPolicy::finite(chi));
  const auto schedule = brickwork(n, 2 * n);
  std::size_t slot = 0;
  for (const auto& layer : schedule.layers) {
    for (std::size_t left : layer) state.apply_two_qubit_gate(haar_gate(1, 0, slot++), left);
  }
  return state;
}

void BM_HaarUnitary4(benchmark::State& st) {
  RandomStream rng(7);
  for (auto _ : st) benchmark::DoNotOptimize(sample_haar_unitary(4, rng));
}
BENCHMARK(BM_HaarUnitary4);

void BM_GateApply(benchmark::State& st) {
  const auto chi = static_cast<std::size_t>(st.range(0));
  MpsState state = deep_state(16, chi);
  const Gate2 gate = haar_gate(2, 0, 0);
  std::size_t left = 0;
  for (auto _ : st) {
    state.apply_two_qubit_gate(gate, left);
    left = (left + 1) % 15;
  }
}
BENCHMARK(BM_GateApply)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_PauliSample(benchmark::State& st) {
  const auto chi = static_cast<std::size_t>(st.range(0));
  MpsState state = deep_state(16, chi);
  state.move_center(0);
  const PauliSampler sampler(state);
  RandomStream rng(3);
  for (auto _ : st) benchmark::DoNotOptimize(sampler.draw(rng));
}
BENCHMARK(BM_PauliSample)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

}  // namespace
BENCHMARK_MAIN();
