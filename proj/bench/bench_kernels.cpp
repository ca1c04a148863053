#include <benchmark/benchmark.h>

#include <random>

#include "boqc/protocol.hpp"
#include "boqc/qsim/kernels.hpp"
#include "boqc/security.hpp"

namespace {

using namespace boqc;
using qsim::Amplitudes;
using qsim::cplx;

Amplitudes random_state(int qubits) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n;
  Amplitudes a(std::size_t{1} << qubits);
  double norm = 0;
  for (auto& x : a) {
    x = {n(rng), n(rng)};
    norm += std::norm(x);
  }
  for (auto& x : a) x /= std::sqrt(norm);
  return a;
}

template <class Kernel>
void gate_bench(benchmark::State& state, Kernel k) {
  const int n = static_cast<int>(state.range(0));
  Amplitudes a = random_state(n);
  for (auto _ : state) {
    k(a.data(), a.size(), static_cast<unsigned>(n / 2));
    benchmark::ClobberMemory();
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * a.size() * sizeof(cplx)));
}

void BM_H_Serial(benchmark::State& s) { gate_bench(s, qsim::serial::apply_h); }
void BM_H_Omp(benchmark::State& s) { gate_bench(s, qsim::omp::apply_h); }
void BM_CZ_Serial(benchmark::State& s) {
  gate_bench(s, [](cplx* a, std::size_t d, unsigned q) { qsim::serial::apply_cz(a, d, 0, q); });
}
void BM_CZ_Omp(benchmark::State& s) {
  gate_bench(s, [](cplx* a, std::size_t d, unsigned q) { qsim::omp::apply_cz(a, d, 0, q); });
}

template <class Kernel>
void contract_bench(benchmark::State& state, Kernel k) {
  const int n = static_cast<int>(state.range(0));
  const Amplitudes a = random_state(n);
  Amplitudes out(a.size() / 2);
  const double h = 1.0 / std::sqrt(2.0);
  for (auto _ : state) {
    k(a.data(), a.size(), static_cast<unsigned>(n / 2), cplx{h, 0}, cplx{0, h}, out.data());
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_Contract_Serial(benchmark::State& s) { contract_bench(s, qsim::serial::contract); }
void BM_Contract_Omp(benchmark::State& s) { contract_bench(s, qsim::omp::contract); }

template <class Kernel>
void reduced_bench(benchmark::State& state, Kernel k) {
  const int n = static_cast<int>(state.range(0));
  const Amplitudes a = random_state(n);
  const unsigned qubits[] = {0, static_cast<unsigned>(n / 2), static_cast<unsigned>(n - 1)};
  Amplitudes rho(64);
  for (auto _ : state) {
    k(a.data(), a.size(), qubits, 3, 1.0, rho.data());
    benchmark::DoNotOptimize(rho.data());
  }
}

void BM_Reduced_Serial(benchmark::State& s) { reduced_bench(s, qsim::serial::accumulate_reduced); }
void BM_Reduced_Omp(benchmark::State& s) { reduced_bench(s, qsim::omp::accumulate_reduced); }

#define KERNEL_SIZES ->Arg(10)->Arg(14)->Arg(18)->Arg(20)
BENCHMARK(BM_H_Serial) KERNEL_SIZES;
BENCHMARK(BM_H_Omp) KERNEL_SIZES;
BENCHMARK(BM_CZ_Serial) KERNEL_SIZES;
BENCHMARK(BM_CZ_Omp) KERNEL_SIZES;
BENCHMARK(BM_Contract_Serial) KERNEL_SIZES;
BENCHMARK(BM_Contract_Omp) KERNEL_SIZES;
BENCHMARK(BM_Reduced_Serial) KERNEL_SIZES;
BENCHMARK(BM_Reduced_Omp) KERNEL_SIZES;

// lazy scheduling graph, qq mode, b = 2
protocol::Setup lazy_setup() {
  OpenGraph g = OpenGraph::make({1, 2, 3, 4, 5, 6, 7}, {{1, 3}, {2, 3}, {2, 4}, {4, 6}, {4, 5}, {3, 5}, {3, 7}, {6, 7}},
                                {1, 2}, {5, 6, 7});
  const auto pre = protocol::pre_protocol(g, 2, protocol::IoMode::qq);
  protocol::Setup s;
  s.graph = pre.graph;
  s.flow = pre.flow;
  s.order = pre.order;
  s.b = 2;
  for (NodeId v : {1, 2, 3, 4}) s.phi.emplace(v, DyadicAngle(v, 2));
  s.quantum_input.alloc_plus(1, DyadicAngle(1, 2));
  s.quantum_input.alloc_plus(2, DyadicAngle(3, 2));
  return s;
}

void enumeration_bench(benchmark::State& state, bool parallel) {
  const auto s = lazy_setup();
  const auto variant = state.range(0) ? protocol::Variant::boqco : protocol::Variant::boqc;
  protocol::EnumerationOptions opt;
  opt.parallel = parallel;
  for (auto _ : state) {
    auto cq = protocol::output_channel(s, variant, protocol::World::real, protocol::bob_honest(), opt);
    benchmark::DoNotOptimize(cq.blocks);
  }
}

void BM_OutputChannel_Serial(benchmark::State& s) { enumeration_bench(s, false); }
void BM_OutputChannel_Omp(benchmark::State& s) { enumeration_bench(s, true); }
BENCHMARK(BM_OutputChannel_Serial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OutputChannel_Omp)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
