#include <benchmark/benchmark.h>

#include "vqclab/design.hpp"
#include "vqclab/tensor_train.hpp"

using namespace vqclab;

static void BM_ApplyHea(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CircuitLayout layout = build_hea(n, 6);
    Rng rng(SeedSpec{1, 0});
    const ParameterVector params = sample_params(UniformDist{}, layout.param_count, rng);
    StateVector psi = StateVector::zero_state(n);
    for (auto _ : state) {
        psi = apply_circuit(layout, params, std::move(psi));
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
    state.SetComplexityN(1 << n);
}
BENCHMARK(BM_ApplyHea)->DenseRange(6, 14, 2)->Complexity();

static void BM_Expectation(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CircuitLayout layout = build_hea(n, 6);
    const EncodingSpec enc{EncodingKind::Angle, n};
    const Observable z0 = Observable::pauli_z_on(0, n);
    Rng rng(SeedSpec{2, 0});
    const ParameterVector params = sample_params(UniformDist{}, layout.param_count, rng);
    const std::vector<double> x(static_cast<std::size_t>(n), 0.3);
    for (auto _ : state)
        benchmark::DoNotOptimize(expectation(layout, params, enc, x, z0));
}
BENCHMARK(BM_Expectation)->DenseRange(8, 12, 2);

static void BM_HaarUnitary(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(SeedSpec{3, 0});
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_haar_unitary(n, rng));
}
BENCHMARK(BM_HaarUnitary)->DenseRange(2, 7, 1);

static void BM_PartialTrace(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(SeedSpec{4, 0});
    const StateVector psi = sample_haar_state(n, rng);
    std::vector<int> keep;
    for (int q = 0; q < n / 2; ++q) keep.push_back(q);
    for (auto _ : state)
        benchmark::DoNotOptimize(partial_trace(psi, keep));
}
BENCHMARK(BM_PartialTrace)->DenseRange(6, 12, 2);

static void BM_ChoiPurity(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(SeedSpec{5, 0});
    const ComplexMatrix u = sample_haar_unitary(n, rng);
    const Bipartition cut = Bipartition::balanced(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(choi_purity(u, cut));
}
BENCHMARK(BM_ChoiPurity)->DenseRange(3, 6, 1);

static void BM_TTContract(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(SeedSpec{6, 0});
    const TensorHyperModel model = make_tensor_hyper(n, 6, 2, rng);
    std::vector<double> sigma(static_cast<std::size_t>(model.sigma_dim));
    for (double& s : sigma) s = rng.normal();
    for (auto _ : state)
        benchmark::DoNotOptimize(tt_contract(model.generator, sigma));
}
BENCHMARK(BM_TTContract)->DenseRange(4, 12, 2);

int main(int argc, char** argv) {
    ::benchmark::Initialize(&argc, argv);
    if (::benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    ::benchmark::RunSpecifiedBenchmarks();
    ::benchmark::Shutdown();
    return 0;
}
