#include <benchmark/benchmark.h>

#include "yieldpaint/dae.hpp"
#include "yieldpaint/masking.hpp"
#include "yieldpaint/rng.hpp"
#include "yieldpaint/synthetic.hpp"
#include "yieldpaint/tps.hpp"
#include "yieldpaint/tv.hpp"

using namespace yieldpaint;

namespace {

std::vector<TpsPoint> random_points(std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<TpsPoint> pts;
    pts.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        pts.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
    return pts;
}

MaskedSurface sample_masked(std::uint64_t seed) {
    SyntheticConfig cfg = SyntheticConfig::defaults();
    cfg.seed = seed;
    auto ds = generate_synthetic(cfg, 1);
    CorruptionSpec spec;
    spec.kind = UniformMasking{0.75};
    spec.seed = seed + 1;
    return corrupt(ds.surfaces[0], spec);
}

}  // namespace

static void BM_TpsFit(benchmark::State& state) {
    auto pts = random_points(static_cast<std::size_t>(state.range(0)), 31);
    for (auto _ : state) {
        auto [model, report] = tps_fit(pts, 1e-3);
        benchmark::DoNotOptimize(model.kernel_coeffs);
    }
}
BENCHMARK(BM_TpsFit)->Arg(49)->Arg(100)->Arg(195);

static void BM_TvInpaint(benchmark::State& state) {
    MaskedSurface masked = sample_masked(7);
    TvConfig cfg;
    for (auto _ : state) {
        auto result = tv_inpaint(masked, cfg);
        benchmark::DoNotOptimize(result.surface);
    }
}
BENCHMARK(BM_TvInpaint);

static void BM_DaeForward(benchmark::State& state) {
    DaeArchitecture arch = DaeArchitecture::cnn();
    Network net = build_dae_network(arch, 13, 15, 99);
    MaskedSurface masked = sample_masked(9);
    Tensor input = format_input(masked.values, 13, 15, arch);
    for (auto _ : state) {
        Tensor out = net.forward(input, Mode::Infer);
        benchmark::DoNotOptimize(out.data);
    }
}
BENCHMARK(BM_DaeForward);

BENCHMARK_MAIN();
