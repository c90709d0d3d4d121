#include <benchmark/benchmark.h>

#include <optional>
#include <vector>

#include "sedcat/physics.hpp"
#include "sedcat/qm/observables.hpp"
#include "sedcat/qm/propagator.hpp"
#include "sedcat/qm/states.hpp"
#include "sedcat/qm/wigner.hpp"
#include "sedcat/sed/ensemble.hpp"
#include "sedcat/sed/zpf.hpp"

using namespace sedcat;

namespace {

OscillatorParams oscillator()
{
    return derive_oscillator(9.11e-35, 1.60e-19, 1e16);
}

LaserConfig laser()
{
    return make_laser(2.3e16, 0.3e16, 4.5e-8, 4.5e-8, 5e-15);
}

void BM_SplitStep(benchmark::State& state)
{
    const auto osc = oscillator();
    const auto grid = qm::make_grid(osc, 40.0, static_cast<std::size_t>(state.range(0)));
    qm::SplitStepPropagator prop(grid, osc, laser());
    auto psi = qm::ground_state(grid, osc);
    psi.time = -osc.period();
    for (auto _ : state) {
        prop.step(psi);
        benchmark::DoNotOptimize(psi.psi.data());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SplitStep)->Arg(256)->Arg(2048)->Arg(8192);

void BM_FockProjection(benchmark::State& state)
{
    const auto osc = oscillator();
    const auto grid = qm::make_grid(osc);
    const qm::FockProjector projector(grid, osc, static_cast<std::size_t>(state.range(0)));
    const auto psi = qm::coherent_state(grid, osc, 3.0 * osc.delta_x, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(projector.project(psi));
    }
}
BENCHMARK(BM_FockProjection)->Arg(64)->Arg(200);

void BM_Wigner(benchmark::State& state)
{
    const auto osc = oscillator();
    const auto grid = qm::make_grid(osc);
    const auto psi = qm::coherent_state(grid, osc, 3.0 * osc.delta_x, 0.0);
    const auto lattice = qm::default_wigner_lattice(osc);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qm::wigner(psi, osc, lattice));
    }
}
BENCHMARK(BM_Wigner)->Unit(benchmark::kMillisecond);

void BM_ZpfSampler(benchmark::State& state)
{
    const auto osc = oscillator();
    auto spec = sed::default_zpf_spec(osc, 7);
    const auto z = sed::synthesize_zpf(spec, osc);
    sed::ZpfSampler sampler(spec);
    const auto count = static_cast<std::size_t>(state.range(0));
    std::vector<double> out;
    const double h = osc.period() / 300.0;
    for (auto _ : state) {
        sampler.sample(z, 0.0, h, count, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ZpfSampler)->Arg(4096)->Arg(32768)->Unit(benchmark::kMillisecond);

// Per-particle cost of the ensemble: ZPF synthesis, sampling and RK4 over
// ten periods with the pulse on.
void BM_EnsembleParticles(benchmark::State& state)
{
    const auto osc = oscillator();
    sed::EnsembleConfig c;
    c.osc = osc;
    c.drive = sed::DriveModel::kapitza_dirac(laser());
    c.zpf = sed::default_zpf_spec(osc);
    c.n_particles = static_cast<std::size_t>(state.range(0));
    c.master_seed = 1;
    c.t_start = -5.0 * osc.period();
    c.t_end = 5.0 * osc.period();
    c.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sed::run_ensemble(c));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EnsembleParticles)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive is LTO bytecode from another compiler
// release, so the entry point is defined here.
BENCHMARK_MAIN();
