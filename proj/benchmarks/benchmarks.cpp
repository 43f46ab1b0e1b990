#include <verdet/bloch.hpp>
#include <verdet/contour.hpp>
#include <verdet/finite.hpp>
#include <verdet/kubo.hpp>
#include <verdet/lattice.hpp>

#include <benchmark/benchmark.h>

using namespace verdet;

static void bm_fiber_hamiltonian(benchmark::State& state) {
    auto model = lattice::graphene_model(1.0);
    lattice::Vec2 k{0.7, -0.3};
    for (auto _ : state) {
        auto fiber = bloch::fiber_hamiltonian(model, k, bloch::FiberConvention::Phased);
        benchmark::DoNotOptimize(fiber.entries.data());
    }
}
BENCHMARK(bm_fiber_hamiltonian);

static void bm_band_sweep(benchmark::State& state) {
    auto model = lattice::graphene_model(1.0);
    const auto grid = bloch::make_bz_grid(model, static_cast<int>(state.range(0)),
                                          static_cast<int>(state.range(0)));
    for (auto _ : state) {
        double acc = 0.0;
        for (const auto& k : grid.nodes) acc += bloch::band_energies(model, k).sum();
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(bm_band_sweep)->Arg(16)->Arg(32);

static void bm_contour_integrate(benchmark::State& state) {
    contour::ThermoOpticalParams p;
    contour::ContourConfig cfg;
    cfg.nodes_per_edge = static_cast<int>(state.range(0));
    const auto c = contour::build_contour(-3.0, 3.0, p, cfg);
    for (auto _ : state) {
        auto v = contour::contour_integrate(
            c, [&](linalg::Complex z) { return contour::fermi_dirac(z, p) / (z - 0.5); });
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(bm_contour_integrate)->Arg(64)->Arg(512);

static void bm_residue_fiber(benchmark::State& state) {
    auto model = lattice::graphene_model(1.0);
    contour::ThermoOpticalParams p;
    auto fiber = bloch::fiber_hamiltonian(model, {0.4, 0.9}, bloch::FiberConvention::Phased);
    auto a = bloch::fiber_k_derivative(model, {0.4, 0.9}, 1, 0).entries;
    auto b = bloch::fiber_k_derivative(model, {0.4, 0.9}, 0, 1).entries;
    for (auto _ : state) {
        auto v = kubo::residue_double_resolvent(fiber, a, b, p, false);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(bm_residue_fiber);

static void bm_finite_solver(benchmark::State& state) {
    auto model = lattice::graphene_model(1.0);
    contour::ThermoOpticalParams p;
    p.mu = 0.3;
    p.eta = 0.1;
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) {
        finite::FiniteSpectralSolver solver(model, N, 0.01);
        auto r = solver.sigma21(p, +1);
        benchmark::DoNotOptimize(r.sigma21);
    }
}
BENCHMARK(bm_finite_solver)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
