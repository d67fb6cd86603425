#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "tdiv/distributions.hpp"
#include "tdiv/divergence.hpp"
#include "tdiv/geodesics.hpp"
#include "tdiv/hessian.hpp"
#include "tdiv/quadrature.hpp"
#include "tdiv/random.hpp"

using namespace tdiv;

// serial vs parallel timings for the evaluation kernels; both modes reduce with
// the same compensated sum, so the values are bitwise identical and the
// comparison is purely about throughput

namespace {

exec_mode mode_of(const benchmark::State& state) {
    return state.range(0) == 0 ? exec_mode::serial : exec_mode::parallel;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

const distribution& grid_p() {
    static rng64 rng(21);
    static distribution d = distribution::from_qdf_grid(random_smooth_qdf_grid(rng, 2049));
    return d;
}

const distribution& grid_q() {
    static rng64 rng(22);
    static distribution d = distribution::from_qdf_grid(random_smooth_qdf_grid(rng, 2049));
    return d;
}

// the node loop itself, on a prebuilt rule: the purest kernel comparison
void bm_integrate_unit(benchmark::State& state) {
    auto rule = gauss_legendre_unit(static_cast<int>(state.range(1)));
    auto f = [](double u) { return std::exp(std::sin(9.0 * u)) / (1.0 + u); };
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_unit(f, rule, mode_of(state)));
}

// end-to-end cost of a divergence call between grid-backed inputs; includes
// the per-call construction of the doubled rule behind the error estimate
void bm_transport_alpha_div(benchmark::State& state) {
    auto rule = gauss_legendre_unit(static_cast<int>(state.range(1)), 0.01);
    alpha_param alpha{1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(
            transport_alpha_div(grid_p(), grid_q(), alpha, rule, mode_of(state)).value);
}

// frames are independent, so the path builder parallelizes across them
void bm_geodesic_path(benchmark::State& state) {
    auto u = linspace(0.01, 0.99, static_cast<int>(state.range(1)));
    auto p = distribution::gaussian(0.0, 2.0);
    auto q = distribution::gaussian(0.0, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            make_geodesic_path(p, q, 1.0, 65, u, mode_of(state)).qdf_frames.size());
}

void bm_hessian_form(benchmark::State& state) {
    auto rule = gauss_legendre_unit(static_cast<int>(state.range(1)));
    auto x = linspace(-10.0, 10.0, 4001);
    std::vector<double> coeffs{0.0, 0.3, 0.5, -0.1, 0.02};
    static potential_grid pot = make_polynomial_potential(coeffs, x);
    auto p = distribution::gaussian(0.0, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(hessian_form(p, pot, pot, rule, mode_of(state)));
}

} // namespace

BENCHMARK(bm_integrate_unit)
    ->ArgsProduct({{0, 1}, {1024, 8192}})
    ->ArgNames({"parallel", "nodes"});
BENCHMARK(bm_transport_alpha_div)
    ->ArgsProduct({{0, 1}, {256, 1024}})
    ->ArgNames({"parallel", "nodes"});
BENCHMARK(bm_geodesic_path)->ArgsProduct({{0, 1}, {257, 1025}})->ArgNames({"parallel", "u_nodes"});
BENCHMARK(bm_hessian_form)->ArgsProduct({{0, 1}, {2048, 8192}})->ArgNames({"parallel", "nodes"});

BENCHMARK_MAIN();
