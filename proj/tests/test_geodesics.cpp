#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tdiv/distributions.hpp"
#include "tdiv/divergence.hpp"
#include "tdiv/errors.hpp"
#include "tdiv/geodesics.hpp"
#include "tdiv/quadrature.hpp"
#include "tdiv/random.hpp"

using namespace tdiv;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

} // namespace

TEST_CASE("geodesic endpoints reproduce the input qdf values verbatim") {
    auto p = distribution::gaussian(1.0, 2.0);
    auto q = distribution::logistic(0.0, 0.7);
    auto u = linspace(0.02, 0.98, 49);
    for (double a : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
        auto at_q = transport_alpha_geodesic(p, q, a, 0.0, u);
        auto at_p = transport_alpha_geodesic(p, q, a, 1.0, u);
        for (int i = 0; i < 49; ++i) {
            CHECK(at_q.qdf_values[i] == q.qdf(u[i]));
            CHECK(at_p.qdf_values[i] == p.qdf(u[i]));
        }
        CHECK(at_q.anchor_x == q.quantile(0.5));
        CHECK(at_p.anchor_x == p.quantile(0.5));
    }
}

TEST_CASE("constant qdf pairs interpolate by the alpha power mean") {
    auto p = distribution::uniform(0.0, 2.0); // qdf 2
    auto q = distribution::uniform(0.0, 1.0); // qdf 1
    auto u = linspace(0.1, 0.9, 9);
    struct mid_case {
        double alpha, want;
    };
    for (auto [a, want] : {mid_case{-1.0, 1.5},
                           mid_case{0.0, std::sqrt(2.0)},
                           mid_case{1.0, 4.0 / 3.0},
                           mid_case{3.0, std::pow(0.5625, -1.0 / 3.0)}}) {
        auto frame = transport_alpha_geodesic(p, q, a, 0.5, u);
        for (double v : frame.qdf_values)
            CHECK(v == Catch::Approx(want).margin(1e-12));
    }
}

TEST_CASE("the negative alpha power of the qdf moves on a straight line") {
    rng64 rng(7);
    auto p = distribution::from_qdf_grid(random_smooth_qdf_grid(rng));
    auto q = distribution::from_qdf_grid(random_smooth_qdf_grid(rng));
    auto u = linspace(0.02, 0.98, 97);
    for (double a : {-3.0, -1.0, 1.0, 3.0}) {
        for (double t : {0.25, 0.5, 0.75}) {
            auto frame = transport_alpha_geodesic(p, q, a, t, u);
            for (int i = 0; i < 97; ++i) {
                double kq = std::pow(q.qdf(u[i]), -a);
                double kp = std::pow(p.qdf(u[i]), -a);
                double want = (1.0 - t) * kq + t * kp;
                double got = std::pow(frame.qdf_values[i], -a);
                CHECK(got == Catch::Approx(want).margin(1e-10 * std::max(1.0, want)));
            }
        }
    }
}

TEST_CASE("displacement midpoint of two gaussians is the parameter midpoint") {
    auto p = distribution::gaussian(2.0, 3.0);
    auto q = distribution::gaussian(0.0, 1.0);
    auto mid = distribution::gaussian(1.0, 2.0);
    auto u = linspace(0.001, 0.999, 1025);
    auto frame = transport_alpha_geodesic(p, q, -1.0, 0.5, u);
    auto d = geodesic_density(frame, p, q, -1.0, 0.5);
    for (double v : {0.05, 0.2, 0.5, 0.8, 0.95})
        CHECK(d.quantile(v) == Catch::Approx(mid.quantile(v)).margin(1e-8));
}

TEST_CASE("log interpolation midpoint of nested gaussians halves the scale ratio") {
    auto p = distribution::gaussian(0.0, 4.0);
    auto q = distribution::gaussian(0.0, 1.0);
    auto mid = distribution::gaussian(0.0, 2.0);
    auto u = linspace(0.001, 0.999, 1025);
    auto frame = transport_alpha_geodesic(p, q, 0.0, 0.5, u);
    auto d = geodesic_density(frame, p, q, 0.0, 0.5);
    for (double v : {0.05, 0.2, 0.5, 0.8, 0.95})
        CHECK(d.quantile(v) == Catch::Approx(mid.quantile(v)).margin(1e-8));
}

TEST_CASE("endpoint frames wrap back into the endpoint distributions") {
    auto p = distribution::gaussian(1.0, 2.0);
    auto q = distribution::exponential(0.5);
    auto u = linspace(0.001, 0.999, 513);
    auto f0 = transport_alpha_geodesic(p, q, 1.0, 0.0, u);
    auto d0 = geodesic_density(f0, p, q, 1.0, 0.0);
    auto f1 = transport_alpha_geodesic(p, q, 1.0, 1.0, u);
    auto d1 = geodesic_density(f1, p, q, 1.0, 1.0);
    // the exponential tail bends the qdf hard, so the grid interpolant is the
    // accuracy limit here, not the geodesic formula
    for (double v : {0.05, 0.3, 0.5, 0.7, 0.95}) {
        CHECK(d0.quantile(v) == Catch::Approx(q.quantile(v)).margin(1e-6));
        CHECK(d1.quantile(v) == Catch::Approx(p.quantile(v)).margin(1e-6));
    }
}

TEST_CASE("quantile transport distance grows linearly along the displacement path") {
    auto p = distribution::gaussian(2.0, 3.0);
    auto q = distribution::gaussian(0.0, 1.0);
    auto u = linspace(0.001, 0.999, 1025);
    // the same clipped rule on both sides so the truncated tail mass cancels
    auto rule = gauss_legendre_unit(256, 0.01);
    double full = wasserstein2(p, q, rule).value;
    for (double t : {0.25, 0.5, 0.75}) {
        auto frame = transport_alpha_geodesic(p, q, -1.0, t, u);
        auto d = geodesic_density(frame, p, q, -1.0, t);
        CHECK(wasserstein2(d, q, rule).value == Catch::Approx(t * full).margin(1e-6));
    }
}

TEST_CASE("uniform path construction carries endpoints and spacing") {
    auto p = distribution::gaussian(0.0, 2.0);
    auto q = distribution::gaussian(0.0, 1.0);
    auto u = linspace(0.01, 0.99, 65);
    auto path = make_geodesic_path(p, q, 1.0, 9, u);
    REQUIRE(path.t_grid.size() == 9);
    REQUIRE(path.qdf_frames.size() == 9);
    CHECK(path.t_grid.front() == 0.0);
    CHECK(path.t_grid.back() == 1.0);
    for (int k = 1; k < 9; ++k)
        CHECK(path.t_grid[k] - path.t_grid[k - 1] == Catch::Approx(0.125).margin(1e-15));
    for (int i = 0; i < 65; ++i) {
        CHECK(path.qdf_frames.front().qdf_values[i] == q.qdf(u[i]));
        CHECK(path.qdf_frames.back().qdf_values[i] == p.qdf(u[i]));
    }
}

TEST_CASE("interpolation pde residual vanishes when the path is exact") {
    auto u = linspace(0.02, 0.98, 33);
    // constant ratio, alpha = -1: the ratio moves linearly in t
    auto path = make_geodesic_path(distribution::uniform(0.0, 2.0),
                                   distribution::uniform(0.0, 1.0), -1.0, 17, u);
    CHECK(geodesic_pde_residual(path).max_residual <= 1e-12);

    // alpha = 0: log of the ratio is linear in t for any pair
    auto log_path = make_geodesic_path(distribution::gaussian(0.0, 1.0),
                                       distribution::logistic(0.2, 0.8), 0.0, 17, u);
    CHECK(geodesic_pde_residual(log_path).max_residual <= 1e-10);
}

TEST_CASE("interpolation pde residual shrinks at the finite-difference rate") {
    auto p = distribution::gaussian(0.0, 2.0);
    auto q = distribution::gaussian(0.0, 1.0);
    auto u = linspace(0.01, 0.99, 65);
    auto coarse = geodesic_pde_residual(make_geodesic_path(p, q, 1.0, 33, u));
    auto fine = geodesic_pde_residual(make_geodesic_path(p, q, 1.0, 65, u));
    CHECK(fine.max_residual < 1e-3);
    double ratio = coarse.max_residual / fine.max_residual;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
    REQUIRE(fine.t.size() == 63);
    REQUIRE(fine.r.size() == 63);
    REQUIRE(fine.r[0].size() == u.size());
}

TEST_CASE("per-coordinate mixture path hits its closed-form midpoints") {
    std::vector<double> m{1.0}, n{4.0};
    CHECK(classical_alpha_geodesic(m, n, 0.0, 0.5)[0] == Catch::Approx(2.25).margin(1e-12));
    CHECK(classical_alpha_geodesic(m, n, 1.0, 0.5)[0] == Catch::Approx(2.0).margin(1e-12));
    CHECK(classical_alpha_geodesic(m, n, -1.0, 0.5)[0] == Catch::Approx(2.5).margin(1e-12));
    CHECK(classical_alpha_geodesic(m, n, 3.0, 0.5)[0] == Catch::Approx(1.6).margin(1e-12));

    std::vector<double> mm{0.3, 2.0, 5.5}, nn{1.1, 0.4, 5.5};
    for (double a : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
        auto at0 = classical_alpha_geodesic(mm, nn, a, 0.0);
        auto at1 = classical_alpha_geodesic(mm, nn, a, 1.0);
        for (int i = 0; i < 3; ++i) {
            CHECK(at0[i] == mm[i]);
            CHECK(at1[i] == nn[i]);
        }
    }
}

TEST_CASE("per-coordinate path solves its second-order equation") {
    std::vector<double> m{1.0, 0.5}, n{4.0, 2.5};
    auto gamma = [&](double a, double t, int i) {
        return classical_alpha_geodesic(m, n, a, t)[i];
    };
    auto max_residual = [&](double a, double h) {
        double worst = 0.0;
        for (double t = 0.2; t <= 0.801; t += 0.1) {
            for (int i = 0; i < 2; ++i) {
                double g0 = gamma(a, t, i);
                double gp = gamma(a, t + h, i), gm = gamma(a, t - h, i);
                double d2 = (gp - 2.0 * g0 + gm) / (h * h);
                double d1 = (gp - gm) / (2.0 * h);
                worst = std::max(worst, std::abs(d2 - (1.0 + a) / (2.0 * g0) * d1 * d1));
            }
        }
        return worst;
    };
    // the path is polynomial of degree <= 2 in t at alpha in {-1, 0}: residual is rounding
    CHECK(max_residual(-1.0, 1e-2) <= 1e-8);
    CHECK(max_residual(0.0, 1e-2) <= 1e-8);
    for (double a : {1.0, 3.0}) {
        double coarse = max_residual(a, 2e-2);
        double fine = max_residual(a, 1e-2);
        double ratio = coarse / fine;
        CHECK(ratio > 3.0);
        CHECK(ratio < 5.0);
    }
}

TEST_CASE("geodesic construction rejects malformed input") {
    auto p = distribution::gaussian(0.0, 2.0);
    auto q = distribution::gaussian(0.0, 1.0);
    auto u = linspace(0.1, 0.9, 9);

    CHECK_THROWS_AS(transport_alpha_geodesic(p, q, 1.0, -0.1, u), error);
    CHECK_THROWS_AS(transport_alpha_geodesic(p, q, 1.0, 1.1, u), error);
    CHECK_THROWS_AS(transport_alpha_geodesic(p, q, std::nan(""), 0.5, u), error);

    std::vector<double> one{0.5};
    CHECK_THROWS_AS(transport_alpha_geodesic(p, q, 1.0, 0.5, one), error);
    std::vector<double> flat{0.2, 0.2, 0.4};
    CHECK_THROWS_AS(transport_alpha_geodesic(p, q, 1.0, 0.5, flat), error);
    std::vector<double> outside{0.0, 0.5};
    CHECK_THROWS_AS(transport_alpha_geodesic(p, q, 1.0, 0.5, outside), error);

    CHECK_THROWS_AS(make_geodesic_path(p, q, 1.0, 1, u), error);

    auto path = make_geodesic_path(p, q, 1.0, 9, u);
    auto short_path = path;
    short_path.t_grid.resize(3);
    short_path.qdf_frames.resize(3);
    CHECK_THROWS_AS(geodesic_pde_residual(short_path), error);

    auto skewed = path;
    skewed.t_grid[4] += 1e-3;
    CHECK_THROWS_AS(geodesic_pde_residual(skewed), error);

    auto torn = path;
    torn.qdf_frames[3].u_nodes[2] += 1e-6;
    CHECK_THROWS_AS(geodesic_pde_residual(torn), error);
}

TEST_CASE("per-coordinate path rejects malformed input") {
    std::vector<double> m{1.0, 2.0}, n{1.0}, z{1.0, 0.0};
    std::vector<double> ok{1.0, 2.0};
    CHECK_THROWS_AS(classical_alpha_geodesic(m, n, 1.0, 0.5), error);
    CHECK_THROWS_AS(classical_alpha_geodesic(m, z, 1.0, 0.5), error);
    CHECK_THROWS_AS(classical_alpha_geodesic(m, ok, 1.0, 1.5), error);
    CHECK_THROWS_AS(classical_alpha_geodesic(m, ok, std::nan(""), 0.5), error);
}
