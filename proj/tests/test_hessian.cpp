#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tdiv/distributions.hpp"
#include "tdiv/errors.hpp"
#include "tdiv/hessian.hpp"
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

potential_grid poly_potential(std::vector<double> coeffs, double lo = -10.0, double hi = 10.0,
                              int n = 4001) {
    return make_polynomial_potential(coeffs, linspace(lo, hi, n));
}

} // namespace

TEST_CASE("polynomial potentials carry consistent derivative columns") {
    auto g = poly_potential({0.0, 0.0, 0.0, 1.0 / 6.0}, -2.0, 2.0, 401);
    REQUIRE(g.has_d3());
    // x = 1 is a grid node, so the columns are exact there
    auto probe = gamma_operators(g, 1.0);
    CHECK(probe.gamma1 == Catch::Approx(0.25).margin(1e-12));       // (x^2/2)^2
    CHECK(probe.gamma2 == Catch::Approx(1.0).margin(1e-12));        // (x)^2
    CHECK(probe.gamma3_direct == Catch::Approx(2.0).margin(1e-12)); // 2 x^3
}

TEST_CASE("metric form matches moment closed forms") {
    auto rule = gauss_legendre_unit(256);
    auto gauss = distribution::gaussian(0.0, 1.0);

    auto linear = poly_potential({0.0, 2.5});
    CHECK(hessian_form(gauss, linear, linear, rule) == 0.0);

    // second derivative x: the form is the second moment
    auto cubic = poly_potential({0.0, 0.0, 0.0, 1.0 / 6.0});
    CHECK(hessian_form(gauss, cubic, cubic, rule) == Catch::Approx(1.0).margin(1e-4));

    auto un = distribution::uniform(0.0, 1.0);
    auto cubic_unit = poly_potential({0.0, 0.0, 0.0, 1.0 / 6.0}, -0.5, 1.5, 401);
    CHECK(hessian_form(un, cubic_unit, cubic_unit, rule) ==
          Catch::Approx(1.0 / 3.0).margin(1e-10));

    // the form is bilinear and symmetric; the integrand is a plain product
    auto quartic = poly_potential({0.0, 0.0, 0.0, 0.0, 1.0 / 12.0});
    CHECK(hessian_form(gauss, cubic, quartic, rule) == hessian_form(gauss, quartic, cubic, rule));
}

TEST_CASE("metric form is positive semidefinite on random potentials") {
    auto rule = gauss_legendre_unit(128);
    rng64 rng(5);
    auto gauss = distribution::gaussian(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> coeffs(6);
        for (auto& c : coeffs)
            c = rng.uniform(-0.5, 0.5);
        auto g = poly_potential(coeffs);
        CHECK(hessian_form(gauss, g, g, rule) >= 0.0);
    }
}

TEST_CASE("cubic tensor matches closed forms and argument symmetry") {
    auto rule = gauss_legendre_unit(256);
    auto gauss = distribution::gaussian(0.0, 1.0);

    auto quad = poly_potential({0.0, 0.0, 0.5}); // second derivative 1
    CHECK(tensor_form(gauss, quad, quad, quad, rule) == Catch::Approx(2.0).margin(1e-12));

    // odd integrand under a symmetric measure
    auto cubic = poly_potential({0.0, 0.0, 0.0, 1.0 / 6.0});
    CHECK(tensor_form(gauss, cubic, cubic, cubic, rule) ==
          Catch::Approx(0.0).margin(1e-10));

    auto un = distribution::uniform(0.0, 1.0);
    auto cubic_unit = poly_potential({0.0, 0.0, 0.0, 1.0 / 6.0}, -0.5, 1.5, 401);
    CHECK(tensor_form(un, cubic_unit, cubic_unit, cubic_unit, rule) ==
          Catch::Approx(0.5).margin(1e-10));

    auto quartic = poly_potential({0.0, 0.0, 0.0, 0.0, 1.0 / 12.0});
    double base = tensor_form(gauss, quad, cubic, quartic, rule);
    CHECK(tensor_form(gauss, quad, quartic, cubic, rule) ==
          Catch::Approx(base).margin(1e-12 * std::max(1.0, std::abs(base))));
    CHECK(tensor_form(gauss, cubic, quad, quartic, rule) ==
          Catch::Approx(base).margin(1e-12 * std::max(1.0, std::abs(base))));
    CHECK(tensor_form(gauss, quartic, cubic, quad, rule) ==
          Catch::Approx(base).margin(1e-12 * std::max(1.0, std::abs(base))));
}

TEST_CASE("iterated carre du champ composition collapses to its closed form") {
    auto g = poly_potential({0.0, 0.0, 0.0, 1.0}, -2.0, 2.0, 401); // x^3
    auto at1 = gamma_operators(g, 1.0);
    CHECK(at1.gamma3_direct == Catch::Approx(432.0).margin(1e-9));
    CHECK(at1.gamma3_composed == Catch::Approx(432.0).margin(1e-9));

    auto lin = poly_potential({1.0, 3.0}, -2.0, 2.0, 11);
    auto flat = gamma_operators(lin, 0.5);
    CHECK(flat.gamma1 == Catch::Approx(9.0).margin(1e-12));
    CHECK(flat.gamma2 == 0.0);
    CHECK(flat.gamma3_composed == 0.0);
    CHECK(flat.gamma3_direct == 0.0);

    rng64 rng(13);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<double> coeffs(6);
        for (auto& c : coeffs)
            c = rng.uniform(-1.0, 1.0);
        auto grid = poly_potential(coeffs, -3.0, 3.0, 1201);
        double x = rng.uniform(-2.5, 2.5);
        auto v = gamma_operators(grid, x);
        CHECK(std::abs(v.gamma3_composed - v.gamma3_direct) <=
              1e-10 * std::max(1.0, std::abs(v.gamma3_direct)));
    }

    potential_grid no_d3;
    no_d3.x_nodes = {0.0, 1.0};
    no_d3.phi = {0.0, 0.5};
    no_d3.dphi = {0.0, 1.0};
    no_d3.d2phi = {1.0, 1.0};
    try {
        gamma_operators(no_d3, 0.5);
        FAIL("expected an exception");
    } catch (const error& e) {
        CHECK(e.kind() == error_kind::domain);
    }
}

TEST_CASE("pair potential recovers the transport map offset") {
    auto x = linspace(-3.0, 3.0, 241);
    auto gauss = distribution::gaussian(0.0, 1.0);

    auto self = potential_from_pair(gauss, gauss, x);
    for (std::size_t i = 0; i < self.x_nodes.size(); ++i) {
        CHECK(std::abs(self.dphi[i]) <= 1e-8);
        CHECK(std::abs(self.d2phi[i]) <= 1e-8);
    }

    // map x -> 3 + 2x: displacement 3 + x, constant qdf ratio 2
    auto wide = potential_from_pair(distribution::gaussian(3.0, 2.0), gauss, x);
    for (std::size_t i = 0; i < wide.x_nodes.size(); ++i) {
        CHECK(wide.dphi[i] == Catch::Approx(3.0 + x[i]).margin(1e-8));
        CHECK(wide.d2phi[i] == Catch::Approx(1.0).margin(1e-10));
    }

    auto stretch = potential_from_pair(distribution::uniform(0.0, 2.0),
                                       distribution::uniform(0.0, 1.0),
                                       linspace(0.01, 0.99, 99));
    for (double v : stretch.d2phi)
        CHECK(v == Catch::Approx(1.0).margin(1e-12));

    std::vector<double> bad{0.0, 0.0, 1.0};
    CHECK_THROWS_AS(potential_from_pair(gauss, gauss, bad), error);
    std::vector<double> single{0.0};
    CHECK_THROWS_AS(potential_from_pair(gauss, gauss, single), error);
}

TEST_CASE("taylor split of a small perturbation and its remainder order") {
    auto rule = gauss_legendre_unit(256);
    int n = 257;
    std::vector<double> u(n), flat(n);
    for (int i = 0; i < n; ++i) {
        u[i] = 1e-7 + (1.0 - 2e-7) * i / (n - 1);
        flat[i] = 1.0;
    }
    auto q = distribution::from_qdf_grid(qdf_grid{u, flat});

    auto perturbed = [&](double eps) {
        std::vector<double> vals(n);
        for (int i = 0; i < n; ++i)
            vals[i] = 1.0 + eps * (u[i] - 0.5);
        return distribution::from_qdf_grid(qdf_grid{u, vals});
    };

    auto same = taylor_compare(q, q, 1.0, rule);
    CHECK(same.quadratic == 0.0);
    CHECK(same.cubic == 0.0);
    CHECK(same.remainder == 0.0);

    for (double alpha : {-1.0, 1.0, 3.0}) {
        auto big = taylor_compare(perturbed(0.5), q, alpha, rule);
        auto small = taylor_compare(perturbed(0.25), q, alpha, rule);
        // h(u) = eps (u - 1/2): the quadratic term is eps^2/24, the cubic
        // quadrature is odd and cancels, the remainder is fourth order
        CHECK(big.quadratic == Catch::Approx(0.25 / 24.0).epsilon(1e-10));
        CHECK(small.quadratic == Catch::Approx(0.0625 / 24.0).epsilon(1e-10));
        CHECK(std::abs(big.cubic) <= 1e-12);
        double ratio = big.remainder / small.remainder;
        CHECK(ratio > 12.0);
        CHECK(ratio < 20.0);
    }

    // the cubic coefficient vanishes identically at alpha = 3
    auto flat3 = taylor_compare(perturbed(0.5), q, 3.0, rule);
    CHECK(flat3.cubic == 0.0);
}

TEST_CASE("entropy derivatives along a potential flow") {
    auto rule = gauss_legendre_unit(256);
    auto gauss = distribution::gaussian(0.0, 1.0);

    // second derivative 1: the flow rescales the qdf by (1 + t)
    auto quad = poly_potential({0.0, 0.0, 0.5});
    auto series = entropy_derivative_series(gauss, quad, 3, rule);
    REQUIRE(series.size() == 3);
    CHECK(series[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(series[1] == Catch::Approx(-1.0).margin(1e-12));
    CHECK(series[2] == Catch::Approx(2.0).margin(1e-12));

    auto linear = poly_potential({0.0, 1.0});
    for (double v : entropy_derivative_series(gauss, linear, 4, rule))
        CHECK(v == 0.0);

    // order 3 is the diagonal of the cubic tensor
    auto cubic = poly_potential({0.0, 0.0, 0.0, 1.0 / 6.0});
    auto s3 = entropy_derivative_series(gauss, cubic, 3, rule);
    CHECK(s3[2] == Catch::Approx(tensor_form(gauss, cubic, cubic, cubic, rule))
                       .margin(1e-10));

    CHECK_THROWS_AS(entropy_derivative_series(gauss, quad, 0, rule), error);
    CHECK_THROWS_AS(entropy_derivative_series(gauss, quad, 7, rule), error);
}

TEST_CASE("entropy derivatives agree with finite differences of the flowed entropy") {
    auto rule = gauss_legendre_unit(256);
    auto gauss = distribution::gaussian(0.0, 1.0);

    // flow by x^2/2: qdf scales by (1 + t), entropy gains log(1 + t); quadrature
    // on the fixed rule makes the discretization error cancel between stencils
    auto entropy_at = [&](double t) {
        return integrate_unit(
            [&](double u) { return std::log((1.0 + t) * gauss.qdf(u)); }, rule);
    };
    double h = 2e-3;
    double f[5];
    for (int k = -2; k <= 2; ++k)
        f[k + 2] = entropy_at(k * h);
    double d1 = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
    double d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
    double d3 = (-f[0] + 2.0 * f[1] - 2.0 * f[3] + f[4]) / (2.0 * h * h * h);

    auto quad = poly_potential({0.0, 0.0, 0.5});
    auto series = entropy_derivative_series(gauss, quad, 3, rule);
    CHECK(series[0] == Catch::Approx(d1).margin(1e-4));
    CHECK(series[1] == Catch::Approx(d2).margin(1e-4));
    CHECK(series[2] == Catch::Approx(d3).margin(1e-4));

    // a non-constant second derivative: flow by x^3/6 tilts the qdf by (1 + t x)
    auto entropy_tilt = [&](double t) {
        return integrate_unit(
            [&](double u) {
                return std::log1p(t * gauss.quantile(u)) + std::log(gauss.qdf(u));
            },
            rule);
    };
    for (int k = -2; k <= 2; ++k)
        f[k + 2] = entropy_tilt(k * h);
    d1 = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
    d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
    d3 = (-f[0] + 2.0 * f[1] - 2.0 * f[3] + f[4]) / (2.0 * h * h * h);

    auto cubic = poly_potential({0.0, 0.0, 0.0, 1.0 / 6.0});
    auto tilt = entropy_derivative_series(gauss, cubic, 3, rule);
    CHECK(tilt[0] == Catch::Approx(d1).margin(1e-4));
    CHECK(tilt[1] == Catch::Approx(d2).margin(1e-4));
    CHECK(tilt[2] == Catch::Approx(d3).margin(1e-4));
}
