#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tdiv/errors.hpp"
#include "tdiv/interp.hpp"

using namespace tdiv;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
        xs[i] = a + (b - a) * i / (n - 1.0);
    return xs;
}

} // namespace

TEST_CASE("linear data reproduces exactly") {
    auto xs = linspace(-2.0, 3.0, 11);
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        ys[i] = 4.0 - 0.7 * xs[i];
    pchip f(xs, ys);
    for (double x : {-2.0, -1.97, 0.0, 1.234, 2.999, 3.0})
        CHECK(f.eval(x) == Catch::Approx(4.0 - 0.7 * x).margin(1e-14));
    CHECK(f.integral(-2.0, 3.0) == Catch::Approx(4.0 * 5.0 - 0.35 * (9.0 - 4.0)).margin(1e-12));
}

TEST_CASE("interpolant passes through the data") {
    std::vector<double> xs{0.0, 0.3, 0.55, 0.7, 1.0};
    std::vector<double> ys{1.0, 2.5, 2.0, 0.5, 3.0};
    pchip f(xs, ys);
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(f.eval(xs[i]) == ys[i]);
}

TEST_CASE("positive data stays positive") {
    std::vector<double> xs{0.0, 0.1, 0.2, 0.5, 0.6, 1.0};
    std::vector<double> ys{5.0, 0.01, 4.0, 0.02, 3.0, 0.05};
    pchip f(xs, ys);
    for (int i = 0; i <= 1000; ++i) {
        double x = i / 1000.0;
        CHECK(f.eval(x) > 0.0);
    }
}

TEST_CASE("monotone data stays monotone") {
    std::vector<double> xs{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    std::vector<double> ys{0.0, 0.01, 0.5, 0.51, 2.0, 2.01};
    pchip f(xs, ys);
    double prev = f.eval(0.0);
    for (int i = 1; i <= 500; ++i) {
        double v = f.eval(i / 500.0);
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
}

TEST_CASE("antiderivative inverts back to the argument") {
    auto xs = linspace(0.0, 1.0, 33);
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        ys[i] = 1.0 + std::sin(3.0 * xs[i]) * 0.4 + 0.2 * xs[i];
    pchip f(xs, ys);
    for (double x : {0.0, 0.12, 0.5, 0.77, 0.995, 1.0}) {
        double a = f.antiderivative(x);
        CHECK(f.invert_antiderivative(a) == Catch::Approx(x).margin(1e-12));
    }
}

TEST_CASE("smooth function is approximated at fourth order") {
    double worst_coarse = 0.0, worst_fine = 0.0;
    for (int n : {17, 33}) {
        auto xs = linspace(0.0, 1.0, n);
        std::vector<double> ys(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            ys[i] = std::exp(xs[i]);
        pchip f(xs, ys);
        double worst = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            double x = i / 2000.0;
            worst = std::max(worst, std::abs(f.eval(x) - std::exp(x)));
        }
        (n == 17 ? worst_coarse : worst_fine) = worst;
    }
    CHECK(worst_fine < worst_coarse);
    CHECK(worst_fine < 1e-4);
}

TEST_CASE("bad construction is rejected") {
    CHECK_THROWS_AS(pchip({0.0}, {1.0}), error);
    CHECK_THROWS_AS(pchip({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}), error);
    CHECK_THROWS_AS(pchip({0.0, 1.0}, {1.0}), error);
    pchip f({0.0, 1.0}, {1.0, 2.0});
    CHECK_THROWS_AS(f.eval(-0.1), error);
    CHECK_THROWS_AS(f.eval(1.1), error);
}

TEST_CASE("extrapolation continues the end slopes linearly") {
    auto xs = linspace(0.0, 1.0, 5);
    std::vector<double> ys{0.0, 0.25, 0.5, 0.75, 1.0};
    pchip f(xs, ys);
    CHECK(f.eval_extrapolate(-1.0) == Catch::Approx(-1.0).margin(1e-12));
    CHECK(f.eval_extrapolate(2.0) == Catch::Approx(2.0).margin(1e-12));
    CHECK(f.eval_extrapolate(0.5) == Catch::Approx(0.5).margin(1e-12));
}
