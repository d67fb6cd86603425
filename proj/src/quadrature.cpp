#include "tdiv/quadrature.hpp"

#include <cmath>
#include <string>

#include "tdiv/errors.hpp"

namespace tdiv {

exec_mode default_exec_mode() {
#ifdef _OPENMP
    return exec_mode::parallel;
#else
    return exec_mode::serial;
#endif
}

quadrature_rule gauss_legendre_unit(int n, double clip_delta) {
    if (n < 1)
        throw error(error_kind::domain, "gauss_legendre_unit: n must be >= 1");
    if (!(clip_delta >= 0.0 && clip_delta < 0.5))
        throw error(error_kind::domain, "gauss_legendre_unit: clip_delta must be in [0, 0.5)");

    // roots of P_n on (-1,1); compute the lower half, mirror the rest
    std::vector<double> x(n), w(n);
    int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
            double step = p1 / dp;
            xi -= step;
            if (std::abs(step) < 1e-14)
                break;
        }
        // one clean evaluation of P'_n at the converged root for the weight
        {
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
        }
        x[i] = -std::abs(xi); // enforce the lower half exactly
        w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
        x[n - 1 - i] = -x[i];
        w[n - 1 - i] = w[i];
    }
    if (n % 2 == 1)
        x[n / 2] = 0.0;

    quadrature_rule rule;
    rule.clip_delta = clip_delta;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double scale = (1.0 - 2.0 * clip_delta) / 2.0;
    double mid = 0.5;
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + scale * x[i];
        rule.weights[i] = scale * w[i];
    }
    return rule;
}

double neumaier_sum(std::span<const double> xs) {
    double sum = 0.0, comp = 0.0;
    for (double v : xs) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

namespace {

void eval_nodes(const std::function<double(double)>& f, const quadrature_rule& rule,
                exec_mode mode, std::vector<double>& terms) {
    int n = static_cast<int>(rule.nodes.size());
    terms.resize(n);
    if (mode == exec_mode::parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i)
            terms[i] = rule.weights[i] * f(rule.nodes[i]);
    } else {
        for (int i = 0; i < n; ++i)
            terms[i] = rule.weights[i] * f(rule.nodes[i]);
    }
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(terms[i]))
            throw error(error_kind::numerical,
                        "integrate_unit: non-finite integrand at u = " + std::to_string(rule.nodes[i]));
}

} // namespace

double integrate_unit(const std::function<double(double)>& f, const quadrature_rule& rule,
                      exec_mode mode) {
    std::vector<double> terms;
    eval_nodes(f, rule, mode, terms);
    return neumaier_sum(terms);
}

integral_estimate integrate_refined(const std::function<double(double)>& f,
                                    const quadrature_rule& rule, exec_mode mode) {
    double coarse = integrate_unit(f, rule, mode);
    quadrature_rule fine = gauss_legendre_unit(static_cast<int>(rule.nodes.size()) * 2,
                                               rule.clip_delta);
    double refined = integrate_unit(f, fine, mode);
    return {coarse, std::abs(refined - coarse)};
}

} // namespace tdiv
