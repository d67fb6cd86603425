#include "tdiv/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tdiv/divergence.hpp"
#include "tdiv/errors.hpp"

namespace tdiv {

namespace {

void check_grid(const potential_grid& g, const char* what) {
    const std::size_t n = g.x_nodes.size();
    if (n < 2)
        throw error(error_kind::domain, std::string(what) + ": needs at least 2 nodes");
    if (g.phi.size() != n || g.dphi.size() != n || g.d2phi.size() != n ||
        (g.has_d3() && g.d3phi.size() != n))
        throw error(error_kind::domain, std::string(what) + ": column lengths disagree");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(g.x_nodes[i]) || !std::isfinite(g.dphi[i]) ||
            !std::isfinite(g.d2phi[i]))
            throw error(error_kind::domain, std::string(what) + ": non-finite entry");
        if (i > 0 && g.x_nodes[i] <= g.x_nodes[i - 1])
            throw error(error_kind::domain, std::string(what) + ": x-grid not increasing");
    }
}

void check_shared_grid(const potential_grid& a, const potential_grid& b) {
    if (a.x_nodes.size() != b.x_nodes.size() ||
        !std::equal(a.x_nodes.begin(), a.x_nodes.end(), b.x_nodes.begin()))
        throw error(error_kind::domain, "potential grids do not share x-nodes");
}

// piecewise-linear read of a derivative column, continued linearly outside the
// grid with the end-cell slope; node hits return the stored value exactly
double read_column(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    const std::size_t n = xs.size();
    if (x <= xs.front()) {
        double s = (ys[1] - ys[0]) / (xs[1] - xs[0]);
        return x == xs.front() ? ys.front() : ys.front() + s * (x - xs.front());
    }
    if (x >= xs.back()) {
        double s = (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
        return x == xs.back() ? ys.back() : ys.back() + s * (x - xs.back());
    }
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    if (x == xs[i])
        return ys[i];
    double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + w * (ys[i + 1] - ys[i]);
}

double d2_at(const potential_grid& g, double x) { return read_column(g.x_nodes, g.d2phi, x); }

} // namespace

potential_grid make_polynomial_potential(std::span<const double> coeffs,
                                         std::span<const double> x_nodes) {
    if (coeffs.empty())
        throw error(error_kind::domain, "polynomial potential needs at least one coefficient");
    if (x_nodes.size() < 2)
        throw error(error_kind::domain, "polynomial potential needs at least 2 nodes");
    for (double c : coeffs)
        if (!std::isfinite(c))
            throw error(error_kind::domain, "polynomial potential coefficient not finite");

    // derivative coefficient rows: poly, poly', poly'', poly'''
    std::vector<std::vector<double>> rows(4);
    rows[0].assign(coeffs.begin(), coeffs.end());
    for (int d = 1; d < 4; ++d) {
        const std::vector<double>& prev = rows[static_cast<std::size_t>(d - 1)];
        std::vector<double>& cur = rows[static_cast<std::size_t>(d)];
        if (prev.size() <= 1) {
            cur.assign(1, 0.0);
            continue;
        }
        cur.resize(prev.size() - 1);
        for (std::size_t k = 1; k < prev.size(); ++k)
            cur[k - 1] = prev[k] * static_cast<double>(k);
    }
    auto horner = [](const std::vector<double>& cs, double x) {
        double v = 0.0;
        for (std::size_t k = cs.size(); k-- > 0;)
            v = v * x + cs[k];
        return v;
    };

    potential_grid g;
    g.x_nodes.assign(x_nodes.begin(), x_nodes.end());
    const std::size_t n = g.x_nodes.size();
    g.phi.resize(n);
    g.dphi.resize(n);
    g.d2phi.resize(n);
    g.d3phi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && g.x_nodes[i] <= g.x_nodes[i - 1])
            throw error(error_kind::domain, "polynomial potential x-grid not increasing");
        double x = g.x_nodes[i];
        g.phi[i] = horner(rows[0], x);
        g.dphi[i] = horner(rows[1], x);
        g.d2phi[i] = horner(rows[2], x);
        g.d3phi[i] = horner(rows[3], x);
    }
    return g;
}

double hessian_form(const distribution& p, const potential_grid& a, const potential_grid& b,
                    const quadrature_rule& rule, exec_mode mode) {
    check_grid(a, "hessian_form");
    check_grid(b, "hessian_form");
    check_shared_grid(a, b);
    return integrate_unit(
        [&](double u) {
            double x = p.quantile(u);
            return d2_at(a, x) * d2_at(b, x);
        },
        rule, mode);
}

double tensor_form(const distribution& p, const potential_grid& a, const potential_grid& b,
                   const potential_grid& c, const quadrature_rule& rule, exec_mode mode) {
    check_grid(a, "tensor_form");
    check_grid(b, "tensor_form");
    check_grid(c, "tensor_form");
    check_shared_grid(a, b);
    check_shared_grid(a, c);
    return 2.0 * integrate_unit(
                     [&](double u) {
                         double x = p.quantile(u);
                         return d2_at(a, x) * d2_at(b, x) * d2_at(c, x);
                     },
                     rule, mode);
}

gamma_values gamma_operators(const potential_grid& a, double x) {
    check_grid(a, "gamma_operators");
    if (!a.has_d3())
        throw error(error_kind::domain,
                    "gamma_operators needs a third-derivative column for the composed form");
    if (!std::isfinite(x))
        throw error(error_kind::domain, "gamma_operators point must be finite");

    double d1 = read_column(a.x_nodes, a.dphi, x);
    double d2 = read_column(a.x_nodes, a.d2phi, x);
    double d3 = read_column(a.x_nodes, a.d3phi, x);

    gamma_values g;
    g.gamma1 = d1 * d1;
    g.gamma2 = d2 * d2;
    // gamma2(gamma1(phi,phi), phi) = ((phi'^2))'' * phi'' = 2(phi''^2 + phi' phi''') phi''
    // gamma1(gamma2(phi,phi), phi) = ((phi''^2))' * phi'  = 2 phi'' phi''' phi'
    double a2 = 2.0 * (d2 * d2 + d1 * d3);
    double b1 = 2.0 * d2 * d3;
    g.gamma3_composed = a2 * d2 - b1 * d1;
    g.gamma3_direct = 2.0 * d2 * d2 * d2;
    double gap = std::abs(g.gamma3_composed - g.gamma3_direct);
    if (gap > 1e-10 * std::max(1.0, std::abs(g.gamma3_direct)))
        throw error(error_kind::numerical, "gamma3 composition disagrees with its closed form");
    return g;
}

potential_grid potential_from_pair(const distribution& p, const distribution& q,
                                   std::span<const double> x_grid) {
    if (x_grid.size() < 2)
        throw error(error_kind::domain, "potential_from_pair needs at least 2 grid points");
    potential_grid g;
    g.x_nodes.assign(x_grid.begin(), x_grid.end());
    const std::size_t n = g.x_nodes.size();
    g.phi.resize(n);
    g.dphi.resize(n);
    g.d2phi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && g.x_nodes[i] <= g.x_nodes[i - 1])
            throw error(error_kind::domain, "potential_from_pair x-grid not increasing");
        double x = g.x_nodes[i];
        double u = q.cdf(x);
        g.dphi[i] = p.quantile(u) - x;
        g.d2phi[i] = p.qdf(u) / q.qdf(u) - 1.0;
        if (!std::isfinite(g.dphi[i]) || !std::isfinite(g.d2phi[i]))
            throw error(error_kind::numerical,
                        "potential_from_pair produced a non-finite value at x = " +
                            std::to_string(x));
    }
    g.phi[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        g.phi[i] = g.phi[i - 1] + 0.5 * (g.dphi[i - 1] + g.dphi[i]) *
                                      (g.x_nodes[i] - g.x_nodes[i - 1]);
    return g;
}

tensor_value taylor_compare(const distribution& p, const distribution& q, double alpha,
                            const quadrature_rule& rule) {
    if (!std::isfinite(alpha))
        throw error(error_kind::domain, "taylor_compare alpha must be finite");
    if (rule.nodes.empty())
        throw error(error_kind::domain, "taylor_compare needs a non-empty rule");

    // direct route: h(u) = Q'_p/Q'_q - 1 at the rule nodes
    auto h_at = [&](double u) { return p.qdf(u) / q.qdf(u) - 1.0; };
    double i2 = integrate_unit([&](double u) { double h = h_at(u); return h * h; }, rule);
    double i3 = integrate_unit([&](double u) { double h = h_at(u); return h * h * h; }, rule);
    double quadratic = 0.5 * i2;
    double cubic = (alpha - 3.0) / 6.0 * i3;

    // form route: the induced potential on the grid x = Q_q(u) reproduces h at
    // every node, so the metric/tensor quadratures must match the h-integrals
    std::vector<double> x_grid(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        x_grid[i] = q.quantile(rule.nodes[i]);
    potential_grid phi = potential_from_pair(p, q, x_grid);
    double quad_form = 0.5 * hessian_form(q, phi, phi, rule);
    double cubic_form = (alpha - 3.0) / 12.0 * tensor_form(q, phi, phi, phi, rule);
    double scale = std::max({1.0, std::abs(quadratic), std::abs(cubic)});
    if (std::abs(quad_form - quadratic) > 1e-10 * scale ||
        std::abs(cubic_form - cubic) > 1e-10 * scale)
        throw error(error_kind::numerical,
                    "taylor_compare routes disagree beyond 1e-10: quadratic " +
                        std::to_string(quadratic) + " vs " + std::to_string(quad_form));

    double d = transport_alpha_div(p, q, alpha_param{alpha}, rule).value;
    tensor_value out;
    out.quadratic = quadratic;
    out.cubic = cubic;
    out.remainder = d - quadratic - cubic;
    return out;
}

std::vector<double> entropy_derivative_series(const distribution& p, const potential_grid& a,
                                              int n_max, const quadrature_rule& rule) {
    check_grid(a, "entropy_derivative_series");
    if (n_max < 1 || n_max > 6)
        throw error(error_kind::domain, "entropy derivative order must lie in 1..6");
    std::vector<double> out(static_cast<std::size_t>(n_max));
    double factorial = 1.0; // (n-1)!
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1)
            factorial *= static_cast<double>(n - 1);
        double integral = integrate_unit(
            [&](double u) { return std::pow(d2_at(a, p.quantile(u)), n); }, rule);
        double sign = (n % 2 == 1) ? 1.0 : -1.0;
        out[static_cast<std::size_t>(n - 1)] = sign * factorial * integral;
    }
    return out;
}

} // namespace tdiv
