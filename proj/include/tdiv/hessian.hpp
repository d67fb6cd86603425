#pragma once

#include <span>
#include <vector>

#include "tdiv/distributions.hpp"
#include "tdiv/exec.hpp"
#include "tdiv/quadrature.hpp"

namespace tdiv {

// potential function on a spatial grid; operations consume only the derivative
// columns (the potential itself is defined up to a constant). Values between
// nodes come from linear interpolation, values outside from linear continuation.
struct potential_grid {
    std::vector<double> x_nodes; // strictly increasing
    std::vector<double> phi;
    std::vector<double> dphi;
    std::vector<double> d2phi;
    std::vector<double> d3phi; // empty when the third derivative is unavailable

    bool has_d3() const { return !d3phi.empty(); }
};

// potential with exact analytic derivatives of sum_k coeffs[k] * x^k on x_nodes
potential_grid make_polynomial_potential(std::span<const double> coeffs,
                                         std::span<const double> x_nodes);

// bilinear metric value: integral of phi_a'' * phi_b'' weighted by p, evaluated
// in the quantile coordinate (x = Q_p(u) turns the weight p dx into du)
double hessian_form(const distribution& p, const potential_grid& a, const potential_grid& b,
                    const quadrature_rule& rule, exec_mode mode = default_exec_mode());

// trilinear tensor value: 2 * integral of phi_a'' * phi_b'' * phi_c'' weighted by p
double tensor_form(const distribution& p, const potential_grid& a, const potential_grid& b,
                   const potential_grid& c, const quadrature_rule& rule,
                   exec_mode mode = default_exec_mode());

// carre-du-champ values at a point: gamma1 = (phi')^2, gamma2 = (phi'')^2, and
// gamma3 by the operator composition gamma2(gamma1, phi) - gamma1(gamma2, phi)
// alongside its closed form 2 (phi'')^3; the two must agree
struct gamma_values {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma3_composed = 0.0;
    double gamma3_direct = 0.0;
};
gamma_values gamma_operators(const potential_grid& a, double x);

// potential whose gradient flow carries q to p: phi'(x) = T(x) - x with
// T = Q_p . F_q, phi''(x) = Q'_p(u)/Q'_q(u) - 1 at u = F_q(x), phi by
// trapezoid integration with phi(x_grid[0]) = 0
potential_grid potential_from_pair(const distribution& p, const distribution& q,
                                   std::span<const double> x_grid);

// divergence split into its quadratic and cubic expansion terms around q plus
// the leftover: quadratic = (1/2) integral h^2, cubic = ((alpha-3)/6) integral h^3
// with h = Q'_p/Q'_q - 1, remainder = D - quadratic - cubic. Computed both from
// the h-integrals and from hessian_form/tensor_form with the induced potential;
// the two routes must agree to 1e-10.
struct tensor_value {
    double quadratic = 0.0;
    double cubic = 0.0;
    double remainder = 0.0;
};
tensor_value taylor_compare(const distribution& p, const distribution& q, double alpha,
                            const quadrature_rule& rule);

// d^n/dt^n of the differential entropy along the flow generated by the potential,
// at t = 0: (-1)^(n+1) (n-1)! * integral (phi'')^n p dx, for n = 1..n_max (<= 6)
std::vector<double> entropy_derivative_series(const distribution& p, const potential_grid& a,
                                              int n_max, const quadrature_rule& rule);

} // namespace tdiv
