#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tdiv/exec.hpp"

namespace tdiv {

// integration rule over [clip_delta, 1 - clip_delta]
struct quadrature_rule {
    std::vector<double> nodes;   // strictly increasing, strictly inside the window
    std::vector<double> weights; // positive, sum to 1 - 2*clip_delta
    double clip_delta = 0.0;
};

// n-point Gauss-Legendre rule mapped onto [clip_delta, 1 - clip_delta];
// nodes by Newton iteration on the Legendre recurrence, converged to 1e-14
quadrature_rule gauss_legendre_unit(int n, double clip_delta = 0.0);

// Neumaier compensated sum; the single reduction primitive used by all kernels
double neumaier_sum(std::span<const double> xs);

// sum of weights[i] * f(nodes[i]); a non-finite evaluation raises a numerical
// error naming the offending node
double integrate_unit(const std::function<double(double)>& f, const quadrature_rule& rule,
                      exec_mode mode = default_exec_mode());

struct integral_estimate {
    double value = 0.0;          // integral on the given rule
    double error_estimate = 0.0; // refinement gap |I(2n) - I(n)|
};

// integral on the given rule plus the refinement gap against the doubled rule
integral_estimate integrate_refined(const std::function<double(double)>& f,
                                    const quadrature_rule& rule,
                                    exec_mode mode = default_exec_mode());

} // namespace tdiv
