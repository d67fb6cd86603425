#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>

#include "tdiv/distributions.hpp"
#include "tdiv/exec.hpp"
#include "tdiv/quadrature.hpp"

namespace tdiv {

struct alpha_param {
    double alpha = 1.0;
    double small_alpha_threshold = 1e-4; // the alpha = 0 branch is used exactly below this

    bool zero_branch() const { return std::abs(alpha) < small_alpha_threshold; }
};

enum class div_method { qdf_quadrature, entropy_form, closed_form, monte_carlo };
const char* to_string(div_method m);

struct divergence_result {
    double value = 0.0;          // nonnegative; tiny negative rounding is clamped to 0
    double error_estimate = 0.0; // quadrature refinement gap, or Monte Carlo standard error
    div_method method = div_method::qdf_quadrature;
    bool clamped = false;        // a value in [-1e-12, 0) was reported as 0
};

// f_{T,alpha}(z) = (z^alpha - alpha*log z - 1)/alpha^2, with the alpha = 0 branch
// (log z)^2/2 + alpha*(log z)^3/6 below the small-alpha threshold
double f_transport_alpha(double z, const alpha_param& alpha);

// integral of f_transport_alpha over the pointwise QDF ratio Q'_p/Q'_q
divergence_result transport_alpha_div(const distribution& p, const distribution& q,
                                      const alpha_param& alpha, const quadrature_rule& rule,
                                      exec_mode mode = default_exec_mode());

// same value through the entropy decomposition
// (1/alpha)(-H(p) + H(q)) + (1/alpha^2) * integral(ratio^alpha - 1);
// every term is quadratured in the u-coordinate on the given rule
divergence_result transport_alpha_div_entropy_form(const distribution& p, const distribution& q,
                                                   const alpha_param& alpha,
                                                   const quadrature_rule& rule,
                                                   exec_mode mode = default_exec_mode());

// optimal transport map T(x) = Q_p(F_q(x))
double transport_map(const distribution& p, const distribution& q, double x);

// max pushforward residual |p(T(x))*T'(x)/q(x) - 1| over 16 equispaced quantile
// levels, with T' by central difference (an independent path around the identity)
double monge_ampere_residual(const distribution& p, const distribution& q);

struct w2_result {
    bool infinite = false;
    double value = 0.0;
    double error_estimate = 0.0;
};

// sqrt of the quantile L2 distance; infinite flag when either second moment diverges
w2_result wasserstein2(const distribution& p, const distribution& q, const quadrature_rule& rule,
                       exec_mode mode = default_exec_mode());

// discrete alpha-divergence on the positive octant,
// D_alpha(m||n) = sum_i f_alpha(m_i/n_i) * n_i with the three-branch f_alpha
double classical_alpha_div(std::span<const double> m, std::span<const double> n, double alpha);

// divergence between pushforwards of a common reference by two monotone maps:
// E_Z f_{T,alpha}(dG_x/dz / dG_y/dz), Z ~ ref. Default is quadrature over
// Z = Q_ref(u); with mc_n the Monte Carlo path is used, its standard error
// reported, and agreement with quadrature enforced at three standard errors.
divergence_result generative_div(const monotone_map& map_x, const monotone_map& map_y,
                                 const distribution& ref, const alpha_param& alpha,
                                 const quadrature_rule& rule,
                                 std::optional<std::int64_t> mc_n = std::nullopt,
                                 std::uint64_t seed = 0, exec_mode mode = default_exec_mode());

// cross term of the generalized Pythagorean identity:
// D(p||q) + D(q||r) - D(p||r), as the cosine-law integral
double orthogonality_defect(const distribution& p, const distribution& q, const distribution& r,
                            const alpha_param& alpha, const quadrature_rule& rule,
                            exec_mode mode = default_exec_mode());

} // namespace tdiv
