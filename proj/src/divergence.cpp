#include "tdiv/divergence.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tdiv/errors.hpp"
#include "tdiv/random.hpp"

namespace tdiv {

const char* to_string(div_method m) {
    switch (m) {
    case div_method::qdf_quadrature: return "qdf_quadrature";
    case div_method::entropy_form: return "entropy_form";
    case div_method::closed_form: return "closed_form";
    case div_method::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

double f_transport_alpha(double z, const alpha_param& alpha) {
    if (!std::isfinite(alpha.alpha))
        throw error(error_kind::domain, "f_transport_alpha: alpha must be finite");
    if (!(z > 0.0))
        throw error(error_kind::domain, "f_transport_alpha: z must be > 0");
    double L = std::log(z);
    if (alpha.zero_branch())
        return 0.5 * L * L + alpha.alpha * L * L * L / 6.0;
    double a = alpha.alpha;
    return (std::pow(z, a) - a * L - 1.0) / (a * a);
}

namespace {

divergence_result finish(integral_estimate est, div_method method) {
    divergence_result r;
    r.error_estimate = est.error_estimate;
    r.method = method;
    r.value = est.value;
    if (r.value < 0.0) {
        if (r.value >= -1e-12) {
            // provably nonnegative functional; this is pure rounding
            r.value = 0.0;
            r.clamped = true;
        } else {
            throw error(error_kind::numerical,
                        "divergence: negative value " + std::to_string(r.value) +
                            " beyond the rounding clamp");
        }
    }
    return r;
}

} // namespace

divergence_result transport_alpha_div(const distribution& p, const distribution& q,
                                      const alpha_param& alpha, const quadrature_rule& rule,
                                      exec_mode mode) {
    auto integrand = [&](double u) { return f_transport_alpha(p.qdf(u) / q.qdf(u), alpha); };
    return finish(integrate_refined(integrand, rule, mode), div_method::qdf_quadrature);
}

divergence_result transport_alpha_div_entropy_form(const distribution& p, const distribution& q,
                                                   const alpha_param& alpha,
                                                   const quadrature_rule& rule, exec_mode mode) {
    if (alpha.zero_branch())
        throw error(error_kind::domain,
                    "entropy form: undefined at alpha = 0 (below the small-alpha threshold)");
    double a = alpha.alpha;
    // (1/a)(-H(p) + H(q)) + (1/a^2) Int (ratio^a - 1), H(.) = Int log Q' du,
    // every integral on the same rule
    auto integrand = [&](double u) {
        double qp = p.qdf(u), qq = q.qdf(u);
        double ratio = qp / qq;
        return (std::pow(ratio, a) - 1.0) / (a * a) -
               (std::log(qp) - std::log(qq)) / a;
    };
    return finish(integrate_refined(integrand, rule, mode), div_method::entropy_form);
}

double transport_map(const distribution& p, const distribution& q, double x) {
    return p.quantile(q.cdf(x));
}

double monge_ampere_residual(const distribution& p, const distribution& q) {
    u_interval dom = q.u_domain();
    double lo = std::max(dom.lo, 1e-6), hi = std::min(dom.hi, 1.0 - 1e-6);
    double worst = 0.0;
    for (int k = 1; k <= 16; ++k) {
        double u = lo + (hi - lo) * k / 17.0;
        double x = q.quantile(u);
        double h = 1e-5 * std::max(1.0, std::abs(x));
        double tp = transport_map(p, q, x + h), tm = transport_map(p, q, x - h);
        double t_prime = (tp - tm) / (2.0 * h);
        double res = std::abs(p.density(transport_map(p, q, x)) * t_prime / q.density(x) - 1.0);
        worst = std::max(worst, res);
    }
    return worst;
}

w2_result wasserstein2(const distribution& p, const distribution& q, const quadrature_rule& rule,
                       exec_mode mode) {
    if (!p.second_moment() || !q.second_moment())
        return {true, 0.0, 0.0};
    auto integrand = [&](double u) {
        double d = p.quantile(u) - q.quantile(u);
        return d * d;
    };
    integral_estimate est = integrate_refined(integrand, rule, mode);
    double w = std::sqrt(std::max(est.value, 0.0));
    // d sqrt: first-order propagation of the refinement gap
    double err = w > 0.0 ? 0.5 * est.error_estimate / w : std::sqrt(est.error_estimate);
    return {false, w, err};
}

double classical_alpha_div(std::span<const double> m, std::span<const double> n, double alpha) {
    if (m.size() != n.size())
        throw error(error_kind::domain, "classical_alpha_div: length mismatch");
    if (m.empty())
        throw error(error_kind::domain, "classical_alpha_div: empty vectors");
    if (!std::isfinite(alpha))
        throw error(error_kind::domain, "classical_alpha_div: alpha must be finite");
    std::vector<double> terms(m.size());
    for (size_t i = 0; i < m.size(); ++i) {
        if (!(m[i] > 0.0) || !(n[i] > 0.0))
            throw error(error_kind::domain, "classical_alpha_div: entries must be > 0");
        double z = m[i] / n[i];
        double f;
        if (alpha == 1.0)
            f = z * std::log(z) - (z - 1.0);
        else if (alpha == -1.0)
            f = -std::log(z) + (z - 1.0);
        else
            f = 4.0 / (1.0 - alpha * alpha) *
                (0.5 * (1.0 - alpha) + 0.5 * (1.0 + alpha) * z -
                 std::pow(z, 0.5 * (1.0 + alpha)));
        terms[i] = f * n[i];
    }
    return neumaier_sum(terms);
}

divergence_result generative_div(const monotone_map& map_x, const monotone_map& map_y,
                                 const distribution& ref, const alpha_param& alpha,
                                 const quadrature_rule& rule, std::optional<std::int64_t> mc_n,
                                 std::uint64_t seed, exec_mode mode) {
    auto ratio_at = [&](double z) { return map_x.derivative(z) / map_y.derivative(z); };
    auto integrand = [&](double u) {
        return f_transport_alpha(ratio_at(ref.quantile(u)), alpha);
    };
    divergence_result quad = finish(integrate_refined(integrand, rule, mode),
                                    div_method::qdf_quadrature);
    if (!mc_n)
        return quad;

    std::int64_t n = *mc_n;
    if (n < 2)
        throw error(error_kind::domain, "generative_div: mc_n must be >= 2");
    rng64 rng(seed);
    std::vector<double> vals(static_cast<size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        vals[static_cast<size_t>(i)] =
            f_transport_alpha(ratio_at(ref.quantile(rng.uniform_open())), alpha);
    double mean = neumaier_sum(vals) / static_cast<double>(n);
    std::vector<double> sq(vals.size());
    for (size_t i = 0; i < vals.size(); ++i) {
        double d = vals[i] - mean;
        sq[i] = d * d;
    }
    double var = neumaier_sum(sq) / static_cast<double>(n - 1);
    double se = std::sqrt(var / static_cast<double>(n));

    double gap = std::abs(mean - quad.value);
    if (gap > 3.0 * se + quad.error_estimate + 1e-12)
        throw error(error_kind::numerical,
                    "generative_div: Monte Carlo and quadrature disagree beyond 3 standard "
                    "errors (gap " + std::to_string(gap) + ", se " + std::to_string(se) + ")");

    divergence_result r;
    r.method = div_method::monte_carlo;
    r.error_estimate = se;
    r.value = mean;
    if (r.value < 0.0 && r.value >= -1e-12) {
        r.value = 0.0;
        r.clamped = true;
    }
    return r;
}

double orthogonality_defect(const distribution& p, const distribution& q, const distribution& r,
                            const alpha_param& alpha, const quadrature_rule& rule,
                            exec_mode mode) {
    if (alpha.zero_branch()) {
        auto integrand = [&](double u) {
            double qq = q.qdf(u);
            return std::log(p.qdf(u) / qq) * std::log(r.qdf(u) / qq);
        };
        return integrate_unit(integrand, rule, mode);
    }
    double a = alpha.alpha;
    auto integrand = [&](double u) {
        double A = std::pow(p.qdf(u), a);
        double B = std::pow(q.qdf(u), a);
        double C = std::pow(r.qdf(u), a);
        return (A - B) * (1.0 / B - 1.0 / C);
    };
    return integrate_unit(integrand, rule, mode) / (a * a);
}

} // namespace tdiv
