#include "tdiv/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "tdiv/errors.hpp"
#include "tdiv/quadrature.hpp"

namespace tdiv {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, error_kind k, const std::string& msg) {
    if (!ok)
        throw error(k, msg);
}

// internal rule for moments/entropy of grid-backed specs
quadrature_rule moment_rule_for(double lo, double hi) {
    quadrature_rule rule = gauss_legendre_unit(256, 0.0);
    double len = hi - lo;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        rule.nodes[i] = lo + len * rule.nodes[i];
        rule.weights[i] = len * rule.weights[i];
    }
    return rule;
}

} // namespace

// ---------------------------------------------------------------- gaussian quantile

double gaussian_density_unit(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

double gaussian_cdf_unit(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double gaussian_quantile_unit(double u) {
    require(u > 0.0 && u < 1.0, error_kind::domain,
            "gaussian_quantile: u must lie strictly inside (0,1)");

    // rational approximation in three regions, then one Halley refinement on the CDF
    static const double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (u < p_low) {
        double q = std::sqrt(-2.0 * std::log(u));
        x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    } else if (u <= 1.0 - p_low) {
        double q = u - 0.5, r = q * q;
        x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
            (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - u));
        x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    }

    double e = gaussian_cdf_unit(x) - u;
    double un = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
    x -= un / (1.0 + 0.5 * x * un);
    return x;
}

// ---------------------------------------------------------------- monotone_map

monotone_map monotone_map::affine(double a, double b) {
    require(std::isfinite(a) && std::isfinite(b) && a > 0.0, error_kind::spec,
            "monotone_map: affine slope must be finite and > 0");
    monotone_map m;
    m.kind_ = kind::affine;
    m.a_ = a;
    m.b_ = b;
    return m;
}

monotone_map monotone_map::grid(std::vector<double> z_nodes, std::vector<double> g_values) {
    require(z_nodes.size() == g_values.size() && z_nodes.size() >= 2, error_kind::spec,
            "monotone_map: grid needs matching z/g with at least 2 knots");
    for (size_t i = 0; i + 1 < g_values.size(); ++i)
        require(g_values[i] < g_values[i + 1], error_kind::spec,
                "monotone_map: g values must be strictly increasing");
    for (double v : g_values)
        require(std::isfinite(v), error_kind::spec, "monotone_map: non-finite g value");
    monotone_map m;
    m.kind_ = kind::grid;
    m.g_ = pchip(std::move(z_nodes), std::move(g_values));
    return m;
}

double monotone_map::operator()(double z) const {
    if (kind_ == kind::affine)
        return a_ * z + b_;
    return g_.eval_extrapolate(z);
}

double monotone_map::derivative(double z) const {
    if (kind_ == kind::affine)
        return a_;
    // monotone data keeps the interpolant's derivative nonnegative; clamp away exact zeros
    return std::max(g_.derivative(z), 1e-300);
}

double monotone_map::inverse(double x) const {
    if (kind_ == kind::affine)
        return (x - b_) / a_;
    double glo = g_.eval(g_.x_front()), ghi = g_.eval(g_.x_back());
    if (x <= glo)
        return g_.x_front() + (x - glo) / derivative(g_.x_front());
    if (x >= ghi)
        return g_.x_back() + (x - ghi) / derivative(g_.x_back());
    double lo = g_.x_front(), hi = g_.x_back();
    double z = 0.5 * (lo + hi);
    for (int iter = 0; iter < 80; ++iter) {
        double gz = g_.eval(z) - x;
        if (gz > 0.0)
            hi = z;
        else
            lo = z;
        double next = z - gz / derivative(z);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - z) <= 1e-15 * (1.0 + std::abs(z))) {
            z = next;
            break;
        }
        z = next;
    }
    return z;
}

// ---------------------------------------------------------------- distribution impls

struct distribution::impl {
    std::string family_name;
    virtual ~impl() = default;
    virtual double quantile(double u) const = 0;
    virtual double qdf(double u) const = 0;
    virtual double cdf(double x) const = 0;
    virtual double density(double x) const = 0;
    virtual std::optional<double> second_moment() const = 0;
    virtual std::optional<double> mean() const = 0;
    virtual double entropy() const = 0;
    virtual u_interval u_domain() const { return {0.0, 1.0}; }
    virtual bool grid_backed() const { return false; }
};

namespace {

struct gaussian_impl final : distribution::impl {
    double mu, sigma;
    gaussian_impl(double m, double s) : mu(m), sigma(s) { family_name = "gaussian"; }
    double quantile(double u) const override { return mu + sigma * gaussian_quantile_unit(u); }
    double qdf(double u) const override {
        return sigma / gaussian_density_unit(gaussian_quantile_unit(u));
    }
    double cdf(double x) const override { return gaussian_cdf_unit((x - mu) / sigma); }
    double density(double x) const override {
        return gaussian_density_unit((x - mu) / sigma) / sigma;
    }
    std::optional<double> second_moment() const override { return mu * mu + sigma * sigma; }
    std::optional<double> mean() const override { return mu; }
    double entropy() const override {
        return 0.5 * (1.0 + std::log(2.0 * kPi)) + std::log(sigma);
    }
};

struct uniform_impl final : distribution::impl {
    double a, b;
    uniform_impl(double a_, double b_) : a(a_), b(b_) { family_name = "uniform"; }
    double quantile(double u) const override { return a + (b - a) * u; }
    double qdf(double) const override { return b - a; }
    double cdf(double x) const override { return std::clamp((x - a) / (b - a), 0.0, 1.0); }
    double density(double x) const override { return (x >= a && x <= b) ? 1.0 / (b - a) : 0.0; }
    std::optional<double> second_moment() const override { return (a * a + a * b + b * b) / 3.0; }
    std::optional<double> mean() const override { return 0.5 * (a + b); }
    double entropy() const override { return std::log(b - a); }
};

struct exponential_impl final : distribution::impl {
    double rate;
    explicit exponential_impl(double r) : rate(r) { family_name = "exponential"; }
    double quantile(double u) const override { return -std::log1p(-u) / rate; }
    double qdf(double u) const override { return 1.0 / (rate * (1.0 - u)); }
    double cdf(double x) const override { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); }
    double density(double x) const override {
        return x < 0.0 ? 0.0 : rate * std::exp(-rate * x);
    }
    std::optional<double> second_moment() const override { return 2.0 / (rate * rate); }
    std::optional<double> mean() const override { return 1.0 / rate; }
    double entropy() const override { return 1.0 - std::log(rate); }
};

struct cauchy_impl final : distribution::impl {
    double x0, gamma;
    cauchy_impl(double c, double g) : x0(c), gamma(g) { family_name = "cauchy"; }
    // reflection keeps sin/cos of pi*u accurate near both endpoints
    static void sincos_pi(double u, double& s, double& c) {
        if (u > 0.5) {
            s = std::sin(kPi * (1.0 - u));
            c = -std::cos(kPi * (1.0 - u));
        } else {
            s = std::sin(kPi * u);
            c = std::cos(kPi * u);
        }
    }
    double quantile(double u) const override {
        double s, c;
        sincos_pi(u, s, c);
        return x0 - gamma * c / s; // tan(pi*(u - 1/2)) = -cot(pi*u)
    }
    double qdf(double u) const override {
        double s, c;
        sincos_pi(u, s, c);
        return gamma * kPi / (s * s);
    }
    double cdf(double x) const override { return 0.5 + std::atan((x - x0) / gamma) / kPi; }
    double density(double x) const override {
        double d = x - x0;
        return gamma / (kPi * (gamma * gamma + d * d));
    }
    std::optional<double> second_moment() const override { return std::nullopt; }
    std::optional<double> mean() const override { return std::nullopt; }
    double entropy() const override { return std::log(4.0 * kPi * gamma); }
};

struct logistic_impl final : distribution::impl {
    double mu, s;
    logistic_impl(double m, double s_) : mu(m), s(s_) { family_name = "logistic"; }
    double quantile(double u) const override { return mu + s * std::log(u / (1.0 - u)); }
    double qdf(double u) const override { return s / (u * (1.0 - u)); }
    double cdf(double x) const override { return 1.0 / (1.0 + std::exp(-(x - mu) / s)); }
    double density(double x) const override {
        double t = std::exp(-std::abs(x - mu) / s);
        double d = 1.0 + t;
        return t / (s * d * d);
    }
    std::optional<double> second_moment() const override {
        return mu * mu + s * s * kPi * kPi / 3.0;
    }
    std::optional<double> mean() const override { return mu; }
    double entropy() const override { return std::log(s) + 2.0; }
};

struct location_scale_impl final : distribution::impl {
    std::shared_ptr<const distribution::impl> base;
    double loc, scale;
    location_scale_impl(std::shared_ptr<const distribution::impl> b, double l, double s)
        : base(std::move(b)), loc(l), scale(s) {
        family_name = "location_scale";
    }
    double quantile(double u) const override { return loc + scale * base->quantile(u); }
    double qdf(double u) const override { return scale * base->qdf(u); }
    double cdf(double x) const override { return base->cdf((x - loc) / scale); }
    double density(double x) const override { return base->density((x - loc) / scale) / scale; }
    std::optional<double> second_moment() const override {
        auto m2 = base->second_moment();
        auto m1 = base->mean();
        if (!m2 || !m1)
            return std::nullopt;
        return loc * loc + 2.0 * loc * scale * *m1 + scale * scale * *m2;
    }
    std::optional<double> mean() const override {
        auto m1 = base->mean();
        if (!m1)
            return std::nullopt;
        return loc + scale * *m1;
    }
    double entropy() const override { return base->entropy() + std::log(scale); }
    u_interval u_domain() const override { return base->u_domain(); }
    bool grid_backed() const override { return base->grid_backed(); }
};

struct qdf_grid_impl final : distribution::impl {
    pchip interp;
    double offset;  // Q(u) = offset + A(u), A the antiderivative from the grid front
    double x_lo, x_hi;

    explicit qdf_grid_impl(const qdf_grid& g, std::string fam) {
        family_name = std::move(fam);
        require(g.u_nodes.size() >= 2 && g.u_nodes.size() == g.qdf_values.size(),
                error_kind::spec, "qdf_grid: need matching u/qdf with at least 2 nodes");
        require(g.u_nodes.front() > 0.0 && g.u_nodes.back() < 1.0, error_kind::spec,
                "qdf_grid: u nodes must lie strictly inside (0,1)");
        for (size_t i = 0; i + 1 < g.u_nodes.size(); ++i)
            require(g.u_nodes[i] < g.u_nodes[i + 1], error_kind::spec,
                    "qdf_grid: u nodes must be strictly increasing");
        for (double v : g.qdf_values)
            require(std::isfinite(v) && v > 0.0, error_kind::spec,
                    "qdf_grid: qdf values must be finite and > 0");
        require(g.anchor_u >= g.u_nodes.front() && g.anchor_u <= g.u_nodes.back(),
                error_kind::spec, "qdf_grid: anchor_u must lie inside the node range");
        require(std::isfinite(g.anchor_x), error_kind::spec, "qdf_grid: non-finite anchor_x");
        interp = pchip(g.u_nodes, g.qdf_values);
        offset = g.anchor_x - interp.antiderivative(g.anchor_u);
        x_lo = offset; // A(front) = 0
        x_hi = offset + interp.antiderivative(interp.x_back());
    }
    void check_u(double u) const {
        if (!(u >= interp.x_front() && u <= interp.x_back()))
            throw error(error_kind::domain,
                        "qdf_grid: u = " + std::to_string(u) + " outside evaluable range [" +
                            std::to_string(interp.x_front()) + ", " +
                            std::to_string(interp.x_back()) + "]");
    }
    double quantile(double u) const override {
        check_u(u);
        return offset + interp.antiderivative(u);
    }
    double qdf(double u) const override {
        check_u(u);
        return interp.eval(u);
    }
    double cdf(double x) const override {
        if (x <= x_lo)
            return interp.x_front();
        if (x >= x_hi)
            return interp.x_back();
        return interp.invert_antiderivative(x - offset);
    }
    double density(double x) const override {
        if (x < x_lo || x > x_hi)
            return 0.0;
        return 1.0 / interp.eval(cdf(x));
    }
    std::optional<double> second_moment() const override {
        quadrature_rule r = moment_rule_for(interp.x_front(), interp.x_back());
        return integrate_unit([this](double u) { double q = offset + interp.antiderivative(u);
                                                 return q * q; }, r, exec_mode::serial);
    }
    std::optional<double> mean() const override {
        quadrature_rule r = moment_rule_for(interp.x_front(), interp.x_back());
        return integrate_unit([this](double u) { return offset + interp.antiderivative(u); }, r,
                              exec_mode::serial);
    }
    double entropy() const override {
        quadrature_rule r = moment_rule_for(interp.x_front(), interp.x_back());
        return integrate_unit([this](double u) { return std::log(interp.eval(u)); }, r,
                              exec_mode::serial);
    }
    u_interval u_domain() const override { return {interp.x_front(), interp.x_back()}; }
    bool grid_backed() const override { return true; }
};

struct generative_impl final : distribution::impl {
    std::shared_ptr<const distribution::impl> ref;
    monotone_map map;

    generative_impl(std::shared_ptr<const distribution::impl> r, monotone_map m)
        : ref(std::move(r)), map(std::move(m)) {
        family_name = "generative";
    }
    double quantile(double u) const override { return map(ref->quantile(u)); }
    double qdf(double u) const override {
        return map.derivative(ref->quantile(u)) * ref->qdf(u);
    }
    double cdf(double x) const override { return ref->cdf(map.inverse(x)); }
    double density(double x) const override {
        double z = map.inverse(x);
        return ref->density(z) / map.derivative(z);
    }
    std::optional<double> second_moment() const override {
        if (map.is_affine()) {
            auto m2 = ref->second_moment();
            auto m1 = ref->mean();
            if (!m2 || !m1)
                return std::nullopt;
            double a = map.affine_slope(), b = map.affine_offset();
            return a * a * *m2 + 2.0 * a * b * *m1 + b * b;
        }
        // grid maps grow linearly outside their range, so heavy tails stay heavy
        if (!ref->second_moment())
            return std::nullopt;
        u_interval d = ref->u_domain();
        quadrature_rule r = moment_rule_for(d.lo, d.hi);
        return integrate_unit([this](double u) { double q = quantile(u); return q * q; }, r,
                              exec_mode::serial);
    }
    std::optional<double> mean() const override {
        if (map.is_affine()) {
            auto m1 = ref->mean();
            if (!m1)
                return std::nullopt;
            return map.affine_slope() * *m1 + map.affine_offset();
        }
        if (!ref->mean())
            return std::nullopt;
        u_interval d = ref->u_domain();
        quadrature_rule r = moment_rule_for(d.lo, d.hi);
        return integrate_unit([this](double u) { return quantile(u); }, r, exec_mode::serial);
    }
    double entropy() const override {
        if (map.is_affine())
            return ref->entropy() + std::log(map.affine_slope());
        u_interval d = ref->u_domain();
        quadrature_rule r = moment_rule_for(d.lo, d.hi);
        return ref->entropy() + integrate_unit([this](double u) {
                   return std::log(map.derivative(ref->quantile(u)));
               }, r, exec_mode::serial);
    }
    u_interval u_domain() const override { return ref->u_domain(); }
    bool grid_backed() const override { return ref->grid_backed(); }
};

} // namespace

// ---------------------------------------------------------------- factories

distribution distribution::gaussian(double mu, double sigma) {
    require(std::isfinite(mu) && std::isfinite(sigma) && sigma > 0.0, error_kind::spec,
            "gaussian: sigma must be finite and > 0");
    return distribution(std::make_shared<gaussian_impl>(mu, sigma));
}

distribution distribution::uniform(double a, double b) {
    require(std::isfinite(a) && std::isfinite(b) && a < b, error_kind::spec,
            "uniform: need finite a < b");
    return distribution(std::make_shared<uniform_impl>(a, b));
}

distribution distribution::exponential(double rate) {
    require(std::isfinite(rate) && rate > 0.0, error_kind::spec,
            "exponential: rate must be finite and > 0");
    return distribution(std::make_shared<exponential_impl>(rate));
}

distribution distribution::cauchy(double x0, double gamma) {
    require(std::isfinite(x0) && std::isfinite(gamma) && gamma > 0.0, error_kind::spec,
            "cauchy: gamma must be finite and > 0");
    return distribution(std::make_shared<cauchy_impl>(x0, gamma));
}

distribution distribution::logistic(double mu, double s) {
    require(std::isfinite(mu) && std::isfinite(s) && s > 0.0, error_kind::spec,
            "logistic: s must be finite and > 0");
    return distribution(std::make_shared<logistic_impl>(mu, s));
}

distribution distribution::location_scale(const distribution& base, double loc, double scale) {
    require(std::isfinite(loc) && std::isfinite(scale) && scale > 0.0, error_kind::spec,
            "location_scale: scale must be finite and > 0");
    return distribution(std::make_shared<location_scale_impl>(base.impl_, loc, scale));
}

distribution distribution::from_qdf_grid(qdf_grid g) {
    return distribution(std::make_shared<qdf_grid_impl>(g, "qdf_grid"));
}

distribution density_from_qdf(const qdf_grid& g) {
    return distribution::from_qdf_grid(g);
}

distribution distribution::empirical(std::vector<double> samples, estimator_config cfg) {
    require(cfg.clip_delta > 0.0 && cfg.clip_delta < 0.5, error_kind::spec,
            "empirical: clip_delta must lie in (0, 0.5)");
    require(cfg.bandwidth_const > 0.0, error_kind::spec,
            "empirical: bandwidth_const must be > 0");
    const int n_grid = 513;
    std::vector<double> grid(n_grid);
    for (int i = 0; i < n_grid; ++i)
        grid[i] = cfg.clip_delta +
                  (1.0 - 2.0 * cfg.clip_delta) * static_cast<double>(i) / (n_grid - 1);
    qdf_grid g = fit_empirical_qdf(samples, cfg, grid);
    return distribution(std::make_shared<qdf_grid_impl>(g, "empirical"));
}

distribution distribution::generative(const distribution& ref, monotone_map map) {
    return distribution(std::make_shared<generative_impl>(ref.impl_, std::move(map)));
}

// ---------------------------------------------------------------- method surface

double distribution::quantile(double u) const {
    require(std::isfinite(u) && u > 0.0 && u < 1.0, error_kind::domain,
            "quantile: u must lie strictly inside (0,1)");
    return impl_->quantile(u);
}

double distribution::qdf(double u) const {
    require(std::isfinite(u) && u > 0.0 && u < 1.0, error_kind::domain,
            "qdf: u must lie strictly inside (0,1)");
    return impl_->qdf(u);
}

double distribution::cdf(double x) const {
    require(std::isfinite(x), error_kind::domain, "cdf: x must be finite");
    return impl_->cdf(x);
}

double distribution::density(double x) const {
    require(std::isfinite(x), error_kind::domain, "density: x must be finite");
    return impl_->density(x);
}

std::optional<double> distribution::second_moment() const { return impl_->second_moment(); }
std::optional<double> distribution::mean() const { return impl_->mean(); }
double distribution::entropy() const { return impl_->entropy(); }
u_interval distribution::u_domain() const { return impl_->u_domain(); }
bool distribution::grid_backed() const { return impl_->grid_backed(); }
const std::string& distribution::family() const { return impl_->family_name; }

// ---------------------------------------------------------------- empirical estimator

qdf_grid fit_empirical_qdf(std::span<const double> samples, const estimator_config& cfg,
                           std::span<const double> grid) {
    size_t n = samples.size();
    require(n >= 8, error_kind::spec, "fit_empirical_qdf: need at least 8 samples");
    for (double v : samples)
        require(std::isfinite(v), error_kind::spec, "fit_empirical_qdf: non-finite sample");
    require(!grid.empty(), error_kind::domain, "fit_empirical_qdf: empty grid");

    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    double denom = static_cast<double>(n) + 1.0;
    double p1 = 1.0 / denom, pn = static_cast<double>(n) / denom;

    // piecewise-linear empirical quantile at plotting positions k/(n+1)
    auto Qe = [&](double v) {
        double k = v * denom; // continuous order-statistic index
        if (k <= 1.0)
            return xs.front();
        if (k >= static_cast<double>(n))
            return xs.back();
        size_t i = static_cast<size_t>(k);
        double frac = k - static_cast<double>(i);
        return xs[i - 1] + frac * (xs[i] - xs[i - 1]);
    };

    double b = cfg.bandwidth_const * std::pow(static_cast<double>(n), -1.0 / 3.0);
    require(b > 1.0 / denom, error_kind::estimation,
            "fit_empirical_qdf: bandwidth below order-statistic resolution");

    qdf_grid out;
    out.u_nodes.assign(grid.begin(), grid.end());
    out.qdf_values.resize(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        double u = grid[i];
        require(u >= cfg.clip_delta && u <= 1.0 - cfg.clip_delta, error_kind::domain,
                "fit_empirical_qdf: grid node outside [clip_delta, 1-clip_delta]");
        double be = std::min({b, u - p1, pn - u});
        require(be > 0.0, error_kind::estimation,
                "fit_empirical_qdf: grid node outside the order-statistic range");
        double slope = (Qe(u + be) - Qe(u - be)) / (2.0 * be);
        require(std::isfinite(slope) && slope > 0.0, error_kind::estimation,
                "fit_empirical_qdf: nonpositive difference quotient (tied samples)");
        out.qdf_values[i] = slope;
    }
    out.anchor_u = 0.5;
    out.anchor_x = Qe(0.5);
    return out;
}

// ---------------------------------------------------------------- JSON parsing

namespace {

using nlohmann::json;

double get_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw error(error_kind::spec, std::string("spec: missing numeric field \"") + key + "\"");
    return j[key].get<double>();
}

std::vector<double> get_array(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array())
        throw error(error_kind::spec, std::string("spec: missing array field \"") + key + "\"");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number())
            throw error(error_kind::spec,
                        std::string("spec: non-numeric entry in \"") + key + "\"");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<double> read_samples_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw error(error_kind::io, "spec: cannot open samples file " + path);
    std::vector<double> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        try {
            size_t pos = 0;
            double v = std::stod(line, &pos);
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos])))
                ++pos;
            if (pos != line.size())
                throw std::invalid_argument("trailing characters");
            out.push_back(v);
        } catch (const std::exception&) {
            throw error(error_kind::spec, "spec: bad sample at " + path + ":" +
                                              std::to_string(lineno));
        }
    }
    return out;
}

monotone_map parse_map(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw error(error_kind::spec, "spec: map needs a \"type\" string");
    std::string type = j["type"].get<std::string>();
    if (type == "affine")
        return monotone_map::affine(get_number(j, "a"), get_number(j, "b"));
    if (type == "monotone_grid")
        return monotone_map::grid(get_array(j, "z"), get_array(j, "g"));
    throw error(error_kind::spec, "spec: unknown map type \"" + type + "\"");
}

distribution parse_spec(const json& j, const std::string& base_dir) {
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
        throw error(error_kind::spec, "spec: needs a \"family\" string");
    std::string fam = j["family"].get<std::string>();
    if (fam == "gaussian")
        return distribution::gaussian(get_number(j, "mu"), get_number(j, "sigma"));
    if (fam == "uniform")
        return distribution::uniform(get_number(j, "a"), get_number(j, "b"));
    if (fam == "exponential")
        return distribution::exponential(get_number(j, "rate"));
    if (fam == "cauchy")
        return distribution::cauchy(get_number(j, "x0"), get_number(j, "gamma"));
    if (fam == "logistic")
        return distribution::logistic(get_number(j, "mu"), get_number(j, "s"));
    if (fam == "location_scale") {
        if (!j.contains("base"))
            throw error(error_kind::spec, "spec: location_scale needs \"base\"");
        return distribution::location_scale(parse_spec(j["base"], base_dir),
                                            get_number(j, "loc"), get_number(j, "scale"));
    }
    if (fam == "qdf_grid") {
        qdf_grid g;
        g.u_nodes = get_array(j, "u");
        g.qdf_values = get_array(j, "qdf");
        g.anchor_u = j.contains("anchor_u") ? get_number(j, "anchor_u") : 0.5;
        g.anchor_x = j.contains("anchor_x") ? get_number(j, "anchor_x") : 0.0;
        return distribution::from_qdf_grid(std::move(g));
    }
    if (fam == "empirical") {
        if (!j.contains("samples_file") || !j["samples_file"].is_string())
            throw error(error_kind::spec, "spec: empirical needs \"samples_file\"");
        std::string path = j["samples_file"].get<std::string>();
        if (!path.empty() && path.front() != '/')
            path = base_dir + "/" + path;
        estimator_config cfg;
        if (j.contains("clip_delta"))
            cfg.clip_delta = get_number(j, "clip_delta");
        if (j.contains("bandwidth_const"))
            cfg.bandwidth_const = get_number(j, "bandwidth_const");
        return distribution::empirical(read_samples_file(path), cfg);
    }
    if (fam == "generative") {
        if (!j.contains("ref") || !j.contains("map"))
            throw error(error_kind::spec, "spec: generative needs \"ref\" and \"map\"");
        return distribution::generative(parse_spec(j["ref"], base_dir), parse_map(j["map"]));
    }
    throw error(error_kind::spec, "spec: unknown family \"" + fam + "\"");
}

} // namespace

distribution parse_spec_json(const std::string& json_text, const std::string& base_dir) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded())
        throw error(error_kind::spec, "spec: invalid JSON");
    return parse_spec(j, base_dir);
}

} // namespace tdiv
