#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdiv/interp.hpp"

namespace tdiv {

// configuration of the sample-based QDF estimator
struct estimator_config {
    double clip_delta = 0.01;     // fitted grid spans [clip_delta, 1 - clip_delta]
    double bandwidth_const = 1.0; // difference half-width b = bandwidth_const * n^(-1/3)
};

// positive quantile-density values on a u-grid plus an anchor fixing Q(anchor_u) = anchor_x
struct qdf_grid {
    std::vector<double> u_nodes;
    std::vector<double> qdf_values;
    double anchor_u = 0.5;
    double anchor_x = 0.0;
};

// strictly increasing map of the real line: affine or a monotone cubic through grid
// points (linear continuation with the end-cell slope outside the grid range)
class monotone_map {
public:
    static monotone_map affine(double a, double b); // a > 0
    static monotone_map grid(std::vector<double> z_nodes, std::vector<double> g_values);

    double operator()(double z) const;
    double derivative(double z) const; // > 0 everywhere
    double inverse(double x) const;
    bool is_affine() const { return kind_ == kind::affine; }
    double affine_slope() const { return a_; }
    double affine_offset() const { return b_; }

private:
    enum class kind { affine, grid };
    kind kind_ = kind::affine;
    double a_ = 1.0, b_ = 0.0;
    pchip g_;
    monotone_map() = default;
};

struct u_interval {
    double lo = 0.0, hi = 1.0;
};

// immutable 1D density with the uniform evaluation surface used everywhere:
// quantile Q, quantile density Q', CDF F, density p
class distribution {
public:
    static distribution gaussian(double mu, double sigma);
    static distribution uniform(double a, double b);
    static distribution exponential(double rate);
    static distribution cauchy(double x0, double gamma);
    static distribution logistic(double mu, double s);
    static distribution location_scale(const distribution& base, double loc, double scale);
    static distribution from_qdf_grid(qdf_grid g);
    static distribution empirical(std::vector<double> samples, estimator_config cfg = {});
    static distribution generative(const distribution& ref, monotone_map map);

    double quantile(double u) const;
    double qdf(double u) const;
    double cdf(double x) const;
    double density(double x) const;

    std::optional<double> second_moment() const; // nullopt marks an infinite moment
    std::optional<double> mean() const;          // nullopt when undefined (heavy tails)
    double entropy() const;                      // differential entropy
    u_interval u_domain() const;                 // evaluable quantile levels
    bool grid_backed() const;                    // qdf_grid or empirical anywhere inside
    const std::string& family() const;

    struct impl; // internal evaluation backend; defined in the implementation file

private:
    std::shared_ptr<const impl> impl_;
    explicit distribution(std::shared_ptr<const impl> p) : impl_(std::move(p)) {}
};

// empirical quantile by piecewise-linear interpolation of order statistics at
// plotting positions k/(n+1); QDF by symmetric difference over half-width
// b = bandwidth_const * n^(-1/3), shrunk symmetrically near the evaluable edge
qdf_grid fit_empirical_qdf(std::span<const double> samples, const estimator_config& cfg,
                           std::span<const double> grid);

// distribution backed by a QDF grid: quantiles by exact integration of the
// monotone interpolant, CDF by inversion, density 1/Q'
distribution density_from_qdf(const qdf_grid& g);

// standard normal quantile (rational approximation + one refinement step,
// absolute error <= 1e-12) and related helpers
double gaussian_quantile_unit(double u);
double gaussian_cdf_unit(double x);
double gaussian_density_unit(double x);

// parse a DistributionSpec JSON document; samples_file paths resolve against base_dir
distribution parse_spec_json(const std::string& json_text, const std::string& base_dir = ".");

} // namespace tdiv
