#include "tdiv/interp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tdiv/errors.hpp"

namespace tdiv {

namespace {

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

// one-sided slope estimate at a boundary knot, limited to preserve shape
double edge_slope(double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sgn(d) != sgn(d0))
        return 0.0;
    if (sgn(d0) != sgn(d1) && std::abs(d) > 3.0 * std::abs(d0))
        return 3.0 * d0;
    return d;
}

} // namespace

pchip::pchip(std::vector<double> x, std::vector<double> y)
    : xs_(std::move(x)), ys_(std::move(y)) {
    size_t n = xs_.size();
    if (n < 2 || ys_.size() != n)
        throw error(error_kind::spec, "pchip: need matching x/y with at least 2 knots");
    for (size_t i = 0; i + 1 < n; ++i)
        if (!(xs_[i] < xs_[i + 1]))
            throw error(error_kind::spec, "pchip: x knots must be strictly increasing");

    std::vector<double> h(n - 1), delta(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = xs_[i + 1] - xs_[i];
        delta[i] = (ys_[i + 1] - ys_[i]) / h[i];
    }

    ds_.assign(n, 0.0);
    if (n == 2) {
        ds_[0] = ds_[1] = delta[0];
    } else {
        for (size_t i = 1; i + 1 < n; ++i) {
            if (sgn(delta[i - 1]) * sgn(delta[i]) <= 0) {
                ds_[i] = 0.0;
            } else {
                // weighted harmonic mean; |d| <= 3*min(|delta|) keeps every cell monotone
                double w1 = 2.0 * h[i] + h[i - 1];
                double w2 = h[i] + 2.0 * h[i - 1];
                ds_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        ds_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
        ds_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    cum_.assign(n, 0.0);
    for (size_t i = 0; i + 1 < n; ++i)
        cum_[i + 1] = cum_[i] + h[i] * (0.5 * (ys_[i] + ys_[i + 1]) +
                                        h[i] * (ds_[i] - ds_[i + 1]) / 12.0);
}

int pchip::cell(double x) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    int i = static_cast<int>(it - xs_.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(xs_.size()) - 2);
}

double pchip::cell_eval(int i, double s) const {
    double hi = xs_[i + 1] - xs_[i];
    double s2 = s * s, s3 = s2 * s;
    return ys_[i] * (1.0 - 3.0 * s2 + 2.0 * s3) + hi * ds_[i] * (s - 2.0 * s2 + s3) +
           ys_[i + 1] * (3.0 * s2 - 2.0 * s3) + hi * ds_[i + 1] * (s3 - s2);
}

double pchip::eval(double x) const {
    if (!(x >= xs_.front() && x <= xs_.back()))
        throw error(error_kind::domain,
                    "pchip: evaluation at " + std::to_string(x) + " outside grid range");
    int i = cell(x);
    return cell_eval(i, (x - xs_[i]) / (xs_[i + 1] - xs_[i]));
}

double pchip::eval_extrapolate(double x) const {
    if (x < xs_.front())
        return ys_.front() + ds_.front() * (x - xs_.front());
    if (x > xs_.back())
        return ys_.back() + ds_.back() * (x - xs_.back());
    return eval(x);
}

double pchip::derivative(double x) const {
    if (x < xs_.front())
        return ds_.front();
    if (x > xs_.back())
        return ds_.back();
    int i = cell(x);
    double hi = xs_[i + 1] - xs_[i];
    double s = (x - xs_[i]) / hi;
    double s2 = s * s;
    return (ys_[i] * (-6.0 * s + 6.0 * s2) + hi * ds_[i] * (1.0 - 4.0 * s + 3.0 * s2) +
            ys_[i + 1] * (6.0 * s - 6.0 * s2) + hi * ds_[i + 1] * (3.0 * s2 - 2.0 * s)) /
           hi;
}

double pchip::cell_antiderivative(int i, double s) const {
    double hi = xs_[i + 1] - xs_[i];
    double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    double v = ys_[i] * (s - s3 + 0.5 * s4) +
               hi * ds_[i] * (0.5 * s2 - 2.0 * s3 / 3.0 + 0.25 * s4) +
               ys_[i + 1] * (s3 - 0.5 * s4) + hi * ds_[i + 1] * (0.25 * s4 - s3 / 3.0);
    return hi * v;
}

double pchip::antiderivative(double x) const {
    if (!(x >= xs_.front() && x <= xs_.back()))
        throw error(error_kind::domain,
                    "pchip: antiderivative at " + std::to_string(x) + " outside grid range");
    int i = cell(x);
    double s = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
    return cum_[i] + cell_antiderivative(i, s);
}

double pchip::integral(double a, double b) const {
    return antiderivative(b) - antiderivative(a);
}

double pchip::invert_antiderivative(double target) const {
    double total = cum_.back();
    double tol = 1e-14 * (1.0 + std::abs(total));
    if (target < -tol || target > total + tol)
        throw error(error_kind::domain, "pchip: antiderivative target outside range");
    target = std::clamp(target, 0.0, total);

    auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    int i = std::clamp(static_cast<int>(it - cum_.begin()) - 1, 0,
                       static_cast<int>(xs_.size()) - 2);
    double want = target - cum_[i];
    double hi = xs_[i + 1] - xs_[i];
    double lo = 0.0, hi_s = 1.0;
    double s = std::clamp(want / std::max(hi * ys_[i], 1e-300), 0.0, 1.0);
    for (int iter = 0; iter < 60; ++iter) {
        double g = cell_antiderivative(i, s) - want;
        if (g > 0.0)
            hi_s = s;
        else
            lo = s;
        double slope = hi * cell_eval(i, s); // dA/ds = h * y(s) > 0
        double step = (slope > 0.0) ? g / slope : 0.0;
        double next = s - step;
        if (!(next > lo && next < hi_s))
            next = 0.5 * (lo + hi_s);
        if (std::abs(next - s) < 1e-16)
            { s = next; break; }
        s = next;
    }
    return xs_[i] + s * hi;
}

} // namespace tdiv
