#pragma once

#include <vector>

namespace tdiv {

// Monotone cubic Hermite interpolant (Fritsch-Carlson with Butland-type slopes).
// Each cell stays within its endpoint values, so strictly positive data yields a
// strictly positive interpolant and monotone data a monotone one.
class pchip {
public:
    pchip() = default;
    pchip(std::vector<double> x, std::vector<double> y); // x strictly increasing, size >= 2

    double x_front() const { return xs_.front(); }
    double x_back() const { return xs_.back(); }

    // value inside [x_front, x_back]; outside is a domain error
    double eval(double x) const;
    // value with linear continuation (end-cell slope) outside the range
    double eval_extrapolate(double x) const;
    double derivative(double x) const;

    // exact integral of the piecewise cubic from x_front to x, A(x_front) = 0
    double antiderivative(double x) const;
    double integral(double a, double b) const;

    // solve A(x) = target for positive integrands (A strictly increasing);
    // bracketed Newton, target must lie in [0, A(x_back)]
    double invert_antiderivative(double target) const;

private:
    std::vector<double> xs_, ys_, ds_; // knots, values, knot slopes
    std::vector<double> cum_;          // antiderivative at knots

    int cell(double x) const;
    double cell_eval(int i, double s) const;           // value at x_i + s*h_i
    double cell_antiderivative(int i, double s) const; // integral over [x_i, x_i + s*h_i]
};

} // namespace tdiv
