#pragma once

#include <span>
#include <vector>

#include "tdiv/distributions.hpp"
#include "tdiv/exec.hpp"

namespace tdiv {

// family of QDF frames along t in [0,1]; frames carry the anchor
// Q(t, 1/2) = (1-t)*Q_q(1/2) + t*Q_p(1/2) (linear median interpolation)
struct geodesic_path {
    double alpha = -1.0;
    std::vector<double> t_grid;        // increasing, t_grid.front() = 0, back() = 1
    std::vector<qdf_grid> qdf_frames;  // one frame per t; frame 0 is q, last is p
};

// single frame of the alpha-interpolation of QDFs:
// alpha != 0: ((1-t)*Q'_q^(-alpha) + t*Q'_p^(-alpha))^(-1/alpha), in log space;
// alpha  = 0: Q'_p^t * Q'_q^(1-t). Endpoints reproduce the input QDFs exactly.
qdf_grid transport_alpha_geodesic(const distribution& p, const distribution& q, double alpha,
                                  double t, std::span<const double> u_grid);

// n_frames uniformly spaced frames t = 0, 1/(n-1), ..., 1 (frames computed in parallel)
geodesic_path make_geodesic_path(const distribution& p, const distribution& q, double alpha,
                                 int n_frames, std::span<const double> u_grid,
                                 exec_mode mode = default_exec_mode());

// |d_tt J - (alpha+1) (d_t J)^2 / J| per interior (t,u) by central differences of
// J(t,u) = frame qdf / Q'_q; the alpha = 0 branch checks |d_tt log J| instead
// (log J is linear in t there)
struct residual_grid {
    std::vector<double> t;              // interior frame times
    std::vector<double> u;              // u nodes
    std::vector<std::vector<double>> r; // r[i][j] at (t[i], u[j])
    double max_residual = 0.0;
};
residual_grid geodesic_pde_residual(const geodesic_path& path);

// anchors the frame per the path policy and wraps it as a distribution
distribution geodesic_density(const qdf_grid& frame, const distribution& p,
                              const distribution& q, double alpha, double t);

// per-coordinate closed form ((1-t) m^((1-alpha)/2) + t n^((1-alpha)/2))^(2/(1-alpha));
// alpha = 1 is the geometric (exponential-family) branch m^(1-t) n^t
std::vector<double> classical_alpha_geodesic(std::span<const double> m, std::span<const double> n,
                                             double alpha, double t);

} // namespace tdiv
