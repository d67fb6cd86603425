#include "tdiv/geodesics.hpp"

#include <cmath>
#include <exception>
#include <string>

#include "tdiv/divergence.hpp"
#include "tdiv/errors.hpp"

namespace tdiv {

namespace {

void check_u_grid(std::span<const double> u_grid) {
    if (u_grid.size() < 2)
        throw error(error_kind::domain, "geodesic u-grid needs at least 2 nodes");
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
        double u = u_grid[i];
        if (!std::isfinite(u) || u <= 0.0 || u >= 1.0)
            throw error(error_kind::domain,
                        "geodesic u-grid node " + std::to_string(i) + " outside (0, 1)");
        if (i > 0 && u <= u_grid[i - 1])
            throw error(error_kind::domain, "geodesic u-grid is not strictly increasing");
    }
}

double anchor_median(const distribution& p, const distribution& q, double t) {
    return (1.0 - t) * q.quantile(0.5) + t * p.quantile(0.5);
}

} // namespace

qdf_grid transport_alpha_geodesic(const distribution& p, const distribution& q, double alpha,
                                  double t, std::span<const double> u_grid) {
    if (!std::isfinite(alpha))
        throw error(error_kind::domain, "geodesic alpha must be finite");
    if (!std::isfinite(t) || t < 0.0 || t > 1.0)
        throw error(error_kind::domain, "geodesic time t must lie in [0, 1]");
    check_u_grid(u_grid);

    qdf_grid out;
    out.u_nodes.assign(u_grid.begin(), u_grid.end());
    out.qdf_values.resize(u_grid.size());
    out.anchor_u = 0.5;
    out.anchor_x = anchor_median(p, q, t);

    // endpoints return the input QDF values verbatim
    if (t == 0.0 || t == 1.0) {
        const distribution& end = (t == 0.0) ? q : p;
        for (std::size_t i = 0; i < u_grid.size(); ++i)
            out.qdf_values[i] = end.qdf(u_grid[i]);
        return out;
    }

    const bool zero_branch = alpha_param{alpha}.zero_branch();
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
        double u = u_grid[i];
        double lp = std::log(p.qdf(u));
        double lq = std::log(q.qdf(u));
        double logq;
        if (zero_branch) {
            logq = t * lp + (1.0 - t) * lq;
        } else {
            // log of (1-t) e^{-a lq} + t e^{-a lp}, max-shifted for stability
            double a = alpha;
            double eq = -a * lq;
            double ep = -a * lp;
            double m = std::max(eq, ep);
            double s = (1.0 - t) * std::exp(eq - m) + t * std::exp(ep - m);
            logq = -(m + std::log(s)) / a;
        }
        double v = std::exp(logq);
        if (!std::isfinite(v) || v <= 0.0)
            throw error(error_kind::numerical,
                        "geodesic qdf not finite/positive at u = " + std::to_string(u));
        out.qdf_values[i] = v;
    }
    return out;
}

geodesic_path make_geodesic_path(const distribution& p, const distribution& q, double alpha,
                                 int n_frames, std::span<const double> u_grid, exec_mode mode) {
    if (n_frames < 2)
        throw error(error_kind::domain, "geodesic path needs at least 2 frames");
    check_u_grid(u_grid);

    geodesic_path path;
    path.alpha = alpha;
    path.t_grid.resize(static_cast<std::size_t>(n_frames));
    path.qdf_frames.resize(static_cast<std::size_t>(n_frames));
    for (int k = 0; k < n_frames; ++k)
        path.t_grid[static_cast<std::size_t>(k)] =
            static_cast<double>(k) / static_cast<double>(n_frames - 1);

    // frames are independent; each is computed with identical arithmetic in either
    // mode, so serial and parallel paths are bitwise equal
    std::exception_ptr first_error = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (mode == exec_mode::parallel)
#endif
    for (int k = 0; k < n_frames; ++k) {
        try {
            path.qdf_frames[static_cast<std::size_t>(k)] = transport_alpha_geodesic(
                p, q, alpha, path.t_grid[static_cast<std::size_t>(k)], u_grid);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(tdiv_geodesic_error)
#endif
            {
                if (!first_error)
                    first_error = std::current_exception();
            }
        }
    }
    if (first_error)
        std::rethrow_exception(first_error);
    (void)mode;
    return path;
}

residual_grid geodesic_pde_residual(const geodesic_path& path) {
    const std::size_t nt = path.t_grid.size();
    if (nt < 5 || path.qdf_frames.size() != nt)
        throw error(error_kind::domain, "pde residual needs at least 5 frames");
    const double h = path.t_grid[1] - path.t_grid[0];
    for (std::size_t i = 0; i + 1 < nt; ++i) {
        double step = path.t_grid[i + 1] - path.t_grid[i];
        if (!(step > 0.0) || std::abs(step - h) > 1e-12)
            throw error(error_kind::domain, "pde residual needs a uniform t-grid");
    }
    const std::size_t nu = path.qdf_frames.front().u_nodes.size();
    for (const qdf_grid& f : path.qdf_frames) {
        if (f.u_nodes.size() != nu || f.qdf_values.size() != nu)
            throw error(error_kind::domain, "pde residual needs frames on one shared u-grid");
        for (std::size_t j = 0; j < nu; ++j)
            if (f.u_nodes[j] != path.qdf_frames.front().u_nodes[j])
                throw error(error_kind::domain, "pde residual needs frames on one shared u-grid");
    }

    // J(t,u) = qdf(t,u) / qdf(0,u); the frame at t = 0 is the base endpoint q
    const std::vector<double>& base = path.qdf_frames.front().qdf_values;
    const bool zero_branch = alpha_param{path.alpha}.zero_branch();

    residual_grid out;
    out.u = path.qdf_frames.front().u_nodes;
    out.t.reserve(nt - 2);
    out.r.reserve(nt - 2);
    for (std::size_t i = 1; i + 1 < nt; ++i) {
        out.t.push_back(path.t_grid[i]);
        std::vector<double> row(nu);
        for (std::size_t j = 0; j < nu; ++j) {
            double jm = path.qdf_frames[i - 1].qdf_values[j] / base[j];
            double j0 = path.qdf_frames[i].qdf_values[j] / base[j];
            double jp = path.qdf_frames[i + 1].qdf_values[j] / base[j];
            double res;
            if (zero_branch) {
                // log J is linear in t along the zero-branch geodesic
                res = std::abs((std::log(jp) - 2.0 * std::log(j0) + std::log(jm)) / (h * h));
            } else {
                double dt = (jp - jm) / (2.0 * h);
                double dtt = (jp - 2.0 * j0 + jm) / (h * h);
                res = std::abs(dtt - (path.alpha + 1.0) * dt * dt / j0);
            }
            row[j] = res;
            if (res > out.max_residual)
                out.max_residual = res;
        }
        out.r.push_back(std::move(row));
    }
    return out;
}

distribution geodesic_density(const qdf_grid& frame, const distribution& p, const distribution& q,
                              double alpha, double t) {
    if (!std::isfinite(alpha))
        throw error(error_kind::domain, "geodesic alpha must be finite");
    if (!std::isfinite(t) || t < 0.0 || t > 1.0)
        throw error(error_kind::domain, "geodesic time t must lie in [0, 1]");
    qdf_grid anchored = frame;
    anchored.anchor_u = 0.5;
    anchored.anchor_x = anchor_median(p, q, t);
    return distribution::from_qdf_grid(anchored);
}

std::vector<double> classical_alpha_geodesic(std::span<const double> m, std::span<const double> n,
                                             double alpha, double t) {
    if (m.empty() || m.size() != n.size())
        throw error(error_kind::domain, "classical geodesic needs equal-length positive vectors");
    if (!std::isfinite(alpha))
        throw error(error_kind::domain, "classical geodesic alpha must be finite");
    if (!std::isfinite(t) || t < 0.0 || t > 1.0)
        throw error(error_kind::domain, "classical geodesic time t must lie in [0, 1]");
    for (std::size_t k = 0; k < m.size(); ++k)
        if (!std::isfinite(m[k]) || !std::isfinite(n[k]) || m[k] <= 0.0 || n[k] <= 0.0)
            throw error(error_kind::domain, "classical geodesic needs positive finite entries");

    std::vector<double> out(m.size());
    if (t == 0.0) {
        out.assign(m.begin(), m.end());
        return out;
    }
    if (t == 1.0) {
        out.assign(n.begin(), n.end());
        return out;
    }
    const double beta = 0.5 * (1.0 - alpha);
    const bool geometric = std::abs(1.0 - alpha) < 1e-4;
    for (std::size_t k = 0; k < m.size(); ++k) {
        double v;
        if (geometric) {
            v = std::exp((1.0 - t) * std::log(m[k]) + t * std::log(n[k]));
        } else {
            v = std::pow((1.0 - t) * std::pow(m[k], beta) + t * std::pow(n[k], beta), 1.0 / beta);
        }
        if (!std::isfinite(v) || v <= 0.0)
            throw error(error_kind::numerical, "classical geodesic coordinate not finite/positive");
        out[k] = v;
    }
    return out;
}

} // namespace tdiv
