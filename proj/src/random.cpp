#include "tdiv/random.hpp"

#include <cmath>

namespace tdiv {

qdf_grid random_smooth_qdf_grid(rng64& rng, int n_nodes) {
    constexpr int kModes = 4;
    double a[kModes], b[kModes];
    for (int k = 0; k < kModes; ++k) {
        a[k] = rng.uniform(-0.6, 0.6);
        b[k] = rng.uniform(-0.6, 0.6);
    }
    const double lo = 1e-7, hi = 1.0 - 1e-7;
    const double two_pi = 2.0 * 3.14159265358979323846;

    qdf_grid g;
    g.u_nodes.resize(n_nodes);
    g.qdf_values.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        double u = lo + (hi - lo) * static_cast<double>(i) / (n_nodes - 1);
        double s = 0.0;
        for (int k = 0; k < kModes; ++k)
            s += (a[k] * std::sin(two_pi * (k + 1) * u) +
                  b[k] * std::cos(two_pi * (k + 1) * u)) / (k + 1);
        g.u_nodes[i] = u;
        g.qdf_values[i] = std::exp(s);
    }
    g.anchor_u = 0.5;
    g.anchor_x = 0.0;
    return g;
}

} // namespace tdiv
