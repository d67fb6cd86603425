#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tdiv/distributions.hpp"
#include "tdiv/divergence.hpp"
#include "tdiv/errors.hpp"
#include "tdiv/geodesics.hpp"
#include "tdiv/hessian.hpp"
#include "tdiv/quadrature.hpp"
#include "tdiv/random.hpp"
#include "tdiv/version.hpp"

using nlohmann::ordered_json;
using namespace tdiv;

namespace {

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// compact rendering for human-facing labels
std::string gshort(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct loaded_spec {
    distribution dist;
    std::string text; // raw file bytes, hashed into the inputs digest
};

loaded_spec load_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error(error_kind::io, "cannot read spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    std::string base = std::filesystem::path(path).parent_path().string();
    if (base.empty())
        base = ".";
    return {parse_spec_json(text, base), text};
}

// clip default: 0 for analytic pairs, 0.01 once any estimated/grid spec is involved
double resolve_clip(const std::optional<double>& user_clip, bool any_grid) {
    if (user_clip)
        return *user_clip;
    return any_grid ? 0.01 : 0.0;
}

struct sink {
    std::ofstream file;
    std::ostream* out = &std::cout;

    explicit sink(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file)
                throw error(error_kind::io, "cannot write output file: " + path);
            out = &file;
        }
    }
};

void emit_report(const std::string& verb, const ordered_json& inputs, const ordered_json& results,
                 double error_estimate, double wall_ms, const std::string& out_path) {
    ordered_json report;
    report["verb"] = verb;
    report["inputs_digest"] = hex64(fnv1a64(inputs.dump()));
    report["results"] = results;
    report["error_estimate"] = error_estimate;
    report["wall_time_ms"] = wall_ms;
    report["version"] = version;
    sink s(out_path);
    *s.out << report.dump(2) << "\n";
}

struct check_tally {
    int passed = 0;
    int failed = 0;
    double worst = 0.0;

    void line(const std::string& suite, const std::string& label, double residual, double bound) {
        bool ok = residual <= bound;
        (ok ? passed : failed) += 1;
        worst = std::max(worst, residual);
        std::printf("%s %s %s residual=%.3e bound=%.3e\n", ok ? "pass" : "fail", suite.c_str(),
                    label.c_str(), residual, bound);
    }

    void ratio_line(const std::string& suite, const std::string& label, double ratio, double lo,
                    double hi) {
        bool ok = ratio >= lo && ratio <= hi;
        (ok ? passed : failed) += 1;
        std::printf("%s %s %s ratio=%.3f expected=[%.1f,%.1f]\n", ok ? "pass" : "fail",
                    suite.c_str(), label.c_str(), ratio, lo, hi);
    }
};

const std::vector<double> check_alphas{-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0};

void check_duality(check_tally& t, std::uint64_t seed, const quadrature_rule& rule) {
    rng64 rng(seed);
    std::vector<distribution> pool;
    for (int i = 0; i < 200; ++i)
        pool.push_back(distribution::from_qdf_grid(random_smooth_qdf_grid(rng)));
    for (double a : check_alphas) {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            double fwd = transport_alpha_div(pool[2 * i], pool[2 * i + 1], alpha_param{a}, rule).value;
            double rev = transport_alpha_div(pool[2 * i + 1], pool[2 * i], alpha_param{-a}, rule).value;
            worst = std::max(worst, std::abs(fwd - rev));
        }
        t.line("duality", "alpha=" + gshort(a), worst, 1e-10);
    }
}

void check_taylor(check_tally& t, const quadrature_rule& rule) {
    int n = 257;
    std::vector<double> u(n), flat(n);
    for (int i = 0; i < n; ++i) {
        u[i] = 1e-7 + (1.0 - 2e-7) * i / (n - 1);
        flat[i] = 1.0;
    }
    auto q = distribution::from_qdf_grid(qdf_grid{u, flat});
    auto perturbed = [&](double eps) {
        std::vector<double> vals(n);
        for (int i = 0; i < n; ++i)
            vals[i] = 1.0 + eps * (u[i] - 0.5);
        return distribution::from_qdf_grid(qdf_grid{u, vals});
    };
    for (double a : {-1.0, 1.0, 3.0}) {
        double prev = 0.0;
        for (double eps : {0.1, 0.05, 0.025}) {
            double rem = taylor_compare(perturbed(eps), q, a, rule).remainder;
            if (prev != 0.0)
                t.ratio_line("taylor", "alpha=" + gshort(a) + " eps=" + gshort(eps), prev / rem, 12.0,
                             20.0);
            prev = rem;
        }
    }
    t.line("taylor", "alpha=3 cubic term", std::abs(taylor_compare(perturbed(0.1), q, 3.0, rule).cubic),
           0.0);
}

void check_pythagorean(check_tally& t, const quadrature_rule& rule) {
    int n = 257;
    std::vector<double> u(n), flat(n), up(n), down(n);
    auto bump = [](double x, double lo, double hi) {
        if (x <= lo || x >= hi)
            return 0.0;
        double s = std::sin(3.14159265358979323846 * (x - lo) / (hi - lo));
        return s * s;
    };
    for (int i = 0; i < n; ++i) {
        u[i] = 1e-6 + (1.0 - 2e-6) * i / (n - 1);
        flat[i] = 1.0;
        up[i] = 1.0 + 0.8 * bump(u[i], 0.55, 0.95);
        down[i] = 1.0 - 0.35 * bump(u[i], 0.05, 0.45);
    }
    auto q = distribution::from_qdf_grid(qdf_grid{u, flat});
    auto p = distribution::from_qdf_grid(qdf_grid{u, up});
    auto r = distribution::from_qdf_grid(qdf_grid{u, down});
    auto gp = distribution::gaussian(0.0, 1.0);
    auto gq = distribution::gaussian(0.0, 2.0);
    auto gr = distribution::gaussian(0.0, 3.0);
    for (double a : {-1.0, 0.0, 1.0, 3.0}) {
        alpha_param ap{a};
        t.line("pythagorean", "disjoint alpha=" + gshort(a),
               std::abs(orthogonality_defect(p, q, r, ap, rule)), 1e-8);
        double defect = orthogonality_defect(gp, gq, gr, ap, rule);
        double gap = transport_alpha_div(gp, gq, ap, rule).value +
                     transport_alpha_div(gq, gr, ap, rule).value -
                     transport_alpha_div(gp, gr, ap, rule).value;
        t.line("pythagorean", "cosine-law alpha=" + gshort(a), std::abs(defect - gap), 1e-8);
    }
}

void check_gamma3(check_tally& t, const std::vector<double>& coeffs) {
    std::vector<double> x(1201);
    for (int i = 0; i < 1201; ++i)
        x[i] = -3.0 + 6.0 * i / 1200.0;
    auto g = make_polynomial_potential(coeffs, x);
    double worst = 0.0;
    for (int k = 0; k <= 10; ++k) {
        double xv = -2.5 + 5.0 * k / 10.0;
        auto v = gamma_operators(g, xv);
        worst = std::max(worst, std::abs(v.gamma3_composed - v.gamma3_direct) /
                                    std::max(1.0, std::abs(v.gamma3_direct)));
    }
    t.line("gamma3", "composition vs closed form", worst, 1e-10);
}

void check_entropy_derivs(check_tally& t, const quadrature_rule& rule) {
    auto gauss = distribution::gaussian(0.0, 1.0);
    std::vector<double> coeffs{0.0, 0.0, 0.5};
    std::vector<double> x(2001);
    for (int i = 0; i < 2001; ++i)
        x[i] = -10.0 + 20.0 * i / 2000.0;
    auto quad = make_polynomial_potential(coeffs, x);
    auto series = entropy_derivative_series(gauss, quad, 3, rule);

    auto entropy_at = [&](double tt) {
        return integrate_unit(
            [&](double u) { return std::log((1.0 + tt) * gauss.qdf(u)); }, rule);
    };
    double h = 2e-3, f[5];
    for (int k = -2; k <= 2; ++k)
        f[k + 2] = entropy_at(k * h);
    double fd[3] = {(f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h),
                    (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h),
                    (-f[0] + 2.0 * f[1] - 2.0 * f[3] + f[4]) / (2.0 * h * h * h)};
    const char* names[3] = {"dH", "d2H", "d3H"};
    for (int i = 0; i < 3; ++i)
        t.line("entropy-derivs", names[i], std::abs(series[i] - fd[i]), 1e-4);
}

void check_geodesic_pde(check_tally& t, double alpha) {
    auto p = distribution::gaussian(0.0, 2.0);
    auto q = distribution::gaussian(0.0, 1.0);
    std::vector<double> u(65);
    for (int i = 0; i < 65; ++i)
        u[i] = 0.01 + 0.98 * i / 64.0;
    if (alpha_param{alpha}.zero_branch()) {
        auto path = make_geodesic_path(p, q, alpha, 33, u);
        t.line("geodesic-pde", "log-linear residual", geodesic_pde_residual(path).max_residual,
               1e-10);
        return;
    }
    double coarse = geodesic_pde_residual(make_geodesic_path(p, q, alpha, 33, u)).max_residual;
    double fine = geodesic_pde_residual(make_geodesic_path(p, q, alpha, 65, u)).max_residual;
    t.line("geodesic-pde", "fine-step residual", fine, 1e-3);
    t.ratio_line("geodesic-pde", "halving ratio", coarse / fine, 3.0, 5.0);
}

int dispatch(int argc, char** argv) {
    CLI::App app{"transport alpha-divergences between one-dimensional densities"};
    app.require_subcommand(1);

    std::string p_path, q_path, spec_path, out_path, form = "qdf", suite;
    double alpha = 1.0, map_x = 0.0;
    int quad_n = 256, t_steps = 5, u_n = 257;
    std::optional<double> clip;
    std::uint64_t seed = 0;
    std::vector<double> poly{0.0, 0.0, 0.0, 1.0};

    auto add_pair = [&](CLI::App* cmd) {
        cmd->add_option("--p", p_path, "distribution spec JSON (first argument)")->required();
        cmd->add_option("--q", q_path, "distribution spec JSON (second argument)")->required();
        cmd->add_option("--quad-n", quad_n, "quadrature nodes");
        cmd->add_option("--clip", clip, "tail clip in [0, 0.5)");
        cmd->add_option("--output", out_path, "write the result here instead of stdout");
    };

    auto* div = app.add_subcommand("div", "transport alpha-divergence between two specs");
    add_pair(div);
    div->add_option("--alpha", alpha, "divergence parameter");
    div->add_option("--form", form, "qdf or entropy")
        ->check(CLI::IsMember({"qdf", "entropy"}));

    auto* w2 = app.add_subcommand("w2", "quantile L2 transport distance");
    add_pair(w2);

    auto* map = app.add_subcommand("map", "optimal transport map value");
    add_pair(map);
    map->add_option("--x", map_x, "evaluation point")->required();

    auto* geo = app.add_subcommand("geodesic", "qdf interpolation frames as CSV");
    add_pair(geo);
    geo->add_option("--alpha", alpha, "interpolation parameter");
    geo->add_option("--t-steps", t_steps, "number of frames including both endpoints");
    geo->add_option("--u-n", u_n, "quantile-level grid size");

    auto* check = app.add_subcommand("check", "run a named identity suite");
    check->add_option("suite", suite,
                      "duality | taylor | pythagorean | gamma3 | entropy-derivs | geodesic-pde")
        ->required();
    check->add_option("--seed", seed, "seed for the property suites");
    check->add_option("--quad-n", quad_n, "quadrature nodes");
    check->add_option("--alpha", alpha, "parameter for the geodesic-pde suite");
    check->add_option("--poly", poly, "polynomial coefficients for the gamma3 suite")
        ->delimiter(',');
    check->add_option("--output", out_path, "write the summary report here");

    auto* info = app.add_subcommand("info", "validate a spec and print derived quantities");
    info->add_option("--spec", spec_path, "distribution spec JSON")->required();
    info->add_option("--quad-n", quad_n, "quadrature nodes");
    info->add_option("--output", out_path, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        throw error(error_kind::usage, e.what());
    }

    auto started = std::chrono::steady_clock::now();
    auto wall_ms = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         started)
            .count();
    };

    if (div->parsed() || w2->parsed() || map->parsed() || geo->parsed()) {
        loaded_spec p = load_spec(p_path);
        loaded_spec q = load_spec(q_path);
        double clip_used = resolve_clip(clip, p.dist.grid_backed() || q.dist.grid_backed());
        auto rule = gauss_legendre_unit(quad_n, clip_used);
        ordered_json inputs{{"p", p.text},       {"q", q.text},   {"alpha", alpha},
                            {"quad_n", quad_n},  {"clip", clip_used}, {"form", form},
                            {"t_steps", t_steps}, {"u_n", u_n},   {"x", map_x}};

        if (div->parsed()) {
            inputs["verb"] = "div";
            auto res = form == "entropy"
                           ? transport_alpha_div_entropy_form(p.dist, q.dist, alpha_param{alpha},
                                                              rule)
                           : transport_alpha_div(p.dist, q.dist, alpha_param{alpha}, rule);
            ordered_json results{{"alpha", alpha},
                                 {"value", res.value},
                                 {"method", to_string(res.method)},
                                 {"clamped", res.clamped}};
            emit_report("div", inputs, results, res.error_estimate, wall_ms(), out_path);
        } else if (w2->parsed()) {
            inputs["verb"] = "w2";
            auto res = wasserstein2(p.dist, q.dist, rule);
            ordered_json results{{"infinite", res.infinite}};
            if (!res.infinite)
                results["value"] = res.value;
            emit_report("w2", inputs, results, res.error_estimate, wall_ms(), out_path);
        } else if (map->parsed()) {
            inputs["verb"] = "map";
            double mapped = transport_map(p.dist, q.dist, map_x);
            double residual = monge_ampere_residual(p.dist, q.dist);
            ordered_json results{{"x", map_x}, {"mapped_x", mapped}};
            emit_report("map", inputs, results, residual, wall_ms(), out_path);
        } else {
            inputs["verb"] = "geodesic";
            if (t_steps < 2)
                throw error(error_kind::usage, "geodesic needs --t-steps >= 2");
            if (u_n < 2)
                throw error(error_kind::usage, "geodesic needs --u-n >= 2");
            double lo = std::max(clip_used, 0.001);
            std::vector<double> u(static_cast<std::size_t>(u_n));
            for (int i = 0; i < u_n; ++i)
                u[static_cast<std::size_t>(i)] = lo + (1.0 - 2.0 * lo) * i / (u_n - 1);
            auto path = make_geodesic_path(p.dist, q.dist, alpha, t_steps, u);
            sink s(out_path);
            *s.out << "t,u,qdf,quantile\n";
            for (std::size_t k = 0; k < path.qdf_frames.size(); ++k) {
                auto d = geodesic_density(path.qdf_frames[k], p.dist, q.dist, alpha,
                                          path.t_grid[k]);
                for (int i = 0; i < u_n; ++i) {
                    double uu = u[static_cast<std::size_t>(i)];
                    *s.out << g17(path.t_grid[k]) << ',' << g17(uu) << ','
                           << g17(path.qdf_frames[k].qdf_values[static_cast<std::size_t>(i)])
                           << ',' << g17(d.quantile(uu)) << '\n';
                }
            }
        }
        return 0;
    }

    if (check->parsed()) {
        auto rule = gauss_legendre_unit(quad_n);
        check_tally t;
        if (suite == "duality")
            check_duality(t, seed, rule);
        else if (suite == "taylor")
            check_taylor(t, rule);
        else if (suite == "pythagorean")
            check_pythagorean(t, rule);
        else if (suite == "gamma3")
            check_gamma3(t, poly);
        else if (suite == "entropy-derivs")
            check_entropy_derivs(t, rule);
        else if (suite == "geodesic-pde")
            check_geodesic_pde(t, alpha);
        else
            throw error(error_kind::usage, "unknown check suite: " + suite);

        ordered_json inputs{{"verb", "check"}, {"suite", suite}, {"seed", seed},
                            {"quad_n", quad_n}, {"alpha", alpha}, {"poly", poly}};
        ordered_json results{{"suite", suite}, {"passed", t.passed}, {"failed", t.failed}};
        emit_report("check", inputs, results, t.worst, wall_ms(), out_path);
        return t.failed == 0 ? 0 : 3;
    }

    // info
    loaded_spec s = load_spec(spec_path);
    ordered_json inputs{{"verb", "info"}, {"spec", s.text}, {"quad_n", quad_n}};
    u_interval dom = s.dist.u_domain();
    double lo = std::max(dom.lo, 0.001), hi = std::min(dom.hi, 0.999);
    ordered_json results;
    results["family"] = s.dist.family();
    results["entropy"] = s.dist.entropy();
    if (auto m2 = s.dist.second_moment())
        results["second_moment"] = *m2;
    else
        results["second_moment"] = "infinite";
    if (auto m1 = s.dist.mean())
        results["mean"] = *m1;
    else
        results["mean"] = "undefined";
    results["u_domain"] = ordered_json{{"lo", dom.lo}, {"hi", dom.hi}};
    results["support"] = ordered_json{{"x_lo", s.dist.quantile(lo)}, {"x_hi", s.dist.quantile(hi)}};
    emit_report("info", inputs, results, 0.0, wall_ms(), out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const error& e) {
        ordered_json err{{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        ordered_json err{{"error", {{"kind", "internal"}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 3;
    }
}
