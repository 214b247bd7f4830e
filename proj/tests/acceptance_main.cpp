// Acceptance harness: one line per criterion, exit code = number of failures.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "bogoclt/coefficients.hpp"
#include "bogoclt/io_util.hpp"
#include "bogoclt/limitlaw.hpp"
#include "bogoclt/pipeline.hpp"
#include "bogoclt/scattering.hpp"
#include "bogoclt/verify.hpp"

using namespace bogoclt;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %2d %-28s %s\n", ok ? "PASS" : "FAIL", idx, name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const nlohmann::ordered_json& find_check(const nlohmann::ordered_json& suite,
                                         const std::string& name, std::size_t skip = 0) {
    std::size_t seen = 0;
    for (const auto& c : suite.at("checks")) {
        if (c.at("name") == name) {
            if (seen == skip) return c;
            ++seen;
        }
    }
    throw std::runtime_error("missing check " + name);
}

void collect_drifts(const nlohmann::ordered_json& j, std::vector<double>& drifts,
                    std::vector<double>& constants) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (k == "drift" && v.is_number()) drifts.push_back(v.get<double>());
            if (k == "C" && v.is_number()) constants.push_back(v.get<double>());
            collect_drifts(v, drifts, constants);
        }
    } else if (j.is_array()) {
        for (const auto& v : j) collect_drifts(v, drifts, constants);
    }
}

}  // namespace

int main() {
    const auto V = RadialPotential::soft_sphere(2.0, 0.5);
    const double a0_exact = 0.5 - std::tanh(0.5);

    // ---- 1: scattering length against the constant-core closed form ----
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto res = scattering_length_refined(V);
        const double el = seconds_since(t0);
        const double dev = std::abs(res.a0 - a0_exact);
        report(1, "scattering-length", dev <= 1e-8 && el < 1.0,
               fmt("|a0 - (1/2 - tanh 1/2)| = %.3e (tol 1e-8), %.2f s (limit 1 s)", dev, el));
    }

    // ---- 2: interaction-integral deviation decays like 1/N ----
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<double> lx, ly;
        for (double N : {1e2, 1e3, 1e4, 1e5}) {
            const auto sol = solve_neumann(V, N, 0.49);
            lx.push_back(std::log(N));
            ly.push_back(std::log(std::abs(sol.integral_Vf - 8.0 * kPi * a0_exact)));
        }
        const double slope = fit_slope(lx, ly);
        const double el = seconds_since(t0);
        report(2, "integral-rate", std::abs(slope + 1.0) <= 0.15 && el < 30.0,
               fmt("log-log slope = %.4f (want -1 +- 0.15), %.1f s (limit 30 s)", slope, el));
    }

    // ---- 3: dyadic-shell decay envelopes p^-2 for eta, p^-4 for tau ----
    {
        const auto sol = solve_neumann(V, 40000.0, 0.45);
        auto modes = std::make_shared<ModeSet>(8, 40000.0);
        const auto table = build_coefficients(sol, modes);
        std::vector<double> eta_max(4, 0.0), tau_max(4, 0.0);
        for (std::size_t i = 0; i < modes->size(); ++i) {
            const double nn = std::sqrt(double(modes->mode(i).n_norm_sq()));
            if (nn > 8.0) continue;
            const int s = static_cast<int>(std::floor(std::log2(nn)));
            const double p2 = modes->mode(i).p_norm_sq();
            const auto e = static_cast<Eigen::Index>(i);
            eta_max[static_cast<std::size_t>(s)] =
                std::max(eta_max[static_cast<std::size_t>(s)], std::abs(table.eta(e)) * p2);
            tau_max[static_cast<std::size_t>(s)] =
                std::max(tau_max[static_cast<std::size_t>(s)], std::abs(table.tau(e)) * p2 * p2);
        }
        const auto ratio = [](const std::vector<double>& v) {
            double lo = v[0], hi = v[0];
            for (double x : v) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
            return hi / lo;
        };
        const double re = ratio(eta_max), rt = ratio(tau_max);
        report(3, "shell-decay", re < 3.0 && rt < 3.0,
               fmt("shell-max ratios: |eta| p^2 %.3f, |tau| p^4 %.3f (want < 3)", re, rt));
    }

    // ---- 4: dressing-exponent closure rate and closed-form consistency ----
    {
        std::vector<double> lx, ly;
        double max_closed = 0.0;
        for (double N : {2500.0, 5000.0, 10000.0, 20000.0}) {
            const auto sol = solve_neumann(V, N, 0.45);
            auto modes = std::make_shared<ModeSet>(3, N);
            const auto table = build_coefficients(sol, modes);
            double dev = 0.0;
            for (Eigen::Index i = 0; i < table.eta.size(); ++i) {
                dev = std::max(dev, std::abs(table.eta(i) + table.tau(i) - table.mu(i)));
                max_closed = std::max(max_closed,
                                      std::abs(table.eta(i) + table.tau(i) -
                                               table.eta_plus_tau_closed(i)));
            }
            lx.push_back(std::log(N));
            ly.push_back(std::log(dev));
        }
        const double slope = fit_slope(lx, ly);
        report(4, "dressing-rate", std::abs(slope + 1.0) <= 0.2 && max_closed <= 1e-6,
               fmt("slope = %.4f (want -1 +- 0.2), closed-form consistency %.2e (tol 1e-6)",
                   slope, max_closed));
    }

    // ---- 5: vacuum characteristic-function identity ----
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto c = verify::check_vacuum_char_fn(20, 40.0, 1e-6);
        const double el = seconds_since(t0);
        report(5, "vacuum-char-fn", c.at("pass").get<bool>() && el < 60.0,
               fmt("max deviation %.2e over %d grid points incl. complex overlap (tol 1e-6), "
                   "%.1f s (limit 60 s)",
                   c.at("max_deviation").get<double>(), c.at("grid_points").get<int>(), el));
    }

    // ---- 6: one-excitation identity and its density closed form ----
    {
        const auto c = verify::check_excited_char_fn(20, 40.0, 1e-6);
        // Density branch: phi(s) = e^{-var s^2/2} (1 - v^2 s^2) inverts to
        // gauss * (1 + v^2 (x^2 - var)/var^2).
        const double var = 1.3, v_sq = 0.5;
        const double s_max = choose_s_max(var);
        Eigen::VectorXd grid(1601);
        const double span = 8.0 * std::sqrt(var);
        for (int i = 0; i < 1601; ++i) grid(i) = -span + 2.0 * span * i / 1600.0;
        const auto phi = [&](double s) {
            return std::complex<double>(std::exp(-0.5 * var * s * s) * (1.0 - v_sq * s * s),
                                        0.0);
        };
        const Density1D d = invert_char_fn(phi, s_max, 4001, grid);
        const double norm_dev = std::abs(
            integrate_against(d, [](double) { return 1.0; }) - 1.0);
        Eigen::MatrixXd S1(1, 1);
        S1 << var;
        double sup = 0.0;
        for (int i = 0; i < 1601; ++i) {
            Eigen::VectorXd x(1);
            x << grid(i);
            const double closed = gaussian_density(S1, x) *
                                  (1.0 + v_sq * (grid(i) * grid(i) - var) / (var * var));
            sup = std::max(sup, std::abs(d.values(i) - closed));
        }
        report(6, "excited-char-fn",
               c.at("pass").get<bool>() && norm_dev <= 1e-8 && sup <= 1e-6,
               fmt("operator deviation %.2e (tol 1e-6), density mass defect %.2e (tol 1e-8), "
                   "closed-form sup %.2e (tol 1e-6)",
                   c.at("max_deviation").get<double>(), norm_dev, sup));
    }

    // ---- run the verification stage twice for criteria 7-9 and 11 ----
    pipeline::RunContext vctx;
    vctx.cfg.format = "json";
    const fs::path base = fs::temp_directory_path() / "bogoclt_acceptance";
    fs::remove_all(base);
    vctx.out_dir = base / "verify_a";
    const auto bundle_a = pipeline::run_verify(vctx);
    vctx.out_dir = base / "verify_b";
    (void)pipeline::run_verify(vctx);
    const auto& suite = bundle_a.at("suite");

    // ---- 7: canonical and number-conserving commutators ----
    {
        const auto& pair = find_check(suite, "commutation-relations", 0);
        const auto& triad = find_check(suite, "commutation-relations", 1);
        const double worst =
            std::max({pair.at("max_deviation_ccr").get<double>(),
                      pair.at("max_deviation_modified").get<double>(),
                      pair.at("max_deviation_bb").get<double>(),
                      triad.at("max_deviation_ccr").get<double>(),
                      triad.at("max_deviation_modified").get<double>(),
                      triad.at("max_deviation_bb").get<double>()});
        report(7, "commutators",
               pair.at("pass").get<bool>() && triad.at("pass").get<bool>() && worst <= 1e-12,
               fmt("max deviation %.2e on margin subspaces of both bases (tol 1e-12)", worst));
    }

    // ---- 8: Weyl composition relation ----
    {
        const auto& w = find_check(suite, "weyl-relation");
        report(8, "weyl-relation",
               w.at("pass").get<bool>() && w.at("max_residual").get<double>() <= 1e-8,
               fmt("max residual %.2e (tol 1e-8)", w.at("max_residual").get<double>()));
    }

    // ---- 9: growth-bound constants stay finite and stable in N ----
    {
        const char* names[] = {"quadratic-conjugation-growth", "residual-norm",
                               "displaced-number-growth", "cubic-conjugation-growth",
                               "cubic-field-commutator"};
        bool ok = true;
        double worst_drift = 0.0;
        for (const char* n : names) {
            const auto& c = find_check(suite, n);
            ok = ok && c.at("pass").get<bool>() && c.at("samples").get<int>() >= 200 &&
                 c.contains("seed");
            std::vector<double> drifts, constants;
            collect_drifts(c, drifts, constants);
            ok = ok && !drifts.empty() && !constants.empty();
            for (double d : drifts) {
                worst_drift = std::max(worst_drift, d);
                ok = ok && d < 2.0;
            }
            for (double v : constants) ok = ok && std::isfinite(v);
        }
        report(9, "bound-fits", ok,
               fmt("5 fitted families, worst N-sweep drift %.3f (want < 2), >= 200 samples "
                   "each, seeds recorded",
                   worst_drift));
    }

    // ---- 10: limit-law pipeline closure ----
    {
        const double var = 1.7;
        CovMatrix S(1, 1);
        S(0, 0) = var;
        const double s_max = choose_s_max(var);
        Eigen::VectorXd grid(1601);
        const double span = 8.0 * std::sqrt(var);
        for (int i = 0; i < 1601; ++i) grid(i) = -span + 2.0 * span * i / 1600.0;
        const auto phi = [&](double s) {
            Eigen::VectorXd sv(1);
            sv << s;
            return limit_char_fn(S, sv);
        };
        const Density1D d = invert_char_fn(phi, s_max, 4001, grid);
        Eigen::MatrixXd Sr(1, 1);
        Sr << var;
        double sup = 0.0;
        for (int i = 0; i < 1601; ++i) {
            Eigen::VectorXd x(1);
            x << grid(i);
            sup = std::max(sup, std::abs(d.values(i) - gaussian_density(Sr, x)));
        }
        const double sigma = std::sqrt(var);
        const double p95 = interval_probability(d, -1.96 * sigma, 1.96 * sigma);

        const auto ghat = [](double s) {
            return std::complex<double>(std::exp(-0.5 * s * s) / std::sqrt(2.0 * kPi), 0.0);
        };
        const auto via_s = expectation_of_products({ghat}, S, 8.0, 1601);
        const double via_lambda =
            integrate_against(d, [](double x) { return std::exp(-0.5 * x * x); });
        const double route_diff = std::abs(via_s - std::complex<double>(via_lambda, 0.0));

        report(10, "limit-law-closure",
               sup <= 1e-6 && std::abs(p95 - 0.9500) <= 5e-4 && route_diff <= 1e-8,
               fmt("inversion sup %.2e (tol 1e-6), P[+-1.96 sigma] = %.5f (want 0.9500 +- "
                   "5e-4), route gap %.2e (tol 1e-8)",
                   sup, p95, route_diff));
    }

    // ---- 11: byte-identical verification artifacts under one seed ----
    {
        const std::string a = read_file(base / "verify_a" / "verify.json");
        const std::string b = read_file(base / "verify_b" / "verify.json");
        report(11, "determinism", !a.empty() && a == b,
               fmt("two runs, %zu bytes each, %s", a.size(),
                   a == b ? "identical" : "DIFFER"));
    }
    fs::remove_all(base);

    std::printf("%d/11 criteria passed\n", 11 - g_failures);
    return g_failures;
}
