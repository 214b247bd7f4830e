#include "bogoclt/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bogoclt/coefficients.hpp"
#include "bogoclt/io_util.hpp"
#include "bogoclt/limitlaw.hpp"
#include "bogoclt/scattering.hpp"

namespace bogoclt::pipeline {

namespace {

using nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

ordered_json provenance(const RunContext& ctx) {
    return ordered_json{{"config_hash", io::hex64(config_hash(ctx.cfg))},
                        {"seed", ctx.cfg.seed},
                        {"versions", io::versions_block()}};
}

bool want_csv(const RunContext& ctx) { return ctx.cfg.format != "json"; }

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name) {
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    }
    return out.empty() ? std::string("unnamed") : out;
}

std::string csv_header(const RunContext& ctx, const std::string& columns_note) {
    std::ostringstream os;
    os << "# config_hash=" << io::hex64(config_hash(ctx.cfg)) << "\n";
    os << "# " << columns_note << "\n";
    return os.str();
}

ScatteringSolution solve(const RunContext& ctx, double N, double ell) {
    return solve_neumann_cached(ctx.cfg.potential, N, ell, ScatteringGrid{}, ctx.cache_dir);
}

// (1/2) * int_0^R V(r) r^2 dr: the lowest-order scattering length.
double born_a0(const RadialPotential& V) {
    const int n = 4097;
    const double R = V.support_radius();
    const double h = R / (n - 1);
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        const double r = i * h;
        y[static_cast<std::size_t>(i)] = V(r) * r * r;
    }
    return 0.5 * simpson_uniform(y, h);
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

ObservableSpec build_observable(const ObservableConfig& oc,
                                std::shared_ptr<const ModeSet> modes) {
    ObservableSpec spec;
    if (oc.preset == "cosine") {
        spec = cosine_observable(modes, oc.n0);
    } else if (oc.preset == "sine") {
        spec = sine_observable(modes, oc.n0);
    } else if (oc.preset == "exponential") {
        spec = exponential_observable(modes, oc.n0);
    } else {
        spec = make_observable(modes, oc.coefficients, oc.name);
    }
    spec.name = oc.name;
    return spec;
}

// Dyadic shell index by euclidean |n|; modes beyond `cutoff` euclidean are
// skipped so every shell is fully populated.
struct ShellStats {
    std::vector<double> eta_p2_max;
    std::vector<double> tau_p4_max;
    std::vector<int> n_lo, n_hi;
};

ShellStats shell_maxima(const CoefficientTable& table, int cutoff) {
    ShellStats st;
    const int shells = static_cast<int>(std::floor(std::log2(double(cutoff)))) + 1;
    st.eta_p2_max.assign(static_cast<std::size_t>(shells), 0.0);
    st.tau_p4_max.assign(static_cast<std::size_t>(shells), 0.0);
    for (int s = 0; s < shells; ++s) {
        st.n_lo.push_back(1 << s);
        st.n_hi.push_back(std::min((1 << (s + 1)) - 1, cutoff));
    }
    const ModeSet& modes = *table.modes;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const double nn = std::sqrt(double(modes.mode(i).n_norm_sq()));
        if (nn > cutoff) continue;
        const int s = static_cast<int>(std::floor(std::log2(nn)));
        const double p2 = modes.mode(i).p_norm_sq();
        const auto si = static_cast<std::size_t>(s);
        const auto ei = static_cast<Eigen::Index>(i);
        st.eta_p2_max[si] = std::max(st.eta_p2_max[si], std::abs(table.eta(ei)) * p2);
        st.tau_p4_max[si] = std::max(st.tau_p4_max[si], std::abs(table.tau(ei)) * p2 * p2);
    }
    return st;
}

double ratio_max_min(const std::vector<double>& v) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
}

}  // namespace

ordered_json run_scattering(const RunContext& ctx) {
    ordered_json bundle;
    bundle["stage"] = "scattering";
    bundle["provenance"] = provenance(ctx);
    const auto refined = scattering_length_refined(ctx.cfg.potential);
    bundle["scattering_length"] =
        ordered_json{{"a0", refined.a0},
                     {"error_estimate", refined.error_estimate},
                     {"richardson_ratio", refined.richardson_ratio},
                     {"born_value", born_a0(ctx.cfg.potential)},
                     {"statement", "a0 = lim_{r->inf} (r - u(r)/u'(r)) for u'' = (V/2) u, "
                                   "u(0) = 0; exact beyond the support where u is linear"}};

    ordered_json results = ordered_json::array();
    for (double N : ctx.cfg.N_values) {
        const ScatteringSolution sol = solve(ctx, N, ctx.cfg.ell);
        const double dev = sol.integral_Vf - 8.0 * kPi * sol.a0;
        results.push_back(ordered_json{
            {"N", N},
            {"ell", sol.ell},
            {"D", sol.D},
            {"lambda", sol.lambda},
            {"a0", sol.a0},
            {"integral_Vf", sol.integral_Vf},
            {"deviation_from_8pi_a0", dev},
            {"abs_deviation", std::abs(dev)},
            {"statement", "int V f - 8 pi a0 over the Neumann ball of radius D = N ell"}});

        if (want_csv(ctx)) {
            std::ostringstream csv;
            csv << csv_header(ctx, "transforms of the scattering profile at N=" +
                                       io::format_g(N) +
                                       "; k, w_hat(k) = 4pi int (1-f) r^2 sinc(kr), "
                                       "Vf_hat(k) = 4pi int V f r^2 sinc(kr)");
            csv << "k,w_hat,Vf_hat\n";
            const double k_max = 2.0 * two_pi * std::sqrt(3.0) * ctx.cfg.cutoff / N;
            const int points = 129;
            for (int i = 0; i < points; ++i) {
                const double k = k_max * i / (points - 1);
                csv << io::format_full(k) << ',' << io::format_full(sol.w_hat(k)) << ','
                    << io::format_full(sol.Vf_hat(k)) << "\n";
            }
            io::write_text_atomic(
                ctx.out_dir / ("scattering_N" + sanitize(io::format_g(N)) + "_transforms.csv"),
                csv.str());
        }
    }
    bundle["results"] = results;
    io::write_json(ctx.out_dir / "scattering.json", bundle);
    return bundle;
}

ordered_json run_coefficients(const RunContext& ctx) {
    ordered_json bundle;
    bundle["stage"] = "coefficients";
    bundle["provenance"] = provenance(ctx);
    ordered_json results = ordered_json::array();

    for (double N : ctx.cfg.N_values) {
        const ScatteringSolution sol = solve(ctx, N, ctx.cfg.ell);
        auto modes = std::make_shared<ModeSet>(ctx.cfg.cutoff, N);
        const CoefficientTable table = build_coefficients(sol, modes, ctx.cfg.threads);

        double max_step4 = 0.0, max_closed = 0.0;
        for (Eigen::Index i = 0; i < table.eta.size(); ++i) {
            max_step4 = std::max(max_step4,
                                 std::abs(table.eta(i) + table.tau(i) - table.mu(i)));
            max_closed = std::max(
                max_closed,
                std::abs(table.eta(i) + table.tau(i) - table.eta_plus_tau_closed(i)));
        }
        const ShellStats st = shell_maxima(table, ctx.cfg.cutoff);
        ordered_json shells = ordered_json::array();
        for (std::size_t s = 0; s < st.eta_p2_max.size(); ++s) {
            shells.push_back(ordered_json{{"n_lo", st.n_lo[s]},
                                          {"n_hi", st.n_hi[s]},
                                          {"eta_p2_max", st.eta_p2_max[s]},
                                          {"tau_p4_max", st.tau_p4_max[s]}});
        }
        results.push_back(ordered_json{
            {"N", N},
            {"a0", table.a0},
            {"modes", modes->size()},
            {"max_abs_eta_plus_tau_minus_mu", max_step4},
            {"max_closed_form_consistency", max_closed},
            {"shells", shells},
            {"shell_ratio_eta_p2", ratio_max_min(st.eta_p2_max)},
            {"shell_ratio_tau_p4", ratio_max_min(st.tau_p4_max)},
            {"statement",
             "per-mode eta, tau, mu with mu = (1/4) log(p^2/(p^2+16 pi a0)); "
             "eta+tau has the closed form (1/4) log(p^2/(p^2+2 W)), W = Vf_hat(|p|/N)"}});

        if (want_csv(ctx)) {
            std::ostringstream csv;
            csv << csv_header(
                ctx, "per-mode coefficients at N=" + io::format_g(N) +
                         "; columns: n1,n2,n3,p_norm,eta,sigma,gamma,F,G,tau,mu,"
                         "eta_plus_tau_closed,W,abs_eta_plus_tau_minus_mu");
            csv << "n1,n2,n3,p_norm,eta,sigma,gamma,F,G,tau,mu,eta_plus_tau_closed,W,"
                   "abs_eta_plus_tau_minus_mu\n";
            for (std::size_t i = 0; i < modes->size(); ++i) {
                const auto& n = modes->mode(i).n;
                const auto e = static_cast<Eigen::Index>(i);
                csv << n[0] << ',' << n[1] << ',' << n[2] << ','
                    << io::format_full(modes->mode(i).p_norm()) << ','
                    << io::format_full(table.eta(e)) << ',' << io::format_full(table.sigma(e))
                    << ',' << io::format_full(table.gamma(e)) << ','
                    << io::format_full(table.F(e)) << ',' << io::format_full(table.G(e)) << ','
                    << io::format_full(table.tau(e)) << ',' << io::format_full(table.mu(e))
                    << ',' << io::format_full(table.eta_plus_tau_closed(e)) << ','
                    << io::format_full(table.W(e)) << ','
                    << io::format_full(
                           std::abs(table.eta(e) + table.tau(e) - table.mu(e)))
                    << "\n";
            }
            io::write_text_atomic(
                ctx.out_dir / ("coefficients_N" + sanitize(io::format_g(N)) + ".csv"),
                csv.str());
        }
    }
    bundle["results"] = results;
    io::write_json(ctx.out_dir / "coefficients.json", bundle);
    return bundle;
}

ordered_json run_limit(const RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    if (cfg.observables.empty()) {
        throw ConfigError("config error at observables: at least one observable is required "
                          "for the limit stage");
    }
    ordered_json bundle;
    bundle["stage"] = "limit";
    bundle["provenance"] = provenance(ctx);
    ordered_json results = ordered_json::array();

    for (double N : cfg.N_values) {
        const ScatteringSolution sol = solve(ctx, N, cfg.ell);
        auto modes = std::make_shared<ModeSet>(cfg.cutoff, N);
        const CoefficientTable table = build_coefficients(sol, modes, cfg.threads);

        std::optional<std::size_t> excited_index;
        if (cfg.excited_mode) {
            const Momentum p{*cfg.excited_mode};
            if (!modes->contains(p)) {
                throw ConfigError("config error at excited_mode: outside the mode set "
                                  "(cutoff " + std::to_string(cfg.cutoff) + ")");
            }
            excited_index = modes->index_of(p);
        }

        std::vector<NuVector> nus;
        std::vector<const ObservableConfig*> selected;
        for (const std::string& name : cfg.select) {
            for (const auto& oc : cfg.observables) {
                if (oc.name == name) selected.push_back(&oc);
            }
        }
        ordered_json observables = ordered_json::array();
        for (const ObservableConfig* oc : selected) {
            const ObservableSpec spec = build_observable(*oc, modes);
            NuVector nu = dress(spec, table.mu, oc->name);
            const double variance = nu.norm_sq;
            ordered_json entry{{"name", oc->name},
                               {"mean", {{"re", spec.mean.real()}, {"im", spec.mean.imag()}}},
                               {"norm_bound", spec.norm_bound},
                               {"dropped_tail_sq", spec.dropped_tail_sq},
                               {"variance", variance}};

            if (variance > 0) {
                const double sigma = std::sqrt(variance);
                const double s_max = choose_s_max(variance, cfg.inversion.tail);
                Eigen::VectorXd grid(cfg.inversion.lambda_count);
                const double span = cfg.inversion.lambda_span * sigma;
                for (int i = 0; i < cfg.inversion.lambda_count; ++i) {
                    grid(i) = -span + 2.0 * span * i / (cfg.inversion.lambda_count - 1);
                }
                const auto phi = [&](double s) {
                    return std::exp(std::complex<double>(-0.5 * variance * s * s, 0.0));
                };
                const Density1D rho = invert_char_fn(phi, s_max, cfg.inversion.s_count, grid);
                Eigen::MatrixXd S1(1, 1);
                S1(0, 0) = variance;
                double sup_diff = 0.0;
                Density1D gauss{grid, Eigen::VectorXd(grid.size()), 0.0};
                for (Eigen::Index i = 0; i < grid.size(); ++i) {
                    Eigen::VectorXd lam(1);
                    lam << grid(i);
                    gauss.values(i) = gaussian_density(S1, lam);
                    sup_diff = std::max(sup_diff, std::abs(rho.values(i) - gauss.values(i)));
                }
                const double normalization =
                    integrate_against(rho, [](double) { return 1.0; });
                const double p95 =
                    interval_probability(rho, -1.96 * sigma, 1.96 * sigma);
                entry["density"] = ordered_json{
                    {"s_max", s_max},
                    {"imag_residual", rho.imag_residual},
                    {"normalization", normalization},
                    {"sup_diff_vs_gaussian", sup_diff},
                    {"kolmogorov_vs_gaussian", kolmogorov_distance(rho, gauss)},
                    {"interval_prob_1.96_sigma", p95}};

                std::optional<Density1D> rho_exc;
                double v_sq = 0.0;
                if (excited_index) {
                    const auto pe = static_cast<Eigen::Index>(*excited_index);
                    v_sq = std::norm(nu.values(pe));
                    const auto phi_exc = [&](double s) {
                        return phi(s) * (1.0 - v_sq * s * s);
                    };
                    rho_exc = invert_char_fn(phi_exc, s_max, cfg.inversion.s_count, grid);
                    double sup_exc = 0.0;
                    for (Eigen::Index i = 0; i < grid.size(); ++i) {
                        const double lam = grid(i);
                        const double closed =
                            gauss.values(i) *
                            (1.0 + v_sq * (lam * lam - variance) / (variance * variance));
                        sup_exc = std::max(sup_exc, std::abs(rho_exc->values(i) - closed));
                    }
                    entry["excited_density"] = ordered_json{
                        {"mode", {(*cfg.excited_mode)[0], (*cfg.excited_mode)[1],
                                  (*cfg.excited_mode)[2]}},
                        {"nu_at_mode_sq", v_sq},
                        {"normalization",
                         integrate_against(*rho_exc, [](double) { return 1.0; })},
                        {"imag_residual", rho_exc->imag_residual},
                        {"sup_diff_vs_closed_form", sup_exc},
                        {"statement",
                         "density of the one-excitation law: gaussian * (1 + |nu(p)|^2 "
                         "(lambda^2 - sigma^2)/sigma^4)"}};
                }

                if (want_csv(ctx)) {
                    std::ostringstream csv;
                    csv << csv_header(ctx, "density of the limiting law for observable '" +
                                               oc->name + "' at N=" + io::format_g(N));
                    csv << "lambda,rho,rho_gaussian,abs_diff";
                    if (rho_exc) csv << ",rho_excited,rho_excited_closed";
                    csv << "\n";
                    for (Eigen::Index i = 0; i < grid.size(); ++i) {
                        csv << io::format_full(grid(i)) << ',' << io::format_full(rho.values(i))
                            << ',' << io::format_full(gauss.values(i)) << ','
                            << io::format_full(std::abs(rho.values(i) - gauss.values(i)));
                        if (rho_exc) {
                            const double lam = grid(i);
                            const double closed =
                                gauss.values(i) * (1.0 + v_sq * (lam * lam - variance) /
                                                             (variance * variance));
                            csv << ',' << io::format_full(rho_exc->values(i)) << ','
                                << io::format_full(closed);
                        }
                        csv << "\n";
                    }
                    io::write_text_atomic(ctx.out_dir / ("limit_N" +
                                                         sanitize(io::format_g(N)) + "_" +
                                                         sanitize(oc->name) + ".csv"),
                                          csv.str());
                }
            }
            observables.push_back(entry);
            nus.push_back(std::move(nu));
        }

        const CovMatrix S = covariance(nus);
        ordered_json S_re = ordered_json::array(), S_im = ordered_json::array();
        for (Eigen::Index i = 0; i < S.rows(); ++i) {
            ordered_json re_row = ordered_json::array(), im_row = ordered_json::array();
            for (Eigen::Index j = 0; j < S.cols(); ++j) {
                re_row.push_back(S(i, j).real());
                im_row.push_back(S(i, j).imag());
            }
            S_re.push_back(re_row);
            S_im.push_back(im_row);
        }

        results.push_back(ordered_json{
            {"N", N},
            {"a0", table.a0},
            {"observables", observables},
            {"covariance",
             ordered_json{{"statement", "S_ij = <nu_i, nu_j>, i <= j, symmetrized; joint "
                                        "char fn = exp(-1/2 s.S s)"},
                          {"re", S_re},
                          {"im", S_im},
                          {"is_real", covariance_is_real(S)}}},
            {"error_budget",
             ordered_json{{"nominal_rate_N^-1/4", std::pow(N, -0.25)},
                          {"statement", "nominal convergence rate of the fluctuation law "
                                        "toward its Gaussian limit, for context"}}}});
    }
    bundle["results"] = results;
    io::write_json(ctx.out_dir / "limit.json", bundle);
    return bundle;
}

ordered_json run_verify(const RunContext& ctx) {
    ordered_json bundle;
    bundle["stage"] = "verify";
    bundle["provenance"] = provenance(ctx);
    bundle["suite"] = verify::run_suite(ctx.cfg.verify_options);
    io::write_json(ctx.out_dir / "verify.json", bundle);
    return bundle;
}

ordered_json run_sweep(const RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    ordered_json bundle;
    bundle["stage"] = "sweep";
    bundle["provenance"] = provenance(ctx);

    // Integral deviation rate in N.
    {
        std::vector<double> lx, ly;
        ordered_json rows = ordered_json::array();
        for (double N : cfg.sweep.integral_N) {
            const ScatteringSolution sol = solve(ctx, N, cfg.sweep.integral_ell);
            const double dev = std::abs(sol.integral_Vf - 8.0 * kPi * sol.a0);
            rows.push_back(
                ordered_json{{"N", N}, {"ell", cfg.sweep.integral_ell}, {"abs_deviation", dev}});
            lx.push_back(std::log(N));
            ly.push_back(std::log(dev));
        }
        bundle["integral_deviation"] =
            ordered_json{{"statement", "|int V f - 8 pi a0| ~ C/N: log-log slope"},
                         {"rows", rows},
                         {"slope", fit_slope(lx, ly)}};
        if (want_csv(ctx)) {
            std::ostringstream csv;
            csv << csv_header(ctx, "integral deviation sweep; |int V f - 8 pi a0| vs N");
            csv << "N,abs_deviation\n";
            for (const auto& r : rows) {
                csv << io::format_full(r["N"].get<double>()) << ','
                    << io::format_full(r["abs_deviation"].get<double>()) << "\n";
            }
            io::write_text_atomic(ctx.out_dir / "sweep_integral.csv", csv.str());
        }
    }

    // Dressing-angle closure rate under N-doubling.
    {
        std::vector<double> lx, ly;
        ordered_json rows = ordered_json::array();
        for (double N : cfg.sweep.rate_N) {
            const ScatteringSolution sol = solve(ctx, N, cfg.ell);
            auto modes = std::make_shared<ModeSet>(cfg.sweep.rate_cutoff, N);
            const CoefficientTable table = build_coefficients(sol, modes, cfg.threads);
            double max_step4 = 0.0, max_closed = 0.0;
            for (Eigen::Index i = 0; i < table.eta.size(); ++i) {
                max_step4 = std::max(max_step4,
                                     std::abs(table.eta(i) + table.tau(i) - table.mu(i)));
                max_closed = std::max(
                    max_closed,
                    std::abs(table.eta(i) + table.tau(i) - table.eta_plus_tau_closed(i)));
            }
            rows.push_back(ordered_json{{"N", N},
                                        {"max_abs_eta_plus_tau_minus_mu", max_step4},
                                        {"max_closed_form_consistency", max_closed}});
            lx.push_back(std::log(N));
            ly.push_back(std::log(max_step4));
        }
        bundle["dressing_rate"] = ordered_json{
            {"statement", "max_p |eta_p + tau_p - mu_p| ~ C/N: log-log slope; the closed "
                          "form (1/4) log(p^2/(p^2+2W)) must match eta+tau per mode"},
            {"rows", rows},
            {"slope", fit_slope(lx, ly)}};
        if (want_csv(ctx)) {
            std::ostringstream csv;
            csv << csv_header(ctx, "dressing-angle closure sweep");
            csv << "N,max_abs_eta_plus_tau_minus_mu,max_closed_form_consistency\n";
            for (const auto& r : rows) {
                csv << io::format_full(r["N"].get<double>()) << ','
                    << io::format_full(r["max_abs_eta_plus_tau_minus_mu"].get<double>()) << ','
                    << io::format_full(r["max_closed_form_consistency"].get<double>()) << "\n";
            }
            io::write_text_atomic(ctx.out_dir / "sweep_rate.csv", csv.str());
        }
    }

    // Dyadic shell decay of the dressing coefficients.
    {
        const ScatteringSolution sol = solve(ctx, cfg.sweep.shell_N, cfg.ell);
        auto modes = std::make_shared<ModeSet>(cfg.sweep.shell_cutoff, cfg.sweep.shell_N);
        const CoefficientTable table = build_coefficients(sol, modes, cfg.threads);
        const ShellStats st = shell_maxima(table, cfg.sweep.shell_cutoff);
        ordered_json rows = ordered_json::array();
        for (std::size_t s = 0; s < st.eta_p2_max.size(); ++s) {
            rows.push_back(ordered_json{{"n_lo", st.n_lo[s]},
                                        {"n_hi", st.n_hi[s]},
                                        {"eta_p2_max", st.eta_p2_max[s]},
                                        {"tau_p4_max", st.tau_p4_max[s]}});
        }
        bundle["shell_decay"] = ordered_json{
            {"statement", "shell maxima of |eta_p| p^2 and |tau_p| p^4 across dyadic "
                          "shells; bounded ratio certifies the p^-2 / p^-4 envelopes"},
            {"N", cfg.sweep.shell_N},
            {"rows", rows},
            {"ratio_eta_p2", ratio_max_min(st.eta_p2_max)},
            {"ratio_tau_p4", ratio_max_min(st.tau_p4_max)}};
        if (want_csv(ctx)) {
            std::ostringstream csv;
            csv << csv_header(ctx, "shell maxima at N=" + io::format_g(cfg.sweep.shell_N));
            csv << "n_lo,n_hi,eta_p2_max,tau_p4_max\n";
            for (std::size_t s = 0; s < st.eta_p2_max.size(); ++s) {
                csv << st.n_lo[s] << ',' << st.n_hi[s] << ','
                    << io::format_full(st.eta_p2_max[s]) << ','
                    << io::format_full(st.tau_p4_max[s]) << "\n";
            }
            io::write_text_atomic(ctx.out_dir / "sweep_shells.csv", csv.str());
        }
    }

    io::write_json(ctx.out_dir / "sweep.json", bundle);
    return bundle;
}

ordered_json run_report(const std::filesystem::path& out_dir) {
    ordered_json rows = ordered_json::array();
    ordered_json sources = ordered_json::array();
    const auto add = [&rows](const std::string& stage, const std::string& name,
                             const nlohmann::json& value) {
        rows.push_back(ordered_json{{"stage", stage}, {"name", name}, {"value", value}});
    };

    const auto load = [&](const char* fname) -> std::optional<nlohmann::json> {
        const auto path = out_dir / fname;
        std::ifstream in(path);
        if (!in) return std::nullopt;
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::parse_error&) {
            return std::nullopt;
        }
        if (j.contains("provenance")) {
            sources.push_back(ordered_json{
                {"file", fname}, {"config_hash", j["provenance"].value("config_hash", "")}});
        }
        return j;
    };

    if (auto j = load("scattering.json")) {
        add("scattering", "a0", (*j)["scattering_length"]["a0"]);
        for (const auto& r : (*j)["results"]) {
            add("scattering", "abs_deviation(N=" + io::format_g(r["N"].get<double>()) + ")",
                r["abs_deviation"]);
        }
    }
    if (auto j = load("coefficients.json")) {
        for (const auto& r : (*j)["results"]) {
            const std::string n = io::format_g(r["N"].get<double>());
            add("coefficients", "max|eta+tau-mu|(N=" + n + ")",
                r["max_abs_eta_plus_tau_minus_mu"]);
            add("coefficients", "shell_ratio_eta_p2(N=" + n + ")", r["shell_ratio_eta_p2"]);
            add("coefficients", "shell_ratio_tau_p4(N=" + n + ")", r["shell_ratio_tau_p4"]);
        }
    }
    if (auto j = load("limit.json")) {
        for (const auto& r : (*j)["results"]) {
            const std::string n = io::format_g(r["N"].get<double>());
            for (const auto& ob : r["observables"]) {
                const std::string base = ob["name"].get<std::string>() + "(N=" + n + ")";
                add("limit", "variance " + base, ob["variance"]);
                if (ob.contains("density")) {
                    add("limit", "sup_diff_vs_gaussian " + base,
                        ob["density"]["sup_diff_vs_gaussian"]);
                    add("limit", "interval_prob_1.96_sigma " + base,
                        ob["density"]["interval_prob_1.96_sigma"]);
                }
            }
        }
    }
    if (auto j = load("verify.json")) {
        const auto& summary = (*j)["suite"]["summary"];
        add("verify", "checks_passed", summary["passed"]);
        add("verify", "checks_failed", summary["failed"]);
        for (const auto& c : (*j)["suite"]["checks"]) {
            add("verify", c["name"].get<std::string>() + ".pass", c["pass"]);
        }
    }
    if (auto j = load("sweep.json")) {
        add("sweep", "integral_deviation.slope", (*j)["integral_deviation"]["slope"]);
        add("sweep", "dressing_rate.slope", (*j)["dressing_rate"]["slope"]);
        add("sweep", "shell_decay.ratio_eta_p2", (*j)["shell_decay"]["ratio_eta_p2"]);
        add("sweep", "shell_decay.ratio_tau_p4", (*j)["shell_decay"]["ratio_tau_p4"]);
    }

    ordered_json report;
    report["stage"] = "report";
    report["sources"] = sources;
    report["artifacts"] = sources.size();
    report["rows"] = rows;
    io::write_json(out_dir / "report.json", report);

    std::ostringstream csv;
    csv << "stage,name,value\n";
    for (const auto& r : rows) {
        const auto& v = r["value"];
        csv << r["stage"].get<std::string>() << ',' << '"' << r["name"].get<std::string>()
            << '"' << ',';
        if (v.is_number()) {
            csv << io::format_full(v.get<double>());
        } else {
            csv << v.dump();
        }
        csv << "\n";
    }
    io::write_text_atomic(out_dir / "report.csv", csv.str());
    return report;
}

}  // namespace bogoclt::pipeline
