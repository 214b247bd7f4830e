#include "bogoclt/scattering.hpp"

#include "bogoclt/lattice.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace bogoclt {

namespace {

constexpr double four_pi = 12.566370614359172953850573533118;

struct ShotEnd {
    double u;
    double du;
};

// RK4 for u'' = (V/2 - lambda) u on [0, R], u(0) = 0, u'(0) = 1.
// When `store` is given it receives u at the step nodes (size steps + 1).
ShotEnd integrate_inner(const RadialPotential& V, double lambda, double R, int steps,
                        std::vector<double>* store = nullptr) {
    const double h = R / steps;
    double u = 0.0, du = 1.0, r = 0.0;
    if (store) {
        store->clear();
        store->reserve(static_cast<std::size_t>(steps) + 1);
        store->push_back(u);
    }
    auto rhs = [&](double rr, double uu) { return (0.5 * V(rr) - lambda) * uu; };
    for (int i = 0; i < steps; ++i) {
        const double k1u = du, k1v = rhs(r, u);
        const double k2u = du + 0.5 * h * k1v, k2v = rhs(r + 0.5 * h, u + 0.5 * h * k1u);
        const double k3u = du + 0.5 * h * k2v, k3v = rhs(r + 0.5 * h, u + 0.5 * h * k2u);
        const double k4u = du + h * k3v, k4v = rhs(r + h, u + h * k3u);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        du += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        r = R * (i + 1) / static_cast<double>(steps);
        if (store) store->push_back(u);
    }
    return {u, du};
}

// Outside the support the equation is u'' = -lambda u; propagate the
// closed-form solution from R to r (stable for lambda -> 0).
ShotEnd propagate_free(ShotEnd at_R, double lambda, double dr) {
    const double w = std::sqrt(lambda);
    const double c = std::cos(w * dr);
    const double s_over_w = dr * sinc(w * dr);          // sin(w dr)/w
    const double w_s = w * std::sin(w * dr);            // w sin(w dr)
    return {at_R.u * c + at_R.du * s_over_w, -at_R.u * w_s + at_R.du * c};
}

double neumann_mismatch(const RadialPotential& V, double lambda, double R, double D, int steps) {
    const ShotEnd end = propagate_free(integrate_inner(V, lambda, R, steps), lambda, D - R);
    return end.du - end.u / D;
}

std::uint64_t cache_key_hash(const RadialPotential& V, double N, double ell,
                             const ScatteringGrid& grid) {
    std::uint64_t h = V.content_hash();
    auto mix = [&h](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    const int schema = 1;
    mix(&schema, sizeof schema);
    mix(&N, sizeof N);
    mix(&ell, sizeof ell);
    mix(&grid.inner_points, sizeof grid.inner_points);
    mix(&grid.outer_points, sizeof grid.outer_points);
    return h;
}

std::filesystem::path cache_file(const std::filesystem::path& dir, std::uint64_t key) {
    char name[40];
    std::snprintf(name, sizeof name, "scat_%016llx.json", static_cast<unsigned long long>(key));
    return dir / name;
}

}  // namespace

double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

double simpson_uniform(const std::vector<double>& y, double h) {
    if (y.size() < 3 || y.size() % 2 == 0)
        throw std::invalid_argument("simpson_uniform: need an odd number of points >= 3");
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i + 1 < y.size(); i += 2) odd += y[i];
    for (std::size_t i = 2; i + 1 < y.size(); i += 2) even += y[i];
    return h / 3.0 * (y.front() + y.back() + 4.0 * odd + 2.0 * even);
}

double scattering_length(const RadialPotential& V, int steps) {
    const double R = V.support_radius();
    const ShotEnd end = integrate_inner(V, 0.0, R, steps);
    if (!(end.du > 0.0))
        throw NumericError("scattering_length: u'(R) <= 0, outward solution lost");
    return R - end.u / end.du;
}

ScatteringLengthResult scattering_length_refined(const RadialPotential& V, int steps) {
    if (steps % 4 != 0 || steps < 16)
        throw std::invalid_argument("scattering_length_refined: steps must be a multiple of 4, >= 16");
    const double a_full = scattering_length(V, steps);
    const double a_half = scattering_length(V, steps / 2);
    const double a_quarter = scattering_length(V, steps / 4);
    const double d1 = a_half - a_full;
    const double d2 = a_quarter - a_half;
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(a_full));
    if (std::abs(d1) <= floor) {
        // Converged below roundoff; the ratio carries no information.
        return {a_full, std::abs(d1), std::numeric_limits<double>::infinity()};
    }
    const double ratio = std::abs(d2) / std::abs(d1);
    if (ratio < 3.5)
        throw NumericError("scattering_length_refined: grid too coarse (Richardson ratio < 3.5)");
    return {a_full, std::abs(d1) / (ratio - 1.0), ratio};
}

ScatteringSolution solve_neumann(const RadialPotential& V, double N, double ell,
                                 const ScatteringGrid& grid) {
    if (!(N > 0)) throw std::invalid_argument("solve_neumann: N must be positive");
    if (!(ell > 0.0 && ell < 0.5)) throw std::invalid_argument("solve_neumann: ell must lie in (0, 1/2)");
    if (grid.inner_points < 5 || grid.inner_points % 2 == 0 || grid.outer_points < 5 ||
        grid.outer_points % 2 == 0)
        throw std::invalid_argument("solve_neumann: grid point counts must be odd and >= 5");

    const double D = N * ell;
    const double R = V.support_radius();
    if (!(R < D)) throw NumericError("solve_neumann: potential support reaches the Neumann boundary");

    ScatteringSolution sol;
    sol.N = N;
    sol.ell = ell;
    sol.D = D;
    sol.inner_count = static_cast<std::size_t>(grid.inner_points);
    sol.m_potential = V;

    const int inner_steps = grid.inner_points - 1;

    double lambda = 0.0;
    if (V.max_value() > 0.0) {
        auto g = [&](double lam) { return neumann_mismatch(V, lam, R, D, inner_steps); };
        const double g0 = g(0.0);
        if (!(g0 > 0.0))
            throw NumericError("solve_neumann: mismatch at lambda=0 not positive; cannot bracket");
        // The window [0, max V] holds many Neumann eigenvalues once D is large;
        // walk in sub-gap steps so the first sign change isolates the ground one.
        const double step = std::min(V.max_value(), 0.25 * (0.5 * two_pi / D) * (0.5 * two_pi / D));
        double lo = 0.0, hi = 0.0;
        bool bracketed = false;
        for (int j = 1; j <= 100000; ++j) {
            hi = j * step;
            if (hi > V.max_value() + step) break;
            if (g(hi) < 0.0) {
                lo = (j - 1) * step;
                bracketed = true;
                break;
            }
        }
        if (!bracketed) throw NumericError("solve_neumann: eigenvalue bracketing failed on [0, max V]");
        for (int it = 0; it < 400 && (hi - lo) > 1e-16 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) > 0.0 ? lo : hi) = mid;
        }
        lambda = 0.5 * (lo + hi);
    }
    sol.lambda = lambda;

    // Tabulate: numeric u on [0, R], closed-form propagation on [R, D].
    std::vector<double> u_inner;
    const ShotEnd at_R = integrate_inner(V, lambda, R, inner_steps, &u_inner);

    const std::size_t n_in = sol.inner_count;
    const std::size_t n_out = static_cast<std::size_t>(grid.outer_points);
    sol.r.resize(n_in + n_out);
    sol.f.resize(n_in + n_out);
    for (std::size_t i = 0; i < n_in; ++i) sol.r[i] = R * static_cast<double>(i) / (n_in - 1);
    for (std::size_t i = 0; i < n_out; ++i)
        sol.r[n_in + i] = R + (D - R) * static_cast<double>(i) / (n_out - 1);

    const ShotEnd at_D = propagate_free(at_R, lambda, D - R);
    if (!(at_D.u > 0.0))
        throw NumericError("solve_neumann: u(D) <= 0, landed on an excited branch");
    const double scale = D / at_D.u;  // enforce f(D) = 1

    sol.f[0] = scale;  // lim u/r = u'(0) = 1 before scaling
    for (std::size_t i = 1; i < n_in; ++i) sol.f[i] = scale * u_inner[i] / sol.r[i];
    for (std::size_t i = 0; i < n_out; ++i) {
        const double rr = sol.r[n_in + i];
        const double u = propagate_free(at_R, lambda, rr - R).u;
        sol.f[n_in + i] = scale * u / rr;
    }
    if (std::abs(sol.f.back() - 1.0) > 1e-12)
        throw NumericError("solve_neumann: boundary normalization failed");
    sol.f.back() = 1.0;
    for (double v : sol.f)
        if (!(v > 0.0)) throw NumericError("solve_neumann: f not positive, wrong eigenvalue branch");

    std::vector<double> integrand(n_in);
    for (std::size_t i = 0; i < n_in; ++i)
        integrand[i] = V(sol.r[i]) * sol.f[i] * sol.r[i] * sol.r[i];
    sol.integral_Vf = four_pi * simpson_uniform(integrand, R / inner_steps);

    sol.a0 = scattering_length(V, inner_steps);
    return sol;
}

double ScatteringSolution::w_hat(double k) const {
    if (k < 0.0) throw std::invalid_argument("w_hat: k must be >= 0");
    const std::size_t n_in = inner_count;
    std::vector<double> inner(n_in), outer(r.size() - n_in);
    for (std::size_t i = 0; i < n_in; ++i)
        inner[i] = (1.0 - f[i]) * r[i] * r[i] * sinc(k * r[i]);
    for (std::size_t i = n_in; i < r.size(); ++i)
        outer[i - n_in] = (1.0 - f[i]) * r[i] * r[i] * sinc(k * r[i]);
    const double h_in = r[1] - r[0];
    const double h_out = r[n_in + 1] - r[n_in];
    return four_pi * (simpson_uniform(inner, h_in) + simpson_uniform(outer, h_out));
}

double ScatteringSolution::Vf_hat(double k) const {
    if (k < 0.0) throw std::invalid_argument("Vf_hat: k must be >= 0");
    const std::size_t n_in = inner_count;
    std::vector<double> inner(n_in);
    for (std::size_t i = 0; i < n_in; ++i)
        inner[i] = m_potential(r[i]) * f[i] * r[i] * r[i] * sinc(k * r[i]);
    return four_pi * simpson_uniform(inner, r[1] - r[0]);
}

std::optional<ScatteringSolution> cache_load(const std::filesystem::path& dir,
                                             const RadialPotential& V, double N, double ell,
                                             const ScatteringGrid& grid) {
    const auto path = cache_file(dir, cache_key_hash(V, N, ell, grid));
    std::ifstream in(path);
    if (!in) return std::nullopt;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
    if (j.value("schema", 0) != 1) return std::nullopt;
    if (j.value("potential_hash", std::uint64_t{0}) != V.content_hash()) return std::nullopt;
    if (j.value("N", 0.0) != N || j.value("ell", 0.0) != ell) return std::nullopt;

    ScatteringSolution sol;
    sol.N = N;
    sol.ell = ell;
    sol.D = j.at("D").get<double>();
    sol.lambda = j.at("lambda").get<double>();
    sol.a0 = j.at("a0").get<double>();
    sol.integral_Vf = j.at("integral_Vf").get<double>();
    sol.inner_count = j.at("inner_count").get<std::size_t>();
    sol.r = j.at("r").get<std::vector<double>>();
    sol.f = j.at("f").get<std::vector<double>>();
    sol.m_potential = V;
    if (sol.r.size() != sol.f.size() || sol.r.size() < sol.inner_count) return std::nullopt;
    return sol;
}

void cache_store(const std::filesystem::path& dir, const ScatteringSolution& sol,
                 const ScatteringGrid& grid) {
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["schema"] = 1;
    j["potential_hash"] = sol.m_potential.content_hash();
    j["potential"] = sol.m_potential.describe();
    j["N"] = sol.N;
    j["ell"] = sol.ell;
    j["D"] = sol.D;
    j["lambda"] = sol.lambda;
    j["a0"] = sol.a0;
    j["integral_Vf"] = sol.integral_Vf;
    j["inner_count"] = sol.inner_count;
    j["r"] = sol.r;
    j["f"] = sol.f;
    const auto path = cache_file(dir, cache_key_hash(sol.m_potential, sol.N, sol.ell, grid));
    std::ofstream out(path);
    out << j.dump();
}

ScatteringSolution solve_neumann_cached(const RadialPotential& V, double N, double ell,
                                        const ScatteringGrid& grid,
                                        const std::optional<std::filesystem::path>& cache_dir) {
    if (cache_dir) {
        if (auto hit = cache_load(*cache_dir, V, N, ell, grid)) return *hit;
    }
    ScatteringSolution sol = solve_neumann(V, N, ell, grid);
    if (cache_dir) cache_store(*cache_dir, sol, grid);
    return sol;
}

}  // namespace bogoclt
