#include "bogoclt/coefficients.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

namespace bogoclt {

namespace {
constexpr double pi = 3.1415926535897932384626433832795;
}

double eta_at(const ScatteringSolution& sol, const Momentum& p) {
    if (p.is_zero()) throw std::invalid_argument("eta_at: zero mode excluded");
    return -sol.w_hat(p.p_norm() / sol.N) / (sol.N * sol.N);
}

double mu_of(double a0, double p_norm_sq) {
    if (!(a0 >= 0.0)) throw std::invalid_argument("mu_of: a0 must be >= 0");
    if (!(p_norm_sq > 0.0)) throw std::invalid_argument("mu_of: p must be nonzero");
    return 0.25 * std::log(p_norm_sq / (p_norm_sq + 16.0 * pi * a0));
}

CoefficientTable build_coefficients(const ScatteringSolution& sol,
                                    std::shared_ptr<const ModeSet> modes, int threads) {
    if (!modes) throw std::invalid_argument("build_coefficients: null mode set");
    if (modes->N() != sol.N)
        throw std::invalid_argument("build_coefficients: mode set and solution disagree on N");

    CoefficientTable t;
    t.modes = modes;
    t.N = sol.N;
    t.a0 = sol.a0;
    const auto m = static_cast<Eigen::Index>(modes->size());
    t.eta.resize(m);
    t.sigma.resize(m);
    t.gamma.resize(m);
    t.F.resize(m);
    t.G.resize(m);
    t.tau.resize(m);
    t.mu.resize(m);
    t.eta_plus_tau_closed.resize(m);
    t.W.resize(m);

    // Radial transforms depend on |n|^2 only.
    std::map<int, std::size_t> radial_slot;  // |n|^2 -> slot in `keys`
    for (Eigen::Index i = 0; i < m; ++i) radial_slot.emplace(modes->mode(i).n_norm_sq(), 0);
    std::vector<int> keys;
    keys.reserve(radial_slot.size());
    for (auto& kv : radial_slot) {
        kv.second = keys.size();
        keys.push_back(kv.first);
    }
    std::vector<std::pair<double, double>> radial(keys.size());  // (eta, W)

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            const double p_norm = two_pi * std::sqrt(static_cast<double>(keys[j]));
            const double k = p_norm / sol.N;
            radial[j] = {-sol.w_hat(k) / (sol.N * sol.N), sol.Vf_hat(k)};
        }
    };
    if (threads <= 1 || keys.size() < 2) {
        work(0, keys.size());
    } else {
        const std::size_t nthreads = std::min<std::size_t>(threads, keys.size());
        std::vector<std::thread> pool;
        const std::size_t chunk = (keys.size() + nthreads - 1) / nthreads;
        for (std::size_t tix = 0; tix < nthreads; ++tix) {
            const std::size_t b = tix * chunk;
            const std::size_t e = std::min(keys.size(), b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }

    for (Eigen::Index i = 0; i < m; ++i) {
        const Momentum& mode = modes->mode(i);
        const double p2 = mode.p_norm_sq();
        const auto [eta, W] = radial[radial_slot.at(mode.n_norm_sq())];
        const double sh = std::sinh(eta);
        const double ch = std::cosh(eta);
        const double plus_sq = (sh + ch) * (sh + ch);
        const double F = p2 * (sh * sh + ch * ch) + W * plus_sq;
        const double G = 2.0 * p2 * sh * ch + W * plus_sq;
        if (!(std::abs(G) < F))
            throw NumericError("build_coefficients: |G/F| >= 1, atanh branch undefined");
        t.eta[i] = eta;
        t.W[i] = W;
        t.sigma[i] = sh;
        t.gamma[i] = ch;
        t.F[i] = F;
        t.G[i] = G;
        t.tau[i] = 0.5 * std::atanh(-G / F);
        t.mu[i] = mu_of(sol.a0, p2);
        t.eta_plus_tau_closed[i] = 0.25 * std::log(p2 / (p2 + 2.0 * W));
    }
    return t;
}

}  // namespace bogoclt
