#pragma once

#include <Eigen/Dense>
#include <memory>

#include "bogoclt/lattice.hpp"
#include "bogoclt/scattering.hpp"

namespace bogoclt {

// Per-mode Bogoliubov data derived from a scattering solution. All entries
// depend on the mode through |p| only; construction dedupes by |n|^2.
//
//   eta    = -w_hat(|p|/N) / N^2
//   sigma  = sinh(eta), gamma = cosh(eta)
//   F      = p^2 (sigma^2 + gamma^2) + W (sigma + gamma)^2
//   G      = 2 p^2 sigma gamma      + W (sigma + gamma)^2,  W = Vf_hat(|p|/N)
//   tau    = (1/2) atanh(-G/F)                (principal branch; |G/F| < 1)
//   mu     = (1/4) log(p^2 / (p^2 + 16 pi a0))
//   eta_plus_tau_closed = (1/4) log(p^2 / (p^2 + 2 W))
struct CoefficientTable {
    std::shared_ptr<const ModeSet> modes;
    double N = 0;
    double a0 = 0;
    Eigen::VectorXd eta, sigma, gamma, F, G, tau, mu, eta_plus_tau_closed;
    Eigen::VectorXd W;  // Vf_hat(|p|/N) per mode
};

double eta_at(const ScatteringSolution& sol, const Momentum& p);
double mu_of(double a0, double p_norm_sq);

CoefficientTable build_coefficients(const ScatteringSolution& sol,
                                    std::shared_ptr<const ModeSet> modes, int threads = 1);

}  // namespace bogoclt
