#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "bogoclt/observables.hpp"
#include "bogoclt/scattering.hpp"

namespace bogoclt {

// k x k fluctuation covariance. Entry (i, j) with i <= j is the inner
// product <nu_i, nu_j> (antilinear in the first slot); the matrix is
// symmetric (not Hermitian), so complex entries carry the commutator phases
// of the joint characteristic function. The real part is positive
// semidefinite.
using CovMatrix = Eigen::MatrixXcd;

CovMatrix covariance(const std::vector<NuVector>& nus);
bool covariance_is_real(const CovMatrix& S, double tol = 1e-12);

// exp(-1/2 s.S s) for real s.
std::complex<double> limit_char_fn(const CovMatrix& S, const Eigen::VectorXd& s);

// Joint characteristic function against the one-particle excited state over
// mode p: the Gaussian factor times the occupied-mode correction
// 1 - |sum_j s_j nu_j(p)|^2.
std::complex<double> excited_char_fn(const CovMatrix& S, const std::vector<NuVector>& nus,
                                     std::size_t p_index, const Eigen::VectorXd& s);

// Centered Gaussian density for real SPD covariance, k <= 3.
double gaussian_density(const Eigen::MatrixXd& S, const Eigen::VectorXd& lambda);

struct Density1D {
    Eigen::VectorXd grid;    // uniform, ascending
    Eigen::VectorXd values;  // real part of the inversion integral
    double imag_residual = 0;
};

// s_max with |exp(-variance s^2/2)| <= tail at the end of the range.
double choose_s_max(double variance, double tail = 1e-10);

// rho(lambda) = (1/2pi) int_{-s_max}^{s_max} e^{-i s lambda} phi(s) ds by
// composite Simpson; s_count odd.
Density1D invert_char_fn(const std::function<std::complex<double>(double)>& phi, double s_max,
                         int s_count, const Eigen::VectorXd& lambda_grid);

// Composite-Simpson integral of g against the density over its whole grid.
double integrate_against(const Density1D& d, const std::function<double(double)>& g);

// Probability of [a, b]; [a, b] must lie inside the grid.
double interval_probability(const Density1D& d, double a, double b);

// sup-difference of the cumulative distributions; equal grids required.
double kolmogorov_distance(const Density1D& d1, const Density1D& d2);

// int prod_j ghat_j(s_j) exp(-1/2 s.S s) ds over [-s_max, s_max]^k, k <= 3,
// tensor Simpson with s_count points per axis. Checks that the weighted
// integrand |ghat|(1+s^4) decays at the range ends.
std::complex<double> expectation_of_products(
    const std::vector<std::function<std::complex<double>(double)>>& ghat, const CovMatrix& S,
    double s_max, int s_count);

// int |ghat|(s) (1 + s^4) ds on the same range (reported alongside results).
double integrability_weight(const std::function<std::complex<double>(double)>& ghat, double s_max,
                            int s_count);

}  // namespace bogoclt
