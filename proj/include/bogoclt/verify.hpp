#pragma once

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bogoclt/fock.hpp"

namespace bogoclt::verify {

using nlohmann::ordered_json;

// Deterministic sub-stream seed for a named task, stable across runs and
// safe to hand to parallel workers.
std::uint64_t sub_seed(std::uint64_t base, std::string_view tag, std::uint64_t index);

// Normalized random states with complex Gaussian coefficients on a chosen
// set of basis states. Box-Muller on raw engine output, so results depend
// only on the seed, not on a library's distribution internals.
class StateSampler {
  public:
    explicit StateSampler(std::uint64_t seed);
    double gaussian();
    std::complex<double> complex_gaussian();
    fock::Vector state(const fock::FockBasis& basis,
                       const std::vector<std::size_t>& support);

  private:
    std::uint64_t next_bits();
    std::uint64_t m_state;
    bool m_have_spare = false;
    double m_spare = 0.0;
};

// <lhs, prod_j exp(i s_j H_j) rhs> for hermitian H_j, evaluated over many
// s-tuples from a one-time eigendecomposition of each factor.
class ProductExpectation {
  public:
    ProductExpectation(const std::vector<fock::Matrix>& hermitian_ops,
                       const fock::Vector& lhs, const fock::Vector& rhs);
    std::complex<double> value(const std::vector<double>& s) const;

  private:
    std::vector<Eigen::VectorXd> m_eigs;
    std::vector<fock::Matrix> m_links;  // V_j^* V_{j+1}
    fock::Vector m_front;               // V_1^* lhs
    fock::Vector m_back;                // V_k^* rhs
};

struct FitOptions {
    std::vector<double> sweep_N{10.0, 20.0, 40.0, 80.0};
    int samples = 200;
    std::uint64_t seed = 20260815ULL;
    double drift_limit = 2.0;
};

// Exact commutation relations on the occupation-margin subspace, checked
// state-by-state without building matrices.
ordered_json check_commutators(const fock::FockBasis& basis, double tol = 1e-12);

ordered_json check_bogoliubov_unitary(const fock::FockBasis& basis,
                                      const Eigen::VectorXd& eta, double tol = 1e-10);

// e^{i phi(f)} e^{i phi(g)} = e^{-i Im<f,g>} e^{i phi(f+g)} for the standard
// field, measured column-wise on low-occupation states.
ordered_json check_weyl_relation(int n_max, std::uint64_t seed, int trials = 2,
                                 double tol = 1e-8);

// Vacuum expectation of a product of Weyl operators against the Gaussian
// closed form exp(-1/2 s.S s), S_ij = <nu_i, nu_j> symmetrized.
ordered_json check_vacuum_char_fn(int n_max, double N, double tol = 1e-6);

// Same product in the one-excitation state a*_p Omega; closed form carries
// the extra factor (1 - |sum_j s_j nu_j(p)|^2).
ordered_json check_excited_char_fn(int n_max, double N, double tol = 1e-6);

// Deviation of the vacuum identity as n_max grows (truncation evidence).
ordered_json check_char_fn_convergence(const std::vector<int>& n_max_list, double N);

// T* Ntot^k T <= C (Ntot^k + 1), k in {1,2}, on a two-mode pair basis.
ordered_json fit_quadratic_conjugation(int n_max, double eta, const FitOptions& opt);

// N ||d_p xi|| <= C [ |eta_p| ||(Ntot+1)^{3/2} xi|| + ||b_p (Ntot+1) xi|| ].
ordered_json fit_residual_norm(int n_max, double eta, const FitOptions& opt);

// <xi, e^{-i phi(h)} (Ntot+alpha)^j e^{i phi(h)} xi> <= C <xi, (Ntot+alpha+||h||^2)^j xi>,
// modified field, j in {1,2}.
ordered_json fit_displaced_number_growth(int n_max, double alpha, const FitOptions& opt);

// e^{kappa A} Ntot e^{-kappa A} <= C (Ntot + 1), kappa in {+-1, +-1/2}, on a
// six-mode closed triad with an explicit low/high partition.
ordered_json fit_cubic_conjugation(int n_max, const FitOptions& opt);

// |<xi1, [b(h), A] xi2>| <= (C ||h|| / sqrt(N)) ||(Ntot+1)^{1/2} xi1|| ||(Ntot+1)^{1/2} xi2||.
ordered_json fit_cubic_field_commutator(int n_max, const FitOptions& opt);

struct SuiteOptions {
    std::uint64_t seed = 20260815ULL;
    int samples = 200;
    std::vector<double> sweep_N{10.0, 20.0, 40.0, 80.0};
    int pair_n_max = 10;
    int char_fn_n_max = 20;
    double char_fn_N = 40.0;
    int weyl_n_max = 24;
    int triad_n_max = 5;
    // Capped by the smallest sweep_N: a truncated space at N holds at most
    // N particles.
    int displaced_n_max = 10;
    double drift_limit = 2.0;
};

// Runs every identity check and bound fit; the returned report is a pure
// function of the options (no clocks, no environment), so equal seeds give
// byte-identical serializations.
ordered_json run_suite(const SuiteOptions& opt);

}  // namespace bogoclt::verify
