#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "bogoclt/lattice.hpp"

namespace bogoclt::fock {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Truncated bosonic Fock space over a finite negation-closed list of nonzero
// modes. Basis states are occupation vectors with total occupation <= n_max,
// enumerated lexicographically, vacuum first. N is the particle-number
// parameter of the modified operators b_p = sqrt((N - Ntot)/N) a_p; the
// constraint n_max <= N keeps their square roots real.
//
// Operator identities of degree d (raising by at most d quanta) hold exactly
// on the margin subspace of states with total occupation <= n_max - d;
// closer to the cap the truncation is visible by construction.
class FockBasis {
  public:
    FockBasis(std::vector<Momentum> modes, int n_max, double N,
              std::size_t dimension_cap = 200000);

    std::size_t dim() const { return m_states.size(); }
    int n_max() const { return m_n_max; }
    double N() const { return m_N; }

    std::size_t mode_count() const { return m_modes.size(); }
    const Momentum& mode(std::size_t j) const { return m_modes[j]; }
    const std::vector<Momentum>& modes() const { return m_modes; }
    std::size_t mode_index(const Momentum& m) const;
    std::size_t negation_mode(std::size_t j) const { return m_neg[j]; }

    const std::vector<int>& occupation(std::size_t state) const { return m_states[state]; }
    int total_occupation(std::size_t state) const { return m_totals[state]; }
    bool has_state(const std::vector<int>& occ) const;
    std::size_t state_index(const std::vector<int>& occ) const;

    // States with total occupation <= n_max - margin.
    std::vector<std::size_t> margin_states(int margin) const;

  private:
    std::uint64_t pack(const std::vector<int>& occ) const;

    std::vector<Momentum> m_modes;
    int m_n_max;
    double m_N;
    std::vector<std::size_t> m_neg;
    std::vector<std::vector<int>> m_states;
    std::vector<int> m_totals;
    std::unordered_map<std::uint64_t, std::size_t> m_index;
};

Vector vacuum(const FockBasis& basis);
Vector basis_vector(const FockBasis& basis, const std::vector<int>& occ);

Matrix annihilator(const FockBasis& basis, std::size_t mode);
Matrix creator(const FockBasis& basis, std::size_t mode);
Matrix modified_annihilator(const FockBasis& basis, std::size_t mode);
Matrix modified_creator(const FockBasis& basis, std::size_t mode);

// Diagonal (Ntot + shift)^exponent.
Matrix diagonal_power(const FockBasis& basis, double shift, double exponent);
Matrix number_op(const FockBasis& basis);
// Second quantization of a one-particle matrix over the basis modes.
Matrix dGamma(const FockBasis& basis, const Matrix& one_particle);

// Smeared annihilator sum_p conj(h_p) a_p (or b_p when modified).
Matrix smeared_annihilator(const FockBasis& basis, const Vector& h, bool modified);
// Self-adjoint field a(h) + a*(h) (or the modified version).
Matrix field_op(const FockBasis& basis, const Vector& h, bool modified);
// exp(i s field_op).
Matrix weyl_op(const FockBasis& basis, const Vector& h, double s, bool modified);

// Scaling-and-squaring matrix exponential.
Matrix expm(const Matrix& m);

// T = exp(1/2 sum_p eta_p (b*_p b*_{-p} - b_{-p} b_p)); eta must be
// even under mode negation.
Matrix bogoliubov_map(const FockBasis& basis, const Eigen::VectorXd& eta);

// Exact residual d_p = T* b_p T - cosh(eta_p) b_p - sinh(eta_p) b*_{-p}.
Matrix residual_d(const FockBasis& basis, const Matrix& T, const Eigen::VectorXd& eta,
                  std::size_t mode);

struct CubicPartition {
    std::vector<std::size_t> low;
    std::vector<std::size_t> high;
};

struct CubicResult {
    Matrix A;                      // antihermitian by construction
    std::size_t pairs_used = 0;    // (r, v) pairs kept
    std::size_t pairs_dropped = 0; // r+v left the mode set
};

// A = (1/sqrt(N)) sum_{r in high, v in low, r+v != 0} eta_r
//       [ sinh(eta_v) b*_{r+v} b*_{-r} b*_{-v}
//       + cosh(eta_v) b*_{r+v} b*_{-r} b_v  - h.c. ],
// dropping pairs whose r+v leaves the mode set (counted).
CubicResult cubic_generator(const FockBasis& basis, const Eigen::VectorXd& eta,
                            const CubicPartition& partition);

}  // namespace bogoclt::fock
