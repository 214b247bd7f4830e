#include "bogoclt/fock.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace bogoclt::fock {

namespace {

void enumerate_states(std::size_t slot, int remaining, std::vector<int>& occ,
                      std::vector<std::vector<int>>& out, std::size_t cap) {
    if (slot == occ.size()) {
        if (out.size() >= cap) {
            throw std::invalid_argument("fock: basis dimension exceeds cap");
        }
        out.push_back(occ);
        return;
    }
    for (int n = 0; n <= remaining; ++n) {
        occ[slot] = n;
        enumerate_states(slot + 1, remaining - n, occ, out, cap);
    }
    occ[slot] = 0;
}

}  // namespace

FockBasis::FockBasis(std::vector<Momentum> modes, int n_max, double N,
                     std::size_t dimension_cap)
    : m_modes(std::move(modes)), m_n_max(n_max), m_N(N) {
    if (m_modes.empty() || m_modes.size() > 8) {
        throw std::invalid_argument("fock: need between 1 and 8 modes");
    }
    if (n_max < 1 || n_max > 255) {
        throw std::invalid_argument("fock: n_max out of range");
    }
    if (!(N >= n_max)) {
        throw std::invalid_argument("fock: N must be >= n_max");
    }
    for (std::size_t i = 0; i < m_modes.size(); ++i) {
        if (m_modes[i].is_zero()) {
            throw std::invalid_argument("fock: zero mode not allowed");
        }
        for (std::size_t j = i + 1; j < m_modes.size(); ++j) {
            if (m_modes[i].n == m_modes[j].n) {
                throw std::invalid_argument("fock: duplicate mode");
            }
        }
    }
    m_neg.resize(m_modes.size());
    for (std::size_t i = 0; i < m_modes.size(); ++i) {
        Momentum neg{{-m_modes[i].n[0], -m_modes[i].n[1], -m_modes[i].n[2]}};
        bool found = false;
        for (std::size_t j = 0; j < m_modes.size(); ++j) {
            if (m_modes[j].n == neg.n) {
                m_neg[i] = j;
                found = true;
                break;
            }
        }
        if (!found) {
            throw std::invalid_argument("fock: mode list not closed under negation");
        }
    }

    std::vector<int> occ(m_modes.size(), 0);
    enumerate_states(0, n_max, occ, m_states, dimension_cap);
    m_totals.reserve(m_states.size());
    m_index.reserve(m_states.size());
    for (std::size_t s = 0; s < m_states.size(); ++s) {
        int tot = 0;
        for (int n : m_states[s]) tot += n;
        m_totals.push_back(tot);
        m_index.emplace(pack(m_states[s]), s);
    }
}

std::uint64_t FockBasis::pack(const std::vector<int>& occ) const {
    std::uint64_t key = 0;
    for (int n : occ) key = (key << 8) | static_cast<std::uint64_t>(n & 0xff);
    return key;
}

std::size_t FockBasis::mode_index(const Momentum& m) const {
    for (std::size_t j = 0; j < m_modes.size(); ++j) {
        if (m_modes[j].n == m.n) return j;
    }
    throw std::out_of_range("fock: momentum not in mode list");
}

bool FockBasis::has_state(const std::vector<int>& occ) const {
    if (occ.size() != m_modes.size()) return false;
    int tot = 0;
    for (int n : occ) {
        if (n < 0) return false;
        tot += n;
    }
    if (tot > m_n_max) return false;
    return m_index.count(pack(occ)) > 0;
}

std::size_t FockBasis::state_index(const std::vector<int>& occ) const {
    auto it = m_index.find(pack(occ));
    if (occ.size() != m_modes.size() || it == m_index.end()) {
        throw std::out_of_range("fock: occupation vector not in basis");
    }
    return it->second;
}

std::vector<std::size_t> FockBasis::margin_states(int margin) const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < m_states.size(); ++s) {
        if (m_totals[s] <= m_n_max - margin) out.push_back(s);
    }
    return out;
}

Vector vacuum(const FockBasis& basis) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
    v(0) = 1.0;
    return v;
}

Vector basis_vector(const FockBasis& basis, const std::vector<int>& occ) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
    v(static_cast<Eigen::Index>(basis.state_index(occ))) = 1.0;
    return v;
}

Matrix annihilator(const FockBasis& basis, std::size_t mode) {
    const auto d = static_cast<Eigen::Index>(basis.dim());
    Matrix a = Matrix::Zero(d, d);
    std::vector<int> occ;
    for (std::size_t s = 0; s < basis.dim(); ++s) {
        occ = basis.occupation(s);
        const int n = occ[mode];
        if (n == 0) continue;
        occ[mode] = n - 1;
        const auto t = basis.state_index(occ);
        a(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) = std::sqrt(double(n));
    }
    return a;
}

Matrix creator(const FockBasis& basis, std::size_t mode) {
    return annihilator(basis, mode).adjoint();
}

namespace {

// diag(sqrt((N - Ntot)/N)) applied on the left of an annihilator.
Eigen::VectorXd depletion_weights(const FockBasis& basis) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(basis.dim()));
    for (std::size_t s = 0; s < basis.dim(); ++s) {
        w(static_cast<Eigen::Index>(s)) =
            std::sqrt((basis.N() - basis.total_occupation(s)) / basis.N());
    }
    return w;
}

}  // namespace

Matrix modified_annihilator(const FockBasis& basis, std::size_t mode) {
    return depletion_weights(basis).asDiagonal() * annihilator(basis, mode);
}

Matrix modified_creator(const FockBasis& basis, std::size_t mode) {
    return modified_annihilator(basis, mode).adjoint();
}

Matrix diagonal_power(const FockBasis& basis, double shift, double exponent) {
    const auto d = static_cast<Eigen::Index>(basis.dim());
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index s = 0; s < d; ++s) {
        m(s, s) = std::pow(basis.total_occupation(static_cast<std::size_t>(s)) + shift,
                           exponent);
    }
    return m;
}

Matrix number_op(const FockBasis& basis) { return diagonal_power(basis, 0.0, 1.0); }

Matrix dGamma(const FockBasis& basis, const Matrix& one_particle) {
    const auto m = static_cast<Eigen::Index>(basis.mode_count());
    if (one_particle.rows() != m || one_particle.cols() != m) {
        throw std::invalid_argument("fock: dGamma kernel has wrong shape");
    }
    const auto d = static_cast<Eigen::Index>(basis.dim());
    Matrix out = Matrix::Zero(d, d);
    std::vector<int> occ;
    for (std::size_t s = 0; s < basis.dim(); ++s) {
        for (std::size_t q2 = 0; q2 < basis.mode_count(); ++q2) {
            const int n2 = basis.occupation(s)[q2];
            if (n2 == 0) continue;
            for (std::size_t q1 = 0; q1 < basis.mode_count(); ++q1) {
                const std::complex<double> kern = one_particle(
                    static_cast<Eigen::Index>(q1), static_cast<Eigen::Index>(q2));
                if (kern == std::complex<double>(0.0)) continue;
                occ = basis.occupation(s);
                occ[q2] -= 1;
                const double amp1 = std::sqrt(double(n2));
                const double amp2 = std::sqrt(double(occ[q1] + 1));
                occ[q1] += 1;
                const auto t = basis.state_index(occ);
                out(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) +=
                    kern * amp1 * amp2;
            }
        }
    }
    return out;
}

Matrix smeared_annihilator(const FockBasis& basis, const Vector& h, bool modified) {
    if (h.size() != static_cast<Eigen::Index>(basis.mode_count())) {
        throw std::invalid_argument("fock: smearing vector has wrong length");
    }
    const auto d = static_cast<Eigen::Index>(basis.dim());
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t j = 0; j < basis.mode_count(); ++j) {
        const std::complex<double> c = std::conj(h(static_cast<Eigen::Index>(j)));
        if (c == std::complex<double>(0.0)) continue;
        out += c * annihilator(basis, j);
    }
    if (modified) {
        out = depletion_weights(basis).asDiagonal() * out;
    }
    return out;
}

Matrix field_op(const FockBasis& basis, const Vector& h, bool modified) {
    Matrix a = smeared_annihilator(basis, h, modified);
    return a + a.adjoint().eval();
}

Matrix weyl_op(const FockBasis& basis, const Vector& h, double s, bool modified) {
    const std::complex<double> is(0.0, s);
    return expm(is * field_op(basis, h, modified));
}

Matrix expm(const Matrix& m) { return m.exp(); }

Matrix bogoliubov_map(const FockBasis& basis, const Eigen::VectorXd& eta) {
    if (eta.size() != static_cast<Eigen::Index>(basis.mode_count())) {
        throw std::invalid_argument("fock: eta has wrong length");
    }
    for (std::size_t j = 0; j < basis.mode_count(); ++j) {
        const auto nj = basis.negation_mode(j);
        if (eta(static_cast<Eigen::Index>(j)) != eta(static_cast<Eigen::Index>(nj))) {
            throw std::invalid_argument("fock: eta must be even under negation");
        }
    }
    const auto d = static_cast<Eigen::Index>(basis.dim());
    Matrix gen = Matrix::Zero(d, d);
    for (std::size_t j = 0; j < basis.mode_count(); ++j) {
        const auto nj = basis.negation_mode(j);
        const double e = eta(static_cast<Eigen::Index>(j));
        if (e == 0.0) continue;
        Matrix bj = modified_annihilator(basis, j);
        Matrix bnj = modified_annihilator(basis, nj);
        Matrix pair_down = bnj * bj;  // b_{-p} b_p
        gen += 0.5 * e * (pair_down.adjoint() - pair_down);
    }
    return expm(gen);
}

Matrix residual_d(const FockBasis& basis, const Matrix& T, const Eigen::VectorXd& eta,
                  std::size_t mode) {
    const double e = eta(static_cast<Eigen::Index>(mode));
    Matrix b = modified_annihilator(basis, mode);
    Matrix bc_neg = modified_creator(basis, basis.negation_mode(mode));
    return T.adjoint() * b * T - std::cosh(e) * b - std::sinh(e) * bc_neg;
}

CubicResult cubic_generator(const FockBasis& basis, const Eigen::VectorXd& eta,
                            const CubicPartition& partition) {
    if (eta.size() != static_cast<Eigen::Index>(basis.mode_count())) {
        throw std::invalid_argument("fock: eta has wrong length");
    }
    for (std::size_t r : partition.high) {
        for (std::size_t v : partition.low) {
            if (r == v) {
                throw std::invalid_argument("fock: cubic partition overlaps");
            }
        }
    }
    const auto d = static_cast<Eigen::Index>(basis.dim());

    std::vector<Matrix> b(basis.mode_count()), bc(basis.mode_count());
    for (std::size_t j = 0; j < basis.mode_count(); ++j) {
        b[j] = modified_annihilator(basis, j);
        bc[j] = b[j].adjoint();
    }

    CubicResult res;
    Matrix theta = Matrix::Zero(d, d);
    for (std::size_t r : partition.high) {
        for (std::size_t v : partition.low) {
            if (r == basis.negation_mode(v)) continue;  // r + v = 0 excluded
            const Momentum sum{{basis.mode(r).n[0] + basis.mode(v).n[0],
                                basis.mode(r).n[1] + basis.mode(v).n[1],
                                basis.mode(r).n[2] + basis.mode(v).n[2]}};
            bool in_set = true;
            std::size_t sum_idx = 0;
            try {
                sum_idx = basis.mode_index(sum);
            } catch (const std::out_of_range&) {
                in_set = false;
            }
            if (!in_set) {
                ++res.pairs_dropped;
                continue;
            }
            ++res.pairs_used;
            const double er = eta(static_cast<Eigen::Index>(r));
            const double ev = eta(static_cast<Eigen::Index>(v));
            Matrix tail = std::sinh(ev) * bc[basis.negation_mode(v)] + std::cosh(ev) * b[v];
            theta += er * (bc[sum_idx] * (bc[basis.negation_mode(r)] * tail));
        }
    }
    res.A = (theta - theta.adjoint().eval()) / std::sqrt(basis.N());
    return res;
}

}  // namespace bogoclt::fock
