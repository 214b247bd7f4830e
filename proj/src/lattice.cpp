#include "bogoclt/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace bogoclt {

double Momentum::p_norm() const { return two_pi * std::sqrt(static_cast<double>(n_norm_sq())); }

bool lex_less(const Momentum& a, const Momentum& b) { return a.n < b.n; }

ModeSet::ModeSet(int cutoff, double N) : m_cutoff(cutoff), m_N(N) {
    if (cutoff < 1) throw std::invalid_argument("ModeSet: cutoff must be >= 1");
    if (!(N > 0)) throw std::invalid_argument("ModeSet: N must be positive");

    m_modes.reserve(static_cast<std::size_t>(2 * cutoff + 1) * (2 * cutoff + 1) * (2 * cutoff + 1) - 1);
    for (int i = -cutoff; i <= cutoff; ++i)
        for (int j = -cutoff; j <= cutoff; ++j)
            for (int k = -cutoff; k <= cutoff; ++k) {
                if (i == 0 && j == 0 && k == 0) continue;
                m_modes.push_back(Momentum{{i, j, k}});
            }
    // The nested loop above already emits lexicographic order.

    m_index.reserve(m_modes.size());
    for (std::size_t i = 0; i < m_modes.size(); ++i) m_index.emplace(m_modes[i], i);

    const double low_cap_sq = N;  // |p| <= sqrt(N), compared squared
    m_neg.resize(m_modes.size());
    m_low.resize(m_modes.size());
    for (std::size_t i = 0; i < m_modes.size(); ++i) {
        m_neg[i] = m_index.at(-m_modes[i]);
        const bool low = m_modes[i].p_norm_sq() <= low_cap_sq;
        m_low[i] = low ? 1 : 0;
        (low ? m_low_idx : m_high_idx).push_back(i);
    }
}

bool ModeSet::contains(const Momentum& m) const { return m_index.count(m) != 0; }

std::size_t ModeSet::index_of(const Momentum& m) const {
    auto it = m_index.find(m);
    if (it == m_index.end()) throw std::out_of_range("ModeSet: mode not in set");
    return it->second;
}

}  // namespace bogoclt
