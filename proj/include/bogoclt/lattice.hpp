#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace bogoclt {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Nonzero momentum mode p = 2*pi*n, n an integer 3-vector.
struct Momentum {
    std::array<int, 3> n{0, 0, 0};

    bool operator==(const Momentum&) const = default;
    Momentum operator-() const { return {{-n[0], -n[1], -n[2]}}; }

    int n_norm_sq() const { return n[0] * n[0] + n[1] * n[1] + n[2] * n[2]; }
    double p_norm_sq() const { return two_pi * two_pi * n_norm_sq(); }
    double p_norm() const;
    std::array<double, 3> p() const {
        return {two_pi * n[0], two_pi * n[1], two_pi * n[2]};
    }
    bool is_zero() const { return n[0] == 0 && n[1] == 0 && n[2] == 0; }
};

// Lexicographic order on the integer triple.
bool lex_less(const Momentum& a, const Momentum& b);

struct MomentumHash {
    std::size_t operator()(const Momentum& m) const {
        std::uint64_t h = 1469598103934665603ull;
        for (int c : m.n) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c));
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

// Finite truncation of the nonzero momentum lattice: all n with
// sup-norm |n|_inf <= cutoff, n != 0, sorted lexicographically.
// The low/high split is |p| <= sqrt(N) vs the complement.
class ModeSet {
  public:
    ModeSet(int cutoff, double N);

    int cutoff() const { return m_cutoff; }
    double N() const { return m_N; }
    std::size_t size() const { return m_modes.size(); }
    const Momentum& mode(std::size_t i) const { return m_modes[i]; }
    const std::vector<Momentum>& modes() const { return m_modes; }

    bool contains(const Momentum& m) const;
    // Index of a mode; throws std::out_of_range if absent.
    std::size_t index_of(const Momentum& m) const;
    // Index of the negated mode (always present: the set is negation-closed).
    std::size_t negation_index(std::size_t i) const { return m_neg[i]; }

    bool is_low(std::size_t i) const { return m_low[i] != 0; }
    const std::vector<std::size_t>& low_indices() const { return m_low_idx; }
    const std::vector<std::size_t>& high_indices() const { return m_high_idx; }

  private:
    int m_cutoff;
    double m_N;
    std::vector<Momentum> m_modes;
    std::vector<std::size_t> m_neg;
    std::vector<char> m_low;
    std::vector<std::size_t> m_low_idx;
    std::vector<std::size_t> m_high_idx;
    std::unordered_map<Momentum, std::size_t, MomentumHash> m_index;
};

}  // namespace bogoclt
