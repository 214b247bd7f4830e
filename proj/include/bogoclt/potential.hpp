#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bogoclt {

// Radial interaction potential V(|x|): nonnegative, compactly supported.
// Either a soft sphere (constant v0 on [0, radius]) or a tabulated profile
// with linear interpolation between samples and zero beyond the last node.
class RadialPotential {
  public:
    static RadialPotential soft_sphere(double v0, double radius);
    // nodes r must start at 0 and strictly increase; values must be >= 0.
    static RadialPotential tabulated(std::vector<double> r, std::vector<double> v);

    double operator()(double r) const;
    double support_radius() const { return m_support; }
    double max_value() const { return m_max; }
    bool is_soft_sphere() const { return m_kind == Kind::SoftSphere; }
    double soft_v0() const { return m_v0; }
    const std::vector<double>& radii() const { return m_r; }
    const std::vector<double>& values() const { return m_v; }

    // Stable content hash for cache keys.
    std::uint64_t content_hash() const;
    std::string describe() const;

  private:
    enum class Kind { SoftSphere, Tabulated };
    RadialPotential() = default;

    Kind m_kind = Kind::SoftSphere;
    double m_v0 = 0.0;
    double m_support = 0.0;
    double m_max = 0.0;
    std::vector<double> m_r;
    std::vector<double> m_v;
};

}  // namespace bogoclt
