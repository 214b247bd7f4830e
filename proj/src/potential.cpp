#include "bogoclt/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace bogoclt {

namespace {

std::uint64_t fnv64(const void* data, std::size_t len, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t hash_doubles(const std::vector<double>& xs, std::uint64_t seed) {
    for (double x : xs) seed = fnv64(&x, sizeof x, seed);
    return seed;
}

}  // namespace

RadialPotential RadialPotential::soft_sphere(double v0, double radius) {
    if (!(v0 >= 0.0)) throw std::invalid_argument("soft_sphere: v0 must be >= 0");
    if (!(radius > 0.0)) throw std::invalid_argument("soft_sphere: radius must be > 0");
    RadialPotential pot;
    pot.m_kind = Kind::SoftSphere;
    pot.m_v0 = v0;
    pot.m_support = radius;
    pot.m_max = v0;
    return pot;
}

RadialPotential RadialPotential::tabulated(std::vector<double> r, std::vector<double> v) {
    if (r.size() != v.size() || r.size() < 2)
        throw std::invalid_argument("tabulated: need matching grids with >= 2 nodes");
    if (r.front() != 0.0) throw std::invalid_argument("tabulated: grid must start at r = 0");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1])) throw std::invalid_argument("tabulated: grid must strictly increase");
    for (double x : v)
        if (!(x >= 0.0)) throw std::invalid_argument("tabulated: values must be >= 0");

    RadialPotential pot;
    pot.m_kind = Kind::Tabulated;
    pot.m_support = r.back();
    pot.m_max = *std::max_element(v.begin(), v.end());
    pot.m_r = std::move(r);
    pot.m_v = std::move(v);
    return pot;
}

double RadialPotential::operator()(double r) const {
    if (r < 0.0) throw std::invalid_argument("RadialPotential: negative radius");
    if (m_kind == Kind::SoftSphere) return r <= m_support ? m_v0 : 0.0;
    if (r >= m_r.back()) return 0.0;
    auto it = std::upper_bound(m_r.begin(), m_r.end(), r);
    const std::size_t hi = static_cast<std::size_t>(it - m_r.begin());
    const std::size_t lo = hi - 1;
    const double t = (r - m_r[lo]) / (m_r[hi] - m_r[lo]);
    return m_v[lo] + t * (m_v[hi] - m_v[lo]);
}

std::uint64_t RadialPotential::content_hash() const {
    std::uint64_t h = 1469598103934665603ull;
    const int kind = m_kind == Kind::SoftSphere ? 0 : 1;
    h = fnv64(&kind, sizeof kind, h);
    h = fnv64(&m_v0, sizeof m_v0, h);
    h = fnv64(&m_support, sizeof m_support, h);
    h = hash_doubles(m_r, h);
    h = hash_doubles(m_v, h);
    return h;
}

std::string RadialPotential::describe() const {
    char buf[128];
    if (m_kind == Kind::SoftSphere) {
        std::snprintf(buf, sizeof buf, "soft_sphere(v0=%.17g, radius=%.17g)", m_v0, m_support);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "tabulated(%zu nodes, support=%.17g)", m_r.size(), m_support);
    return buf;
}

}  // namespace bogoclt
