#include "bogoclt/observables.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace bogoclt {

namespace {

// sup_x |sum_n c_n e^{2 pi i n.x}| on the unit torus, sampled on a grid fine
// enough for the bandwidth of the coefficient set.
double sup_norm_estimate(const std::vector<TrigCoefficient>& coeffs) {
    int band = 1;
    for (const auto& c : coeffs)
        for (int comp : c.n) band = std::max(band, std::abs(comp));
    const int grid = std::min(64, 8 * band + 8);
    double best = 0.0;
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b)
            for (int c = 0; c < grid; ++c) {
                const double x0 = static_cast<double>(a) / grid;
                const double x1 = static_cast<double>(b) / grid;
                const double x2 = static_cast<double>(c) / grid;
                std::complex<double> v{0.0, 0.0};
                for (const auto& t : coeffs) {
                    const double phase = two_pi * (t.n[0] * x0 + t.n[1] * x1 + t.n[2] * x2);
                    v += t.value * std::complex<double>{std::cos(phase), std::sin(phase)};
                }
                best = std::max(best, std::abs(v));
            }
    return best;
}

}  // namespace

ObservableSpec make_observable(std::shared_ptr<const ModeSet> modes,
                               const std::vector<TrigCoefficient>& coeffs, std::string name) {
    if (!modes) throw std::invalid_argument("make_observable: null mode set");

    std::map<std::array<int, 3>, std::complex<double>> table;
    for (const auto& c : coeffs) {
        if (!table.emplace(c.n, c.value).second)
            throw std::invalid_argument("make_observable: duplicate coefficient index");
    }
    for (const auto& [n, v] : table) {
        (void)v;
        if (!table.count({-n[0], -n[1], -n[2]}))
            throw std::invalid_argument(
                "make_observable: asymmetric support (missing -n for a listed n)");
    }

    ObservableSpec spec;
    spec.modes = modes;
    spec.name = std::move(name);
    const auto m = static_cast<Eigen::Index>(modes->size());
    spec.fhat = Eigen::VectorXcd::Zero(m);
    spec.fbarhat = Eigen::VectorXcd::Zero(m);

    auto value_at = [&table](const std::array<int, 3>& n) {
        auto it = table.find(n);
        return it == table.end() ? std::complex<double>{0.0, 0.0} : it->second;
    };

    for (const auto& [n, v] : table) {
        const Momentum mom{n};
        if (mom.is_zero()) {
            spec.mean = v;
            continue;
        }
        if (!modes->contains(mom)) {
            spec.dropped_tail_sq += std::norm(v);
            continue;
        }
        const auto i = static_cast<Eigen::Index>(modes->index_of(mom));
        spec.fhat[i] = v;
        spec.fbarhat[i] = std::conj(value_at({-n[0], -n[1], -n[2]}));
    }
    spec.norm_bound = sup_norm_estimate(coeffs);
    return spec;
}

ObservableSpec cosine_observable(std::shared_ptr<const ModeSet> modes, std::array<int, 3> n0) {
    return make_observable(std::move(modes),
                           {{n0, {1.0, 0.0}}, {{-n0[0], -n0[1], -n0[2]}, {1.0, 0.0}}},
                           "cos");
}

ObservableSpec sine_observable(std::shared_ptr<const ModeSet> modes, std::array<int, 3> n0) {
    return make_observable(std::move(modes),
                           {{n0, {0.0, -1.0}}, {{-n0[0], -n0[1], -n0[2]}, {0.0, 1.0}}},
                           "sin");
}

ObservableSpec exponential_observable(std::shared_ptr<const ModeSet> modes, std::array<int, 3> n0) {
    return make_observable(std::move(modes),
                           {{n0, {1.0, 0.0}}, {{-n0[0], -n0[1], -n0[2]}, {0.0, 0.0}}},
                           "exp");
}

NuVector dress(const ObservableSpec& spec, const Eigen::VectorXd& angle, std::string label) {
    if (angle.size() != spec.fhat.size())
        throw std::invalid_argument("dress: angle vector size mismatch");
    NuVector nu;
    nu.modes = spec.modes;
    nu.label = label.empty() ? spec.name : std::move(label);
    nu.values.resize(spec.fhat.size());
    for (Eigen::Index i = 0; i < spec.fhat.size(); ++i)
        nu.values[i] =
            spec.fhat[i] * std::cosh(angle[i]) + spec.fbarhat[i] * std::sinh(angle[i]);
    nu.norm_sq = nu.values.squaredNorm();
    return nu;
}

double vector_distance(const NuVector& a, const NuVector& b) {
    if (a.modes != b.modes)
        throw std::invalid_argument("vector_distance: vectors live on different mode sets");
    return (a.values - b.values).norm();
}

}  // namespace bogoclt
