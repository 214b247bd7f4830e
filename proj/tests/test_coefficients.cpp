#include <doctest.h>

#include <cmath>
#include <memory>

#include "bogoclt/coefficients.hpp"

using namespace bogoclt;

namespace {
constexpr double kPi = 3.14159265358979323846;

CoefficientTable make_table(double N, int cutoff, int threads = 1) {
    const auto V = RadialPotential::soft_sphere(2.0, 0.5);
    const auto sol = solve_neumann(V, N, 0.45);
    auto modes = std::make_shared<ModeSet>(cutoff, N);
    return build_coefficients(sol, modes, threads);
}
}  // namespace

TEST_CASE("dressing exponent closed form") {
    // 16 pi a0 = 1 makes mu = (1/4) log(4 pi^2 / (4 pi^2 + 1)).
    CHECK(mu_of(1.0 / (16.0 * kPi), two_pi * two_pi) ==
          doctest::Approx(-0.00625370014875177).epsilon(1e-13));
    CHECK(mu_of(0.0, 7.0) == 0.0);
    const double a0 = 0.03, p2 = 50.0;
    CHECK(mu_of(a0, p2) ==
          doctest::Approx(0.25 * std::log(p2 / (p2 + 16.0 * kPi * a0))).epsilon(1e-15));
    CHECK(mu_of(a0, p2) < 0.0);
}

TEST_CASE("coefficient table identities") {
    const CoefficientTable t = make_table(1000.0, 2);
    const ModeSet& ms = *t.modes;
    REQUIRE(t.eta.size() == static_cast<Eigen::Index>(ms.size()));

    for (Eigen::Index i = 0; i < t.eta.size(); ++i) {
        const double p2 = ms.mode(static_cast<std::size_t>(i)).p_norm_sq();

        // Hyperbolic pair.
        CHECK(t.gamma(i) * t.gamma(i) - t.sigma(i) * t.sigma(i) ==
              doctest::Approx(1.0).epsilon(1e-14));
        CHECK(t.sigma(i) == doctest::Approx(std::sinh(t.eta(i))).epsilon(1e-15));

        // Low k: the second-moment transform is positive, so eta < 0.
        CHECK(t.eta(i) < 0.0);

        // F,G assembled from the stated quadratic forms.
        const double sg = t.sigma(i) + t.gamma(i);
        CHECK(t.F(i) == doctest::Approx(p2 * (t.sigma(i) * t.sigma(i) + t.gamma(i) * t.gamma(i)) +
                                        t.W(i) * sg * sg)
                            .epsilon(1e-13));
        CHECK(t.G(i) == doctest::Approx(2.0 * p2 * t.sigma(i) * t.gamma(i) + t.W(i) * sg * sg)
                            .epsilon(1e-13));
        CHECK(std::abs(t.G(i)) < t.F(i));
        CHECK(t.tau(i) == doctest::Approx(0.5 * std::atanh(-t.G(i) / t.F(i))).epsilon(1e-13));

        // Exact algebra: F - G = p^2 e^{-2 eta}, F + G = e^{2 eta}(p^2 + 2 W),
        // hence eta + tau = (1/4) log(p^2/(p^2 + 2 W)).
        CHECK(t.F(i) - t.G(i) == doctest::Approx(p2 * std::exp(-2.0 * t.eta(i))).epsilon(1e-12));
        CHECK(t.F(i) + t.G(i) ==
              doctest::Approx(std::exp(2.0 * t.eta(i)) * (p2 + 2.0 * t.W(i))).epsilon(1e-12));
        CHECK(t.eta(i) + t.tau(i) ==
              doctest::Approx(t.eta_plus_tau_closed(i)).epsilon(1e-11));
        CHECK(t.eta_plus_tau_closed(i) ==
              doctest::Approx(0.25 * std::log(p2 / (p2 + 2.0 * t.W(i)))).epsilon(1e-13));

        // mu from the table's own scattering length.
        CHECK(t.mu(i) == doctest::Approx(mu_of(t.a0, p2)).epsilon(1e-14));

        // The dressing exponent approaches mu; 1e-3 is generous at N = 1000.
        CHECK(std::abs(t.eta(i) + t.tau(i) - t.mu(i)) < 1e-3);
    }
}

TEST_CASE("coefficients depend on the mode through |p| only") {
    const CoefficientTable t = make_table(400.0, 2);
    const ModeSet& ms = *t.modes;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto j = ms.negation_index(i);
        CHECK(t.eta(static_cast<Eigen::Index>(i)) == t.eta(static_cast<Eigen::Index>(j)));
        CHECK(t.tau(static_cast<Eigen::Index>(i)) == t.tau(static_cast<Eigen::Index>(j)));
        for (std::size_t k = 0; k < ms.size(); ++k) {
            if (ms.mode(k).n_norm_sq() == ms.mode(i).n_norm_sq()) {
                CHECK(t.eta(static_cast<Eigen::Index>(i)) == t.eta(static_cast<Eigen::Index>(k)));
            }
        }
    }
}

TEST_CASE("table matches the per-mode entry point") {
    const auto V = RadialPotential::soft_sphere(2.0, 0.5);
    const auto sol = solve_neumann(V, 300.0, 0.45);
    auto modes = std::make_shared<ModeSet>(1, 300.0);
    const CoefficientTable t = build_coefficients(sol, modes);
    for (std::size_t i = 0; i < modes->size(); ++i) {
        CHECK(t.eta(static_cast<Eigen::Index>(i)) ==
              doctest::Approx(eta_at(sol, modes->mode(i))).epsilon(1e-15));
        CHECK(t.W(static_cast<Eigen::Index>(i)) ==
              doctest::Approx(sol.Vf_hat(modes->mode(i).p_norm() / 300.0)).epsilon(1e-15));
    }
    CHECK(t.a0 == sol.a0);
    CHECK(t.N == 300.0);
}

TEST_CASE("worker count does not change results") {
    const CoefficientTable t1 = make_table(500.0, 2, 1);
    const CoefficientTable t2 = make_table(500.0, 2, 3);
    CHECK((t1.eta - t2.eta).cwiseAbs().maxCoeff() == 0.0);
    CHECK((t1.tau - t2.tau).cwiseAbs().maxCoeff() == 0.0);
    CHECK((t1.mu - t2.mu).cwiseAbs().maxCoeff() == 0.0);
}
