#include <doctest.h>

#include <cmath>
#include <memory>

#include "bogoclt/limitlaw.hpp"

using namespace bogoclt;

namespace {
constexpr double kPi = 3.14159265358979323846;
const std::complex<double> I{0.0, 1.0};

NuVector hand_nu(std::shared_ptr<const ModeSet> ms,
                 const std::vector<std::pair<Momentum, std::complex<double>>>& entries,
                 const std::string& label) {
    NuVector nu;
    nu.modes = ms;
    nu.values = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ms->size()));
    for (const auto& [m, v] : entries) {
        nu.values(static_cast<Eigen::Index>(ms->index_of(m))) = v;
    }
    nu.norm_sq = nu.values.squaredNorm();
    nu.label = label;
    return nu;
}

double normal_pdf(double x, double var) {
    return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * kPi * var);
}
}  // namespace

TEST_CASE("covariance is symmetric with antilinear first slot") {
    auto ms = std::make_shared<ModeSet>(1, 100.0);
    const Momentum e1{{1, 0, 0}};
    const Momentum e2{{0, 1, 0}};
    const auto n1 = hand_nu(ms, {{e1, {1.0, 0.0}}}, "n1");
    const auto n2 = hand_nu(ms, {{e1, I}, {e2, {0.5, 0.0}}}, "n2");
    const CovMatrix S = covariance({n1, n2});
    CHECK(S(0, 0) == std::complex<double>{1.0, 0.0});
    CHECK(S(1, 1).real() == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(S(0, 1) == I);  // conj(1) * i
    CHECK(S(1, 0) == S(0, 1));
    CHECK(!covariance_is_real(S));
    CHECK(covariance_is_real(covariance({n1, n1})));
}

TEST_CASE("gaussian characteristic function") {
    CovMatrix S(1, 1);
    S(0, 0) = 1.0;
    Eigen::VectorXd s(1);
    s << 1.0;
    CHECK(limit_char_fn(S, s).real() == doctest::Approx(0.606530659712633).epsilon(1e-14));
    CHECK(limit_char_fn(S, s).imag() == 0.0);

    CovMatrix S2(2, 2);
    S2 << 1.0, 0.4 * I, 0.4 * I, 2.0;
    Eigen::VectorXd s2(2);
    s2 << 0.7, -0.3;
    const auto expected =
        std::exp(-0.5 * (0.49 * 1.0 + 2.0 * 0.7 * (-0.3) * 0.4 * I + 0.09 * 2.0));
    CHECK(std::abs(limit_char_fn(S2, s2) - expected) < 1e-15);
}

TEST_CASE("one-excitation characteristic function") {
    auto ms = std::make_shared<ModeSet>(1, 100.0);
    const Momentum e1{{1, 0, 0}};
    const auto nu = hand_nu(ms, {{e1, {1.0, 0.0}}}, "nu");
    const CovMatrix S = covariance({nu});
    Eigen::VectorXd s(1);
    s << 0.6;
    const auto got = excited_char_fn(S, {nu}, ms->index_of(e1), s);
    // Gaussian factor times (1 - |s nu(p)|^2): the occupied mode removes
    // weight near the origin instead of adding it.
    CHECK(got.real() == doctest::Approx((1.0 - 0.36) * std::exp(-0.18)).epsilon(1e-14));
    CHECK(got.imag() == 0.0);

    // At |s nu(p)| = 1 the prefactor vanishes.
    s << 1.0;
    CHECK(std::abs(excited_char_fn(S, {nu}, ms->index_of(e1), s)) < 1e-15);
}

TEST_CASE("gaussian density closed forms") {
    Eigen::MatrixXd S1(1, 1);
    S1 << 1.0;
    Eigen::VectorXd x(1);
    x << 0.0;
    CHECK(gaussian_density(S1, x) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
    x << 1.3;
    CHECK(gaussian_density(S1, x) == doctest::Approx(normal_pdf(1.3, 1.0)).epsilon(1e-14));

    Eigen::MatrixXd S2 = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd x2 = Eigen::VectorXd::Zero(2);
    CHECK(gaussian_density(S2, x2) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));

    Eigen::MatrixXd S3 = Eigen::MatrixXd::Identity(3, 3);
    Eigen::VectorXd x3 = Eigen::VectorXd::Zero(3);
    CHECK(gaussian_density(S3, x3) ==
          doctest::Approx(std::pow(2.0 * kPi, -1.5)).epsilon(1e-14));

    Eigen::MatrixXd bad(1, 1);
    bad << -1.0;
    CHECK_THROWS_AS((void)gaussian_density(bad, x), NumericError);
}

TEST_CASE("inversion reproduces the gaussian density") {
    const double var = 1.0;
    const double s_max = choose_s_max(var);
    CHECK(std::exp(-0.5 * var * s_max * s_max) <= 1e-10 * (1 + 1e-9));
    CHECK(s_max > 6.7);

    Eigen::VectorXd grid(801);
    for (int i = 0; i < 801; ++i) grid(i) = -8.0 + 16.0 * i / 800.0;
    const auto phi = [&](double s) {
        return std::complex<double>(std::exp(-0.5 * var * s * s), 0.0);
    };
    const Density1D d = invert_char_fn(phi, s_max, 2001, grid);
    CHECK(d.imag_residual < 1e-12);

    double sup = 0.0;
    for (int i = 0; i < 801; ++i) {
        sup = std::max(sup, std::abs(d.values(i) - normal_pdf(grid(i), var)));
    }
    CHECK(sup < 1e-8);

    CHECK(integrate_against(d, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-8));
    // int N(0,1)(x)^2 dx = 1/(2 sqrt(pi)).
    CHECK(integrate_against(d, [&](double x) { return normal_pdf(x, 1.0); }) ==
          doctest::Approx(0.282094791773878).epsilon(1e-7));

    CHECK(interval_probability(d, -1.96, 1.96) ==
          doctest::Approx(0.950004209703559).epsilon(1e-6));
    CHECK_THROWS_AS((void)interval_probability(d, -9.0, 0.0), std::invalid_argument);
}

TEST_CASE("kolmogorov distance of two gaussians") {
    Eigen::VectorXd grid(2001);
    for (int i = 0; i < 2001; ++i) grid(i) = -9.0 + 18.0 * i / 2000.0;
    Density1D d1{grid, Eigen::VectorXd(2001), 0.0};
    Density1D d2{grid, Eigen::VectorXd(2001), 0.0};
    for (int i = 0; i < 2001; ++i) {
        d1.values(i) = normal_pdf(grid(i), 1.0);
        d2.values(i) = normal_pdf(grid(i), 1.21);
    }
    CHECK(kolmogorov_distance(d1, d2) == doctest::Approx(0.0230448322247036).epsilon(5e-4));
    CHECK(kolmogorov_distance(d1, d1) == 0.0);
}

TEST_CASE("product expectations against analytic gaussian integrals") {
    // ghat for g(x) = e^{-x^2/2} under g(x) = int ghat(s) e^{-isx} ds.
    const auto ghat = [](double s) {
        return std::complex<double>(std::exp(-0.5 * s * s) / std::sqrt(2.0 * kPi), 0.0);
    };

    SUBCASE("one factor") {
        CovMatrix S(1, 1);
        S << 1.0;
        const auto got = expectation_of_products({ghat}, S, 8.0, 801);
        // E e^{-X^2/2} = 1/sqrt(1 + var).
        CHECK(got.real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
        CHECK(std::abs(got.imag()) < 1e-12);
    }
    SUBCASE("two factors, complex covariance") {
        CovMatrix S(2, 2);
        S << 1.0, 0.3 * I, 0.3 * I, 1.0;
        const auto got = expectation_of_products({ghat, ghat}, S, 8.0, 401);
        // Quadratic form 2x2 with det(A) = 4 - (0.3i)^2 = 4.09.
        CHECK(got.real() == doctest::Approx(1.0 / std::sqrt(4.09)).epsilon(1e-9));
        CHECK(std::abs(got.imag()) < 1e-10);
    }
    SUBCASE("non-decaying weight is rejected") {
        CovMatrix S(1, 1);
        S << 1.0;
        const auto flat = [](double) { return std::complex<double>(1.0, 0.0); };
        CHECK_THROWS_AS((void)expectation_of_products({flat}, S, 8.0, 101), NumericError);
    }

    CHECK(integrability_weight(ghat, 8.0, 401) > 0.0);
}
