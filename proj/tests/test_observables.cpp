#include <doctest.h>

#include <memory>

#include "bogoclt/observables.hpp"

using namespace bogoclt;

namespace {
std::shared_ptr<const ModeSet> modes2(double N = 1000.0) {
    return std::make_shared<ModeSet>(2, N);
}
const std::complex<double> I{0.0, 1.0};
}  // namespace

TEST_CASE("cosine preset") {
    auto ms = modes2();
    const auto ob = cosine_observable(ms, {1, 0, 0});
    const auto ip = static_cast<Eigen::Index>(ms->index_of(Momentum{{1, 0, 0}}));
    const auto im = static_cast<Eigen::Index>(ms->index_of(Momentum{{-1, 0, 0}}));
    CHECK(ob.fhat(ip) == std::complex<double>{1.0, 0.0});
    CHECK(ob.fhat(im) == std::complex<double>{1.0, 0.0});
    CHECK(ob.fbarhat(ip) == std::complex<double>{1.0, 0.0});
    CHECK(ob.fhat.cwiseAbs().sum() == doctest::Approx(2.0));
    CHECK(ob.mean == std::complex<double>{0.0, 0.0});
    CHECK(ob.norm_bound == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(ob.dropped_tail_sq == 0.0);
}

TEST_CASE("sine preset") {
    auto ms = modes2();
    const auto ob = sine_observable(ms, {0, 1, 0});
    const auto ip = static_cast<Eigen::Index>(ms->index_of(Momentum{{0, 1, 0}}));
    const auto im = static_cast<Eigen::Index>(ms->index_of(Momentum{{0, -1, 0}}));
    CHECK(ob.fhat(ip) == -I);
    CHECK(ob.fhat(im) == I);
    // fbarhat(p) = conj(fhat(-p)).
    CHECK(ob.fbarhat(ip) == std::conj(ob.fhat(im)));
    CHECK(ob.fbarhat(im) == std::conj(ob.fhat(ip)));
    CHECK(ob.norm_bound == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("exponential preset") {
    auto ms = modes2();
    const auto ob = exponential_observable(ms, {1, 1, 0});
    const auto ip = static_cast<Eigen::Index>(ms->index_of(Momentum{{1, 1, 0}}));
    const auto im = static_cast<Eigen::Index>(ms->index_of(Momentum{{-1, -1, 0}}));
    CHECK(ob.fhat(ip) == std::complex<double>{1.0, 0.0});
    CHECK(ob.fhat(im) == std::complex<double>{0.0, 0.0});
    CHECK(ob.fbarhat(im) == std::complex<double>{1.0, 0.0});
    CHECK(ob.fbarhat(ip) == std::complex<double>{0.0, 0.0});
    CHECK(ob.norm_bound == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("custom coefficients") {
    auto ms = modes2();

    SUBCASE("asymmetric support is rejected") {
        CHECK_THROWS_AS((void)make_observable(ms, {{{1, 0, 0}, {1.0, 0.0}}}, "bad"),
                        std::invalid_argument);
    }
    SUBCASE("duplicate index is rejected") {
        CHECK_THROWS_AS((void)make_observable(
                            ms, {{{1, 0, 0}, {1.0, 0.0}}, {{1, 0, 0}, {2.0, 0.0}},
                                 {{-1, 0, 0}, {1.0, 0.0}}},
                            "bad"),
                        std::invalid_argument);
    }
    SUBCASE("zero index lands in the mean") {
        const auto ob = make_observable(ms, {{{0, 0, 0}, {3.0, 0.5}}}, "const");
        CHECK(ob.mean == std::complex<double>{3.0, 0.5});
        CHECK(ob.fhat.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("out-of-range indices are tallied, not silently lost") {
        const auto ob = make_observable(
            ms, {{{9, 0, 0}, {0.3, 0.0}}, {{-9, 0, 0}, {0.3, 0.0}}}, "tail");
        CHECK(ob.dropped_tail_sq == doctest::Approx(2 * 0.09).epsilon(1e-15));
        CHECK(ob.fhat.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("dressing") {
    auto ms = modes2();
    const auto ob = cosine_observable(ms, {1, 0, 0});

    SUBCASE("zero angle is the identity") {
        const auto nu = dress(ob, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ms->size())));
        CHECK((nu.values - ob.fhat).cwiseAbs().maxCoeff() == 0.0);
        CHECK(nu.norm_sq == doctest::Approx(2.0).epsilon(1e-15));
    }
    SUBCASE("cosine dresses to e^mu per carried mode") {
        Eigen::VectorXd angle =
            Eigen::VectorXd::Constant(static_cast<Eigen::Index>(ms->size()), -0.07);
        const auto nu = dress(ob, angle, "cos-dressed");
        const auto ip = static_cast<Eigen::Index>(ms->index_of(Momentum{{1, 0, 0}}));
        // cosh(mu) + sinh(mu) = e^mu.
        CHECK(nu.values(ip).real() == doctest::Approx(std::exp(-0.07)).epsilon(1e-15));
        CHECK(nu.norm_sq == doctest::Approx(2.0 * std::exp(-0.14)).epsilon(1e-14));
        CHECK(nu.label == "cos-dressed");
    }
    SUBCASE("size mismatch is rejected") {
        CHECK_THROWS_AS((void)dress(ob, Eigen::VectorXd::Zero(3)), std::invalid_argument);
    }
}

TEST_CASE("vector distance") {
    auto ms = modes2();
    const auto a = dress(cosine_observable(ms, {1, 0, 0}),
                         Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ms->size())));
    const auto b = dress(sine_observable(ms, {1, 0, 0}),
                         Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ms->size())));
    CHECK(vector_distance(a, a) == 0.0);
    CHECK(vector_distance(a, b) == doctest::Approx(2.0).epsilon(1e-15));  // |1-(-i)|^2+|1-i|^2 = 4
    auto other = std::make_shared<ModeSet>(1, 1000.0);
    const auto c = dress(cosine_observable(other, {1, 0, 0}),
                         Eigen::VectorXd::Zero(static_cast<Eigen::Index>(other->size())));
    CHECK_THROWS_AS((void)vector_distance(a, c), std::invalid_argument);
}
