#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "bogoclt/lattice.hpp"

namespace bogoclt {

struct TrigCoefficient {
    std::array<int, 3> n{0, 0, 0};
    std::complex<double> value{0.0, 0.0};
};

// Bounded multiplication observable o(x) = sum_n c_n e^{2 pi i n.x} reduced
// to its action on the condensate: fhat(p) holds the Fourier data of the
// fluctuation part, fbarhat(p) = conj(fhat(-p)) that of its conjugate, and
// `mean` the condensate expectation (the n = 0 coefficient).
struct ObservableSpec {
    std::shared_ptr<const ModeSet> modes;
    Eigen::VectorXcd fhat;
    Eigen::VectorXcd fbarhat;
    std::complex<double> mean{0.0, 0.0};
    double norm_bound = 0;       // sup_x |o(x)| estimated on a dense grid
    double dropped_tail_sq = 0;  // l2^2 of coefficients beyond the mode set
    std::string name;
};

// Coefficients must come on a symmetric index set: -n listed whenever n is
// (values may be zero). Entries beyond the cutoff are dropped into the
// reported tail.
ObservableSpec make_observable(std::shared_ptr<const ModeSet> modes,
                               const std::vector<TrigCoefficient>& coeffs, std::string name);

// Presets: o = 2 cos(2 pi n0.x), o = 2 sin(2 pi n0.x), o = e^{2 pi i n0.x}.
ObservableSpec cosine_observable(std::shared_ptr<const ModeSet> modes, std::array<int, 3> n0);
ObservableSpec sine_observable(std::shared_ptr<const ModeSet> modes, std::array<int, 3> n0);
ObservableSpec exponential_observable(std::shared_ptr<const ModeSet> modes, std::array<int, 3> n0);

// Dressed fluctuation vector nu(p) = fhat(p) cosh(angle_p) + fbarhat(p) sinh(angle_p).
struct NuVector {
    std::shared_ptr<const ModeSet> modes;
    Eigen::VectorXcd values;
    double norm_sq = 0;
    std::string label;
};

NuVector dress(const ObservableSpec& spec, const Eigen::VectorXd& angle, std::string label = {});
double vector_distance(const NuVector& a, const NuVector& b);

}  // namespace bogoclt
