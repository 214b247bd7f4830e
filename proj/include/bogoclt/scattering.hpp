#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "bogoclt/potential.hpp"

namespace bogoclt {

// Numeric failure in a solver or quadrature (root bracketing, branch
// selection, unresolvable tolerance). Distinct from configuration errors.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScatteringGrid {
    // Points per segment, odd so composite Simpson applies directly.
    int inner_points = 8193;    // on [0, support radius]
    int outer_points = 16385;   // on [support radius, D]
    bool operator==(const ScatteringGrid&) const = default;
};

// Ground state of the radial fixed-point problem on the ball of radius
// D = N*ell: (-Laplacian + V/2) f = lambda f with zero normal derivative at
// the boundary, normalized to f(D) = 1. Solved through u = r*f, which obeys
// u'' = (V/2 - lambda) u, u(0) = 0, u'(D) = u(D)/D.
struct ScatteringSolution {
    double N = 0;
    double ell = 0;
    double D = 0;            // N * ell
    double lambda = 0;       // boundary eigenvalue
    double a0 = 0;           // zero-energy scattering length of V
    double integral_Vf = 0;  // 3D integral of V*f
    std::size_t inner_count = 0;  // r[0..inner_count-1] covers [0, support]
    std::vector<double> r;   // two uniform segments: [0, R] then [R, D]
    std::vector<double> f;   // f(r), f.back() == 1

    // 4*pi * int_0^D (1 - f(r)) r^2 sinc(k r) dr; k = 0 gives the plain
    // second-moment integral.
    double w_hat(double k) const;
    // 4*pi * int V(r) f(r) r^2 sinc(k r) dr (integrand supported on [0, R]).
    double Vf_hat(double k) const;

    const RadialPotential& potential() const { return m_potential; }
    RadialPotential m_potential = RadialPotential::soft_sphere(1.0, 1.0);
};

// Zero-energy scattering length: integrate u'' = (V/2) u, u(0)=0, u'(0)=1
// to the support edge R; beyond the support u is linear, so
// a0 = R - u(R)/u'(R) exactly. `steps` is the RK4 step count on [0, R].
double scattering_length(const RadialPotential& V, int steps = 8192);

// Same with a grid-halving error estimate; throws NumericError if the
// Richardson ratio indicates the grid is too coarse to trust.
struct ScatteringLengthResult {
    double a0;
    double error_estimate;
    double richardson_ratio;
};
ScatteringLengthResult scattering_length_refined(const RadialPotential& V, int steps = 8192);

ScatteringSolution solve_neumann(const RadialPotential& V, double N, double ell,
                                 const ScatteringGrid& grid = {});

// Disk cache: one JSON file per (potential, N, ell, grid, schema version).
std::optional<ScatteringSolution> cache_load(const std::filesystem::path& dir,
                                             const RadialPotential& V, double N, double ell,
                                             const ScatteringGrid& grid);
void cache_store(const std::filesystem::path& dir, const ScatteringSolution& sol,
                 const ScatteringGrid& grid);
ScatteringSolution solve_neumann_cached(const RadialPotential& V, double N, double ell,
                                        const ScatteringGrid& grid,
                                        const std::optional<std::filesystem::path>& cache_dir);

// sin(x)/x with a series branch near zero.
double sinc(double x);

// Composite Simpson over a uniform grid of odd size.
double simpson_uniform(const std::vector<double>& y, double h);

}  // namespace bogoclt
