#include "bogoclt/limitlaw.hpp"

#include <cmath>
#include <stdexcept>

namespace bogoclt {

namespace {
constexpr double pi = 3.1415926535897932384626433832795;

void require_uniform_grid(const Eigen::VectorXd& grid) {
    if (grid.size() < 3) throw std::invalid_argument("density grid needs >= 3 points");
    const double h = grid[1] - grid[0];
    if (!(h > 0)) throw std::invalid_argument("density grid must ascend");
    for (Eigen::Index i = 1; i < grid.size(); ++i)
        if (std::abs(grid[i] - grid[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw std::invalid_argument("density grid must be uniform");
}

double simpson_vec(const Eigen::VectorXd& y, double h) {
    if (y.size() % 2 == 0) throw std::invalid_argument("simpson: odd point count required");
    double odd = 0, even = 0;
    for (Eigen::Index i = 1; i + 1 < y.size(); i += 2) odd += y[i];
    for (Eigen::Index i = 2; i + 1 < y.size(); i += 2) even += y[i];
    return h / 3.0 * (y[0] + y[y.size() - 1] + 4.0 * odd + 2.0 * even);
}

// Integral over [x0, x1] of the quadratic through three consecutive nodes
// (xa, ya), (xa+h, yb), (xa+2h, yc); used for fractional interval ends.
double quadratic_patch(double xa, double h, double ya, double yb, double yc, double x0, double x1) {
    const double c0 = ya;
    const double c1 = (yc - 4.0 * yb + 3.0 * ya) / (-2.0 * h);
    const double c2 = (yc - 2.0 * yb + ya) / (2.0 * h * h);
    auto prim = [&](double x) {
        const double t = x - xa;
        return c0 * t + 0.5 * c1 * t * t + c2 * t * t * t / 3.0;
    };
    return prim(x1) - prim(x0);
}

}  // namespace

CovMatrix covariance(const std::vector<NuVector>& nus) {
    if (nus.empty()) throw std::invalid_argument("covariance: need at least one vector");
    for (const auto& nu : nus)
        if (nu.modes != nus.front().modes)
            throw std::invalid_argument("covariance: vectors on different mode sets");
    const auto k = static_cast<Eigen::Index>(nus.size());
    CovMatrix S(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i; j < k; ++j) {
            const std::complex<double> v = nus[i].values.adjoint() * nus[j].values;
            S(i, j) = v;
            S(j, i) = v;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S.real());
    const double scale = std::max(1.0, S.real().cwiseAbs().maxCoeff());
    if (es.eigenvalues().minCoeff() < -1e-10 * scale)
        throw NumericError("covariance: real part not positive semidefinite");
    return S;
}

bool covariance_is_real(const CovMatrix& S, double tol) {
    return S.imag().cwiseAbs().maxCoeff() <= tol * std::max(1.0, S.real().cwiseAbs().maxCoeff());
}

std::complex<double> limit_char_fn(const CovMatrix& S, const Eigen::VectorXd& s) {
    if (s.size() != S.rows()) throw std::invalid_argument("limit_char_fn: dimension mismatch");
    const std::complex<double> quad = s.cast<std::complex<double>>().transpose() * S * s.cast<std::complex<double>>();
    return std::exp(-0.5 * quad);
}

std::complex<double> excited_char_fn(const CovMatrix& S, const std::vector<NuVector>& nus,
                                     std::size_t p_index, const Eigen::VectorXd& s) {
    if (static_cast<std::size_t>(s.size()) != nus.size() || s.size() != S.rows())
        throw std::invalid_argument("excited_char_fn: dimension mismatch");
    std::complex<double> amp{0.0, 0.0};
    for (std::size_t j = 0; j < nus.size(); ++j) {
        if (p_index >= static_cast<std::size_t>(nus[j].values.size()))
            throw std::invalid_argument("excited_char_fn: mode index out of range");
        amp += s[static_cast<Eigen::Index>(j)] * nus[j].values[static_cast<Eigen::Index>(p_index)];
    }
    return limit_char_fn(S, s) * (1.0 - std::norm(amp));
}

double gaussian_density(const Eigen::MatrixXd& S, const Eigen::VectorXd& lambda) {
    const auto k = S.rows();
    if (k < 1 || k > 3) throw std::invalid_argument("gaussian_density: k must be 1..3");
    if (S.cols() != k || lambda.size() != k)
        throw std::invalid_argument("gaussian_density: dimension mismatch");
    if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, S.cwiseAbs().maxCoeff()))
        throw NumericError("gaussian_density: covariance must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success)
        throw NumericError("gaussian_density: covariance must be positive definite (invertible)");
    const double quad = lambda.dot(llt.solve(lambda));
    double det = 1.0;
    for (Eigen::Index i = 0; i < k; ++i) det *= llt.matrixL()(i, i);
    det *= det;
    return std::exp(-0.5 * quad) / (std::pow(2.0 * pi, 0.5 * k) * std::sqrt(det));
}

double choose_s_max(double variance, double tail) {
    if (!(variance > 0)) throw NumericError("choose_s_max: variance must be positive");
    if (!(tail > 0 && tail < 1)) throw std::invalid_argument("choose_s_max: tail in (0,1)");
    return std::sqrt(-2.0 * std::log(tail) / variance);
}

Density1D invert_char_fn(const std::function<std::complex<double>(double)>& phi, double s_max,
                         int s_count, const Eigen::VectorXd& lambda_grid) {
    if (s_count < 3 || s_count % 2 == 0)
        throw std::invalid_argument("invert_char_fn: s_count must be odd and >= 3");
    require_uniform_grid(lambda_grid);

    const double hs = 2.0 * s_max / (s_count - 1);
    std::vector<std::complex<double>> phis(static_cast<std::size_t>(s_count));
    std::vector<double> svals(static_cast<std::size_t>(s_count));
    for (int i = 0; i < s_count; ++i) {
        svals[static_cast<std::size_t>(i)] = -s_max + hs * i;
        phis[static_cast<std::size_t>(i)] = phi(svals[static_cast<std::size_t>(i)]);
    }

    Density1D out;
    out.grid = lambda_grid;
    out.values.resize(lambda_grid.size());
    double max_imag = 0.0;
    Eigen::VectorXd re(s_count), im(s_count);
    for (Eigen::Index j = 0; j < lambda_grid.size(); ++j) {
        const double lam = lambda_grid[j];
        for (int i = 0; i < s_count; ++i) {
            const std::complex<double> val =
                phis[static_cast<std::size_t>(i)] *
                std::complex<double>{std::cos(svals[static_cast<std::size_t>(i)] * lam),
                                     -std::sin(svals[static_cast<std::size_t>(i)] * lam)};
            re[i] = val.real();
            im[i] = val.imag();
        }
        out.values[j] = simpson_vec(re, hs) / (2.0 * pi);
        max_imag = std::max(max_imag, std::abs(simpson_vec(im, hs) / (2.0 * pi)));
    }
    out.imag_residual = max_imag;
    return out;
}

double integrate_against(const Density1D& d, const std::function<double(double)>& g) {
    require_uniform_grid(d.grid);
    if (d.grid.size() != d.values.size())
        throw std::invalid_argument("integrate_against: grid/value size mismatch");
    Eigen::VectorXd y(d.grid.size());
    for (Eigen::Index i = 0; i < d.grid.size(); ++i) y[i] = g(d.grid[i]) * d.values[i];
    return simpson_vec(y, d.grid[1] - d.grid[0]);
}

double interval_probability(const Density1D& d, double a, double b) {
    require_uniform_grid(d.grid);
    if (!(a < b)) throw std::invalid_argument("interval_probability: need a < b");
    const double lo = d.grid[0], hi = d.grid[d.grid.size() - 1];
    if (a < lo || b > hi)
        throw std::invalid_argument("interval_probability: interval outside the density grid");
    const double h = d.grid[1] - d.grid[0];
    const auto n = d.grid.size();

    const auto cell = [&](double x) {
        auto c = static_cast<Eigen::Index>(std::floor((x - lo) / h));
        return std::min(std::max<Eigen::Index>(c, 0), n - 2);
    };
    Eigen::Index ca = cell(a), cb = cell(b);

    auto patch = [&](Eigen::Index c, double x0, double x1) {
        // quadratic through the three nodes nearest to cell c
        const Eigen::Index base = std::min(std::max<Eigen::Index>(c - 1, 0), n - 3);
        return quadratic_patch(d.grid[base], h, d.values[base], d.values[base + 1],
                               d.values[base + 2], x0, x1);
    };

    if (ca == cb) return patch(ca, a, b);

    double total = patch(ca, a, d.grid[ca + 1]) + patch(cb, d.grid[cb], b);
    // whole cells between ca+1 and cb-1
    Eigen::Index first = ca + 1, last = cb;  // cells [first, last)
    if (first < last) {
        Eigen::Index span = last - first;
        if (span % 2 == 1) {
            total += patch(first, d.grid[first], d.grid[first + 1]);
            ++first;
            --span;
        }
        if (span > 0) {
            Eigen::VectorXd y = d.values.segment(first, span + 1);
            total += simpson_vec(y, h);
        }
    }
    return total;
}

double kolmogorov_distance(const Density1D& d1, const Density1D& d2) {
    require_uniform_grid(d1.grid);
    if (d1.grid.size() != d2.grid.size() ||
        std::abs(d1.grid[0] - d2.grid[0]) > 1e-12 ||
        std::abs(d1.grid[d1.grid.size() - 1] - d2.grid[d2.grid.size() - 1]) > 1e-12)
        throw std::invalid_argument("kolmogorov_distance: densities on different grids");
    const double h = d1.grid[1] - d1.grid[0];
    double c1 = 0, c2 = 0, best = 0;
    for (Eigen::Index i = 1; i < d1.grid.size(); ++i) {
        c1 += 0.5 * h * (d1.values[i - 1] + d1.values[i]);
        c2 += 0.5 * h * (d2.values[i - 1] + d2.values[i]);
        best = std::max(best, std::abs(c1 - c2));
    }
    return best;
}

std::complex<double> expectation_of_products(
    const std::vector<std::function<std::complex<double>(double)>>& ghat, const CovMatrix& S,
    double s_max, int s_count) {
    const auto k = static_cast<Eigen::Index>(ghat.size());
    if (k < 1 || k > 3) throw std::invalid_argument("expectation_of_products: k must be 1..3");
    if (S.rows() != k || S.cols() != k)
        throw std::invalid_argument("expectation_of_products: covariance size mismatch");
    if (s_count < 3 || s_count % 2 == 0)
        throw std::invalid_argument("expectation_of_products: s_count must be odd");

    const double h = 2.0 * s_max / (s_count - 1);
    // Pre-tabulate ghat values and check the weighted integrand decays.
    std::vector<std::vector<std::complex<double>>> gv(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) {
        auto& col = gv[static_cast<std::size_t>(j)];
        col.resize(static_cast<std::size_t>(s_count));
        double peak = 0.0;
        for (int i = 0; i < s_count; ++i) {
            const double s = -s_max + h * i;
            col[static_cast<std::size_t>(i)] = ghat[static_cast<std::size_t>(j)](s);
            peak = std::max(peak, std::abs(col[static_cast<std::size_t>(i)]) * (1.0 + s * s * s * s));
        }
        const double edge = std::max(std::abs(col.front()), std::abs(col.back())) *
                            (1.0 + s_max * s_max * s_max * s_max);
        if (edge > 1e-6 * std::max(peak, 1e-300))
            throw NumericError(
                "expectation_of_products: weighted transform (1+s^4)|ghat| does not decay on the "
                "quadrature range");
    }

    auto weight = [&](int i) {
        if (i == 0 || i == s_count - 1) return 1.0;
        return i % 2 == 1 ? 4.0 : 2.0;
    };
    auto snode = [&](int i) { return -s_max + h * i; };

    std::complex<double> total{0.0, 0.0};
    Eigen::VectorXd s(k);
    if (k == 1) {
        for (int i = 0; i < s_count; ++i) {
            s[0] = snode(i);
            total += weight(i) * gv[0][static_cast<std::size_t>(i)] * limit_char_fn(S, s);
        }
        return total * (h / 3.0);
    }
    if (k == 2) {
        for (int i = 0; i < s_count; ++i) {
            s[0] = snode(i);
            for (int j = 0; j < s_count; ++j) {
                s[1] = snode(j);
                total += weight(i) * weight(j) * gv[0][static_cast<std::size_t>(i)] *
                         gv[1][static_cast<std::size_t>(j)] * limit_char_fn(S, s);
            }
        }
        return total * (h / 3.0) * (h / 3.0);
    }
    for (int i = 0; i < s_count; ++i) {
        s[0] = snode(i);
        for (int j = 0; j < s_count; ++j) {
            s[1] = snode(j);
            for (int l = 0; l < s_count; ++l) {
                s[2] = snode(l);
                total += weight(i) * weight(j) * weight(l) * gv[0][static_cast<std::size_t>(i)] *
                         gv[1][static_cast<std::size_t>(j)] * gv[2][static_cast<std::size_t>(l)] *
                         limit_char_fn(S, s);
            }
        }
    }
    return total * (h / 3.0) * (h / 3.0) * (h / 3.0);
}

double integrability_weight(const std::function<std::complex<double>(double)>& ghat, double s_max,
                            int s_count) {
    if (s_count < 3 || s_count % 2 == 0)
        throw std::invalid_argument("integrability_weight: s_count must be odd");
    const double h = 2.0 * s_max / (s_count - 1);
    Eigen::VectorXd y(s_count);
    for (int i = 0; i < s_count; ++i) {
        const double s = -s_max + h * i;
        y[i] = std::abs(ghat(s)) * (1.0 + s * s * s * s);
    }
    return simpson_vec(y, h);
}

}  // namespace bogoclt
