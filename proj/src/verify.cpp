#include "bogoclt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "bogoclt/limitlaw.hpp"

namespace bogoclt::verify {

namespace {

using std::complex;
using Matrix = fock::Matrix;
using Vector = fock::Vector;

constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ordered_json basis_json(const fock::FockBasis& basis) {
    ordered_json modes = ordered_json::array();
    for (std::size_t j = 0; j < basis.mode_count(); ++j) {
        const auto& n = basis.mode(j).n;
        modes.push_back({n[0], n[1], n[2]});
    }
    return ordered_json{{"modes", modes},
                        {"n_max", basis.n_max()},
                        {"N", basis.N()},
                        {"dim", basis.dim()}};
}

std::vector<Momentum> pair_modes() {
    return {Momentum{{1, 0, 0}}, Momentum{{-1, 0, 0}}};
}

struct TriadSetup {
    fock::FockBasis basis;
    Eigen::VectorXd eta;
    fock::CubicPartition partition;
};

// Six modes on one axis: +-e1 (low), +-2e1 (high), +-3e1 (receivers of the
// sums), so every (r, v) pair with r+v != 0 stays inside the set.
TriadSetup make_triad(int n_max, double N) {
    std::vector<Momentum> modes{Momentum{{1, 0, 0}},  Momentum{{-1, 0, 0}},
                                Momentum{{2, 0, 0}},  Momentum{{-2, 0, 0}},
                                Momentum{{3, 0, 0}},  Momentum{{-3, 0, 0}}};
    fock::FockBasis basis(modes, n_max, N);
    Eigen::VectorXd eta(6);
    for (int j = 0; j < 6; ++j) {
        const int a = std::abs(modes[static_cast<std::size_t>(j)].n[0]);
        eta(j) = 0.18 / double(a * a);
    }
    fock::CubicPartition part;
    part.low = {basis.mode_index(Momentum{{1, 0, 0}}), basis.mode_index(Momentum{{-1, 0, 0}})};
    part.high = {basis.mode_index(Momentum{{2, 0, 0}}), basis.mode_index(Momentum{{-2, 0, 0}})};
    return TriadSetup{std::move(basis), std::move(eta), std::move(part)};
}

// Reference vectors over the pair modes with a genuinely complex overlap:
// <nu1, nu2> = 0.326i.
std::vector<Vector> reference_nus() {
    Vector nu1(2), nu2(2);
    nu1 << complex<double>(0.60, 0.0), complex<double>(0.0, 0.35);
    nu2 << complex<double>(0.0, 0.31), complex<double>(-0.40, 0.0);
    return {nu1, nu2};
}

Eigen::MatrixXcd gram_symmetric(const std::vector<Vector>& nus) {
    const auto k = static_cast<Eigen::Index>(nus.size());
    Eigen::MatrixXcd S(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i; j < k; ++j) {
            S(i, j) = nus[static_cast<std::size_t>(i)].dot(nus[static_cast<std::size_t>(j)]);
            S(j, i) = S(i, j);
        }
    }
    return S;
}

// Polar grid filling ||s|| * max_j||nu_j|| <= 1, boundary included.
std::vector<std::vector<double>> polar_s_grid(double max_norm, int radii, int angles) {
    std::vector<std::vector<double>> out;
    out.push_back({0.0, 0.0});
    const double rho_max = 1.0 / max_norm;
    for (int i = 1; i <= radii; ++i) {
        const double rho = rho_max * double(i) / double(radii);
        for (int a = 0; a < angles; ++a) {
            const double th = 2.0 * kPi * double(a) / double(angles);
            out.push_back({rho * std::cos(th), rho * std::sin(th)});
        }
    }
    return out;
}

Eigen::VectorXd to_eigen(const std::vector<double>& s) {
    return Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size()));
}

double drift_of(const std::vector<double>& c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double v : c) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

bool all_finite(const std::vector<double>& c) {
    return std::all_of(c.begin(), c.end(), [](double v) { return std::isfinite(v); });
}

ordered_json by_n_json(const std::vector<double>& Ns, const std::vector<double>& Cs) {
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        arr.push_back({{"N", Ns[i]}, {"C", Cs[i]}});
    }
    return arr;
}

}  // namespace

std::uint64_t sub_seed(std::uint64_t base, std::string_view tag, std::uint64_t index) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return splitmix(base ^ h ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

StateSampler::StateSampler(std::uint64_t seed) : m_state(seed) {}

std::uint64_t StateSampler::next_bits() {
    m_state += 0x9e3779b97f4a7c15ULL;
    return splitmix(m_state);
}

double StateSampler::gaussian() {
    if (m_have_spare) {
        m_have_spare = false;
        return m_spare;
    }
    const double u1 = (double(next_bits() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = double(next_bits() >> 11) * 0x1.0p-53;          // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    m_spare = r * std::sin(2.0 * kPi * u2);
    m_have_spare = true;
    return r * std::cos(2.0 * kPi * u2);
}

complex<double> StateSampler::complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

Vector StateSampler::state(const fock::FockBasis& basis,
                           const std::vector<std::size_t>& support) {
    if (support.empty()) {
        throw std::invalid_argument("verify: empty sampling support");
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
    for (std::size_t idx : support) {
        v(static_cast<Eigen::Index>(idx)) = complex_gaussian();
    }
    const double n = v.norm();
    if (n == 0.0) {
        v(static_cast<Eigen::Index>(support.front())) = 1.0;
        return v;
    }
    return v / n;
}

ProductExpectation::ProductExpectation(const std::vector<Matrix>& hermitian_ops,
                                       const Vector& lhs, const Vector& rhs) {
    if (hermitian_ops.empty()) {
        throw std::invalid_argument("verify: need at least one factor");
    }
    std::vector<Matrix> vecs;
    vecs.reserve(hermitian_ops.size());
    for (const Matrix& H : hermitian_ops) {
        const double herm_dev = (H - H.adjoint()).cwiseAbs().maxCoeff();
        if (herm_dev > 1e-12 * (1.0 + H.cwiseAbs().maxCoeff())) {
            throw std::invalid_argument("verify: factor is not hermitian");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(H);
        if (es.info() != Eigen::Success) {
            throw NumericError("verify: eigendecomposition failed");
        }
        m_eigs.push_back(es.eigenvalues());
        vecs.push_back(es.eigenvectors());
    }
    for (std::size_t j = 0; j + 1 < vecs.size(); ++j) {
        m_links.push_back(vecs[j].adjoint() * vecs[j + 1]);
    }
    m_front = vecs.front().adjoint() * lhs;
    m_back = vecs.back().adjoint() * rhs;
}

complex<double> ProductExpectation::value(const std::vector<double>& s) const {
    if (s.size() != m_eigs.size()) {
        throw std::invalid_argument("verify: s-tuple has wrong length");
    }
    Vector u = m_back;
    for (std::size_t jj = m_eigs.size(); jj-- > 0;) {
        const Eigen::VectorXd& d = m_eigs[jj];
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            u(i) *= std::exp(complex<double>(0.0, s[jj] * d(i)));
        }
        if (jj > 0) u = m_links[jj - 1] * u;
    }
    return m_front.dot(u);
}

ordered_json check_commutators(const fock::FockBasis& basis, double tol) {
    const double N = basis.N();
    const auto margin1 = basis.margin_states(1);
    const auto w = [&](int t) { return std::sqrt((N - t) / N); };

    double dev_ccr = 0.0, dev_mod = 0.0, dev_bb = 0.0;
    std::vector<int> occ;
    for (std::size_t s : margin1) {
        occ = basis.occupation(s);
        const int t = basis.total_occupation(s);
        for (std::size_t p = 0; p < basis.mode_count(); ++p) {
            for (std::size_t q = 0; q < basis.mode_count(); ++q) {
                const double np = occ[p];
                const double nq = occ[q];
                const double dpq = (p == q) ? 1.0 : 0.0;
                // a_p a*_q and a*_q a_p both send |occ> to |occ + e_q - e_p>.
                const double c1 = std::sqrt(nq + 1.0) * std::sqrt(np + dpq);
                const double c2 = (np > 0) ? std::sqrt(np) * std::sqrt(nq + 1.0 - dpq) : 0.0;
                dev_ccr = std::max(dev_ccr, std::abs(c1 - c2 - dpq));

                const double b1 = w(t) * w(t) * std::sqrt(nq + 1.0) * std::sqrt(np + dpq);
                const double b2 =
                    (np > 0) ? w(t - 1) * w(t - 1) * std::sqrt(np) * std::sqrt(nq + 1.0 - dpq)
                             : 0.0;
                const double rhs =
                    dpq * (1.0 - t / N) -
                    (np > 0 ? std::sqrt(np) * std::sqrt(nq + 1.0 - dpq) / N : 0.0);
                dev_mod = std::max(dev_mod, std::abs(b1 - b2 - rhs));
            }
        }
    }
    // [b_p, b_q] = 0 needs no margin: both orders only lower the occupation.
    for (std::size_t s = 0; s < basis.dim(); ++s) {
        occ = basis.occupation(s);
        const int t = basis.total_occupation(s);
        for (std::size_t p = 0; p < basis.mode_count(); ++p) {
            for (std::size_t q = 0; q < basis.mode_count(); ++q) {
                const double dpq = (p == q) ? 1.0 : 0.0;
                const double np = occ[p];
                const double nq = occ[q];
                const double fwd = (nq > 0 && np - dpq > 0)
                                       ? w(t - 1) * w(t - 2) * std::sqrt(nq) * std::sqrt(np - dpq)
                                       : 0.0;
                const double rev = (np > 0 && nq - dpq > 0)
                                       ? w(t - 1) * w(t - 2) * std::sqrt(np) * std::sqrt(nq - dpq)
                                       : 0.0;
                dev_bb = std::max(dev_bb, std::abs(fwd - rev));
            }
        }
    }

    const bool pass = dev_ccr <= tol && dev_mod <= tol && dev_bb <= tol;
    return ordered_json{
        {"name", "commutation-relations"},
        {"statement",
         "[a_p, a*_q] = delta_pq; [b_p, b*_q] = delta_pq (1 - Ntot/N) - a*_q a_p / N; "
         "[b_p, b_q] = 0; checked state-by-state on total occupation <= n_max - 1"},
        {"basis", basis_json(basis)},
        {"margin", 1},
        {"max_deviation_ccr", dev_ccr},
        {"max_deviation_modified", dev_mod},
        {"max_deviation_bb", dev_bb},
        {"tolerance", tol},
        {"pass", pass}};
}

ordered_json check_bogoliubov_unitary(const fock::FockBasis& basis,
                                      const Eigen::VectorXd& eta, double tol) {
    const Matrix T = fock::bogoliubov_map(basis, eta);
    const auto d = static_cast<Eigen::Index>(basis.dim());
    const double dev = (T.adjoint() * T - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    std::vector<double> eta_list(eta.data(), eta.data() + eta.size());
    return ordered_json{{"name", "bogoliubov-unitary"},
                        {"statement", "T = exp(1/2 sum_p eta_p (b*_p b*_{-p} - b_{-p} b_p)) "
                                      "is unitary: max |(T*T - 1)_ij| <= tol"},
                        {"basis", basis_json(basis)},
                        {"eta", eta_list},
                        {"max_deviation", dev},
                        {"tolerance", tol},
                        {"pass", dev <= tol}};
}

ordered_json check_weyl_relation(int n_max, std::uint64_t seed, int trials, double tol) {
    fock::FockBasis basis(pair_modes(), n_max, std::max(100.0, double(n_max)));
    StateSampler sampler(seed);
    const auto support = [&] {
        std::vector<std::size_t> out;
        for (std::size_t s = 0; s < basis.dim(); ++s) {
            if (basis.total_occupation(s) <= 2) out.push_back(s);
        }
        return out;
    }();

    double worst = 0.0;
    ordered_json trials_json = ordered_json::array();
    for (int trial = 0; trial < trials; ++trial) {
        Vector f(2), g(2);
        if (trial == 0) {
            f << complex<double>(0.8, 0.0), complex<double>(0.6, 0.0);
            g << complex<double>(0.0, 0.6), complex<double>(-0.8, 0.0);
        } else {
            f << sampler.complex_gaussian(), sampler.complex_gaussian();
            g << sampler.complex_gaussian(), sampler.complex_gaussian();
            f.normalize();
            g.normalize();
        }
        const Matrix Wf = fock::weyl_op(basis, f, 1.0, false);
        const Matrix Wg = fock::weyl_op(basis, g, 1.0, false);
        const Matrix Wfg = fock::weyl_op(basis, Vector(f + g), 1.0, false);
        const complex<double> phase = std::exp(complex<double>(0.0, -f.dot(g).imag()));
        const Matrix delta = Wf * Wg - phase * Wfg;
        double residual = 0.0;
        for (std::size_t col : support) {
            residual = std::max(residual, delta.col(static_cast<Eigen::Index>(col)).norm());
        }
        worst = std::max(worst, residual);
        trials_json.push_back({{"trial", trial},
                               {"im_fg", f.dot(g).imag()},
                               {"residual", residual}});
    }
    return ordered_json{
        {"name", "weyl-relation"},
        {"statement", "exp(i phi_a(f)) exp(i phi_a(g)) = exp(-i Im<f,g>) exp(i phi_a(f+g)); "
                      "residual = max column norm of the difference on states with total "
                      "occupation <= 2"},
        {"basis", basis_json(basis)},
        {"seed", seed},
        {"trials", trials_json},
        {"max_residual", worst},
        {"tolerance", tol},
        {"pass", worst <= tol}};
}

namespace {

struct CharFnRun {
    double max_deviation = 0.0;
    int points = 0;
};

// Shared driver: excited_mode < 0 means vacuum on both sides.
CharFnRun char_fn_deviation(const fock::FockBasis& basis, const std::vector<Vector>& nus,
                            int excited_mode) {
    std::vector<Matrix> fields;
    fields.reserve(nus.size());
    double max_nu = 0.0;
    for (const Vector& nu : nus) {
        fields.push_back(fock::field_op(basis, nu, false));
        max_nu = std::max(max_nu, nu.norm());
    }
    Vector state;
    if (excited_mode < 0) {
        state = fock::vacuum(basis);
    } else {
        std::vector<int> occ(basis.mode_count(), 0);
        occ[static_cast<std::size_t>(excited_mode)] = 1;
        state = fock::basis_vector(basis, occ);
    }
    ProductExpectation prod(fields, state, state);
    const Eigen::MatrixXcd S = gram_symmetric(nus);

    CharFnRun run;
    for (const auto& s : polar_s_grid(max_nu, 5, 8)) {
        complex<double> analytic = limit_char_fn(S, to_eigen(s));
        if (excited_mode >= 0) {
            complex<double> disp = 0.0;
            for (std::size_t j = 0; j < nus.size(); ++j) {
                disp += s[j] * nus[j](excited_mode);
            }
            analytic *= (1.0 - std::norm(disp));
        }
        const complex<double> numeric = prod.value(s);
        run.max_deviation = std::max(run.max_deviation, std::abs(numeric - analytic));
        ++run.points;
    }
    return run;
}

}  // namespace

ordered_json check_vacuum_char_fn(int n_max, double N, double tol) {
    fock::FockBasis basis(pair_modes(), n_max, N);
    const auto nus = reference_nus();
    const CharFnRun run = char_fn_deviation(basis, nus, -1);

    // One-mode cross-check with a hand value: nu = (1, 0), s = 1.
    Vector nu1(2);
    nu1 << 1.0, 0.0;
    ProductExpectation single({fock::field_op(basis, nu1, false)}, fock::vacuum(basis),
                              fock::vacuum(basis));
    const complex<double> got = single.value({1.0});
    const double expected = std::exp(-0.5);
    const double single_dev = std::abs(got - expected);

    const Eigen::MatrixXcd S = gram_symmetric(nus);
    const bool pass = run.max_deviation <= tol && single_dev <= tol;
    return ordered_json{
        {"name", "vacuum-char-fn"},
        {"statement", "<Omega, prod_j exp(i s_j phi_a(nu_j)) Omega> = exp(-1/2 sum_lj s_l "
                      "s_j S_lj), S_lj = <nu_l, nu_j> symmetrized; grid covers ||s|| "
                      "max||nu|| <= 1"},
        {"basis", basis_json(basis)},
        {"overlap_nu1_nu2", {{"re", S(0, 1).real()}, {"im", S(0, 1).imag()}}},
        {"grid_points", run.points},
        {"max_deviation", run.max_deviation},
        {"single_mode_value", {{"re", got.real()}, {"im", got.imag()}}},
        {"single_mode_expected", expected},
        {"single_mode_deviation", single_dev},
        {"tolerance", tol},
        {"pass", pass}};
}

ordered_json check_excited_char_fn(int n_max, double N, double tol) {
    fock::FockBasis basis(pair_modes(), n_max, N);
    const auto nus = reference_nus();
    const CharFnRun run = char_fn_deviation(basis, nus, 0);

    // One-mode cross-check: nu = (1, 0) on the excited mode, s = 0.6:
    // (1 - s^2) exp(-s^2/2).
    Vector nu1(2);
    nu1 << 1.0, 0.0;
    std::vector<int> occ{1, 0};
    const Vector x = fock::basis_vector(basis, occ);
    ProductExpectation single({fock::field_op(basis, nu1, false)}, x, x);
    const double s0 = 0.6;
    const complex<double> got = single.value({s0});
    const double expected = (1.0 - s0 * s0) * std::exp(-0.5 * s0 * s0);
    const double single_dev = std::abs(got - expected);

    const bool pass = run.max_deviation <= tol && single_dev <= tol;
    return ordered_json{
        {"name", "excited-char-fn"},
        {"statement", "<x, prod_j exp(i s_j phi_a(nu_j)) x> with x = a*_p Omega equals "
                      "exp(-1/2 s.S s) (1 - |sum_j s_j nu_j(p)|^2); the sign of the "
                      "correction is fixed by the displaced-one-quantum closed form "
                      "exp(-t/2)(1 - t) and by positivity of the second moment"},
        {"basis", basis_json(basis)},
        {"excited_mode", 0},
        {"grid_points", run.points},
        {"max_deviation", run.max_deviation},
        {"single_mode_value", {{"re", got.real()}, {"im", got.imag()}}},
        {"single_mode_expected", expected},
        {"single_mode_deviation", single_dev},
        {"tolerance", tol},
        {"pass", pass}};
}

ordered_json check_char_fn_convergence(const std::vector<int>& n_max_list, double N) {
    const auto nus = reference_nus();
    double max_nu = 0.0;
    for (const auto& nu : nus) max_nu = std::max(max_nu, nu.norm());
    const double rho = 1.0 / max_nu;
    const std::vector<double> s{rho * std::cos(kPi / 8.0), rho * std::sin(kPi / 8.0)};
    const Eigen::MatrixXcd S = gram_symmetric(nus);
    const complex<double> analytic = limit_char_fn(S, to_eigen(s));

    ordered_json table = ordered_json::array();
    std::vector<double> devs;
    for (int n_max : n_max_list) {
        fock::FockBasis basis(pair_modes(), n_max, std::max(N, double(n_max)));
        std::vector<Matrix> fields;
        for (const Vector& nu : nus) fields.push_back(fock::field_op(basis, nu, false));
        ProductExpectation prod(fields, fock::vacuum(basis), fock::vacuum(basis));
        const double dev = std::abs(prod.value(s) - analytic);
        devs.push_back(dev);
        table.push_back({{"n_max", n_max}, {"deviation", dev}});
    }
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < devs.size(); ++i) {
        if (devs[i + 1] > 1.1 * devs[i] + 1e-13) monotone = false;
    }
    const bool pass = monotone && !devs.empty() && devs.back() <= 1e-6;
    return ordered_json{{"name", "char-fn-convergence"},
                        {"statement", "the vacuum product-identity deviation decreases as the "
                                      "occupation cap grows: truncation, not the identity, "
                                      "drives the residual"},
                        {"N", N},
                        {"s", s},
                        {"table", table},
                        {"pass", pass}};
}

ordered_json fit_quadratic_conjugation(int n_max, double eta, const FitOptions& opt) {
    const int margin = 4;
    std::vector<std::vector<double>> C(2);  // k = 1, 2
    ordered_json sub_seeds = ordered_json::array();
    for (std::size_t iN = 0; iN < opt.sweep_N.size(); ++iN) {
        const double N = opt.sweep_N[iN];
        fock::FockBasis basis(pair_modes(), n_max, N);
        Eigen::VectorXd ev(2);
        ev << eta, eta;
        const Matrix T = fock::bogoliubov_map(basis, ev);
        const auto support = basis.margin_states(margin);
        const std::uint64_t ss = sub_seed(opt.seed, "quadratic-conjugation", iN);
        sub_seeds.push_back(ss);
        StateSampler sampler(ss);

        std::vector<Matrix> lhs, den;
        for (int k = 1; k <= 2; ++k) {
            const Matrix Nk = fock::diagonal_power(basis, 0.0, double(k));
            lhs.push_back(T.adjoint() * Nk * T);
            Matrix d = Nk;
            d.diagonal().array() += 1.0;
            den.push_back(d);
        }
        std::vector<double> best(2, 0.0);
        for (int s = 0; s < opt.samples; ++s) {
            const Vector xi = sampler.state(basis, support);
            for (int k = 0; k < 2; ++k) {
                const double num = xi.dot(lhs[static_cast<std::size_t>(k)] * xi).real();
                const double de = xi.dot(den[static_cast<std::size_t>(k)] * xi).real();
                best[static_cast<std::size_t>(k)] =
                    std::max(best[static_cast<std::size_t>(k)], num / de);
            }
        }
        for (int k = 0; k < 2; ++k) C[static_cast<std::size_t>(k)].push_back(best[static_cast<std::size_t>(k)]);
    }

    ordered_json fits = ordered_json::array();
    bool pass = true;
    for (int k = 0; k < 2; ++k) {
        const auto& c = C[static_cast<std::size_t>(k)];
        const double drift = drift_of(c);
        const bool ok = all_finite(c) && drift < opt.drift_limit;
        pass = pass && ok;
        fits.push_back({{"k", k + 1},
                        {"C_by_N", by_n_json(opt.sweep_N, c)},
                        {"drift", drift},
                        {"pass", ok}});
    }
    return ordered_json{
        {"name", "quadratic-conjugation-growth"},
        {"statement", "T* Ntot^k T <= C_k (Ntot^k + 1) as quadratic forms, k in {1,2}; "
                      "C_k = max sampled ratio, stability = max/min over the N-sweep"},
        {"pair_n_max", n_max},
        {"eta", eta},
        {"margin", margin},
        {"samples", opt.samples},
        {"seed", opt.seed},
        {"sub_seeds", sub_seeds},
        {"drift_limit", opt.drift_limit},
        {"fits", fits},
        {"pass", pass}};
}

ordered_json fit_residual_norm(int n_max, double eta, const FitOptions& opt) {
    const int margin = 6;
    std::vector<double> C;
    ordered_json sub_seeds = ordered_json::array();
    for (std::size_t iN = 0; iN < opt.sweep_N.size(); ++iN) {
        const double N = opt.sweep_N[iN];
        fock::FockBasis basis(pair_modes(), n_max, N);
        Eigen::VectorXd ev(2);
        ev << eta, eta;
        const Matrix T = fock::bogoliubov_map(basis, ev);
        const Matrix d = fock::residual_d(basis, T, ev, 0);
        const Matrix b0 = fock::modified_annihilator(basis, 0);
        const Matrix D32 = fock::diagonal_power(basis, 1.0, 1.5);
        const Matrix D1 = fock::diagonal_power(basis, 1.0, 1.0);
        const auto support = basis.margin_states(margin);
        const std::uint64_t ss = sub_seed(opt.seed, "residual-norm", iN);
        sub_seeds.push_back(ss);
        StateSampler sampler(ss);

        double best = 0.0;
        for (int s = 0; s < opt.samples; ++s) {
            const Vector xi = sampler.state(basis, support);
            const double num = N * (d * xi).norm();
            const double den = std::abs(eta) * (D32 * xi).norm() + (b0 * (D1 * xi)).norm();
            best = std::max(best, num / den);
        }
        C.push_back(best);
    }
    const double drift = drift_of(C);
    const bool pass = all_finite(C) && drift < opt.drift_limit;
    return ordered_json{
        {"name", "residual-norm"},
        {"statement", "N ||d_p xi|| <= C [ |eta_p| ||(Ntot+1)^{3/2} xi|| + ||b_p (Ntot+1) "
                      "xi|| ] with d_p = T* b_p T - cosh(eta_p) b_p - sinh(eta_p) b*_{-p}"},
        {"pair_n_max", n_max},
        {"eta", eta},
        {"margin", margin},
        {"samples", opt.samples},
        {"seed", opt.seed},
        {"sub_seeds", sub_seeds},
        {"drift_limit", opt.drift_limit},
        {"C_by_N", by_n_json(opt.sweep_N, C)},
        {"drift", drift},
        {"pass", pass}};
}

ordered_json fit_displaced_number_growth(int n_max, double alpha, const FitOptions& opt) {
    if (alpha < 1.0) {
        throw std::invalid_argument("verify: alpha must be >= 1");
    }
    const int h_draws = 10;
    const int xi_per_h = std::max(1, opt.samples / h_draws);
    std::vector<std::vector<double>> C(2);  // j = 1, 2
    ordered_json sub_seeds = ordered_json::array();
    for (std::size_t iN = 0; iN < opt.sweep_N.size(); ++iN) {
        const double N = opt.sweep_N[iN];
        fock::FockBasis basis(pair_modes(), n_max, N);
        const auto support = [&] {
            std::vector<std::size_t> out;
            for (std::size_t s = 0; s < basis.dim(); ++s) {
                if (basis.total_occupation(s) <= 4) out.push_back(s);
            }
            return out;
        }();
        const std::uint64_t ss = sub_seed(opt.seed, "displaced-number", iN);
        sub_seeds.push_back(ss);
        StateSampler sampler(ss);

        std::vector<double> best(2, 0.0);
        for (int hd = 0; hd < h_draws; ++hd) {
            Vector h(2);
            h << sampler.complex_gaussian(), sampler.complex_gaussian();
            h.normalize();  // ||h|| = 1
            const Matrix W = fock::weyl_op(basis, h, 1.0, true);
            for (int j = 1; j <= 2; ++j) {
                const Matrix Dnum = fock::diagonal_power(basis, alpha, double(j));
                const Matrix lhs = W.adjoint() * Dnum * W;
                const Matrix den = fock::diagonal_power(basis, alpha + 1.0, double(j));
                for (int s = 0; s < xi_per_h; ++s) {
                    const Vector xi = sampler.state(basis, support);
                    const double num = xi.dot(lhs * xi).real();
                    const double de = xi.dot(den * xi).real();
                    best[static_cast<std::size_t>(j - 1)] =
                        std::max(best[static_cast<std::size_t>(j - 1)], num / de);
                }
            }
        }
        for (int j = 0; j < 2; ++j) C[static_cast<std::size_t>(j)].push_back(best[static_cast<std::size_t>(j)]);
    }

    ordered_json fits = ordered_json::array();
    bool pass = true;
    for (int j = 0; j < 2; ++j) {
        const auto& c = C[static_cast<std::size_t>(j)];
        const double drift = drift_of(c);
        const bool ok = all_finite(c) && drift < opt.drift_limit;
        pass = pass && ok;
        fits.push_back({{"j", j + 1},
                        {"C_by_N", by_n_json(opt.sweep_N, c)},
                        {"drift", drift},
                        {"pass", ok}});
    }
    return ordered_json{
        {"name", "displaced-number-growth"},
        {"statement", "<xi, e^{-i phi(h)} (Ntot+alpha)^j e^{i phi(h)} xi> <= C <xi, "
                      "(Ntot+alpha+||h||^2)^j xi> for the modified field, ||h|| = 1"},
        {"pair_n_max", n_max},
        {"alpha", alpha},
        {"h_draws", h_draws},
        {"samples", h_draws * xi_per_h},
        {"seed", opt.seed},
        {"sub_seeds", sub_seeds},
        {"drift_limit", opt.drift_limit},
        {"fits", fits},
        {"pass", pass}};
}

ordered_json fit_cubic_conjugation(int n_max, const FitOptions& opt) {
    const std::vector<double> kappas{1.0, 0.5, -0.5, -1.0};
    std::vector<std::vector<double>> C(kappas.size());
    double antiherm_dev = 0.0;
    std::size_t pairs_used = 0, pairs_dropped = 0;
    ordered_json sub_seeds = ordered_json::array();
    ordered_json eta_json;
    for (std::size_t iN = 0; iN < opt.sweep_N.size(); ++iN) {
        const double N = opt.sweep_N[iN];
        TriadSetup triad = make_triad(n_max, N);
        const auto cubic = fock::cubic_generator(triad.basis, triad.eta, triad.partition);
        pairs_used = cubic.pairs_used;
        pairs_dropped = cubic.pairs_dropped;
        antiherm_dev =
            std::max(antiherm_dev, (cubic.A + cubic.A.adjoint()).cwiseAbs().maxCoeff());
        if (iN == 0) {
            eta_json = ordered_json::array();
            for (Eigen::Index j = 0; j < triad.eta.size(); ++j) eta_json.push_back(triad.eta(j));
        }

        const Matrix E = fock::expm(Matrix(0.5 * cubic.A));  // e^{A/2}
        const Matrix E2 = E * E;
        const std::vector<Matrix> U{E2, E, E.adjoint(), E2.adjoint()};
        const Matrix N1 = fock::number_op(triad.basis);
        Matrix D1 = N1;
        D1.diagonal().array() += 1.0;

        const auto support = triad.basis.margin_states(2);
        const std::uint64_t ss = sub_seed(opt.seed, "cubic-conjugation", iN);
        sub_seeds.push_back(ss);
        StateSampler sampler(ss);
        std::vector<double> best(kappas.size(), 0.0);
        for (int s = 0; s < opt.samples; ++s) {
            const Vector xi = sampler.state(triad.basis, support);
            const double den = xi.dot(D1 * xi).real();
            for (std::size_t ik = 0; ik < kappas.size(); ++ik) {
                const Vector y = U[ik] * xi;
                const double num = y.dot(N1 * y).real();
                best[ik] = std::max(best[ik], num / den);
            }
        }
        for (std::size_t ik = 0; ik < kappas.size(); ++ik) C[ik].push_back(best[ik]);
    }

    ordered_json fits = ordered_json::array();
    bool pass = antiherm_dev <= 1e-12;
    for (std::size_t ik = 0; ik < kappas.size(); ++ik) {
        const double drift = drift_of(C[ik]);
        const bool ok = all_finite(C[ik]) && drift < opt.drift_limit;
        pass = pass && ok;
        fits.push_back({{"kappa", kappas[ik]},
                        {"C_by_N", by_n_json(opt.sweep_N, C[ik])},
                        {"drift", drift},
                        {"pass", ok}});
    }
    return ordered_json{
        {"name", "cubic-conjugation-growth"},
        {"statement", "e^{kappa A} Ntot e^{-kappa A} <= C (Ntot + 1) for kappa in {1, 1/2, "
                      "-1/2, -1}; A is the antihermitian cubic generator on a closed "
                      "six-mode triad"},
        {"triad_n_max", n_max},
        {"eta", eta_json},
        {"pairs_used", pairs_used},
        {"pairs_dropped", pairs_dropped},
        {"antihermitian_deviation", antiherm_dev},
        {"margin", 2},
        {"samples", opt.samples},
        {"seed", opt.seed},
        {"sub_seeds", sub_seeds},
        {"drift_limit", opt.drift_limit},
        {"fits", fits},
        {"pass", pass}};
}

ordered_json fit_cubic_field_commutator(int n_max, const FitOptions& opt) {
    const int h_draws = 5;
    const int pairs_per_h = std::max(1, opt.samples / h_draws);
    std::vector<double> C;
    ordered_json sub_seeds = ordered_json::array();
    for (std::size_t iN = 0; iN < opt.sweep_N.size(); ++iN) {
        const double N = opt.sweep_N[iN];
        TriadSetup triad = make_triad(n_max, N);
        const auto cubic = fock::cubic_generator(triad.basis, triad.eta, triad.partition);
        const Matrix Shalf = fock::diagonal_power(triad.basis, 1.0, 0.5);
        const auto support = triad.basis.margin_states(2);
        const std::uint64_t ss = sub_seed(opt.seed, "cubic-field-commutator", iN);
        sub_seeds.push_back(ss);
        StateSampler sampler(ss);

        double best = 0.0;
        for (int hd = 0; hd < h_draws; ++hd) {
            Vector h = Vector::Zero(6);
            h(static_cast<Eigen::Index>(triad.partition.low[0])) = sampler.complex_gaussian();
            h(static_cast<Eigen::Index>(triad.partition.low[1])) = sampler.complex_gaussian();
            h.normalize();  // bound is homogeneous in ||h||
            const Matrix B = fock::smeared_annihilator(triad.basis, h, true);
            const Matrix K = B * cubic.A - cubic.A * B;
            for (int s = 0; s < pairs_per_h; ++s) {
                const Vector xi1 = sampler.state(triad.basis, support);
                const Vector xi2 = sampler.state(triad.basis, support);
                const double num = std::abs(xi1.dot(K * xi2)) * std::sqrt(N);
                const double den = (Shalf * xi1).norm() * (Shalf * xi2).norm();
                best = std::max(best, num / den);
            }
        }
        C.push_back(best);
    }
    const double drift = drift_of(C);
    const bool pass = all_finite(C) && drift < opt.drift_limit;
    return ordered_json{
        {"name", "cubic-field-commutator"},
        {"statement", "|<xi1, [b(h), A] xi2>| <= (C ||h|| / sqrt(N)) ||(Ntot+1)^{1/2} xi1|| "
                      "||(Ntot+1)^{1/2} xi2||, h supported on the low modes"},
        {"triad_n_max", n_max},
        {"h_draws", h_draws},
        {"samples", h_draws * pairs_per_h},
        {"seed", opt.seed},
        {"sub_seeds", sub_seeds},
        {"drift_limit", opt.drift_limit},
        {"C_by_N", by_n_json(opt.sweep_N, C)},
        {"drift", drift},
        {"pass", pass}};
}

ordered_json run_suite(const SuiteOptions& opt) {
    ordered_json out;
    out["schema"] = "bogoclt-verify-1";
    out["options"] = ordered_json{{"seed", opt.seed},
                                  {"samples", opt.samples},
                                  {"sweep_N", opt.sweep_N},
                                  {"pair_n_max", opt.pair_n_max},
                                  {"char_fn_n_max", opt.char_fn_n_max},
                                  {"char_fn_N", opt.char_fn_N},
                                  {"weyl_n_max", opt.weyl_n_max},
                                  {"triad_n_max", opt.triad_n_max},
                                  {"displaced_n_max", opt.displaced_n_max},
                                  {"drift_limit", opt.drift_limit}};

    FitOptions fopt;
    fopt.sweep_N = opt.sweep_N;
    fopt.samples = opt.samples;
    fopt.seed = opt.seed;
    fopt.drift_limit = opt.drift_limit;

    ordered_json checks = ordered_json::array();
    {
        fock::FockBasis pair(pair_modes(), opt.pair_n_max, 40.0);
        checks.push_back(check_commutators(pair));
        TriadSetup triad = make_triad(opt.triad_n_max, 40.0);
        checks.push_back(check_commutators(triad.basis));
        Eigen::VectorXd ev(2);
        ev << 0.1, 0.1;
        checks.push_back(check_bogoliubov_unitary(pair, ev));
    }
    checks.push_back(check_weyl_relation(opt.weyl_n_max, sub_seed(opt.seed, "weyl-relation", 0)));
    checks.push_back(check_vacuum_char_fn(opt.char_fn_n_max, opt.char_fn_N));
    checks.push_back(check_excited_char_fn(opt.char_fn_n_max, opt.char_fn_N));
    {
        std::vector<int> caps{8, 12, 16, 20};
        while (!caps.empty() && caps.back() > opt.char_fn_n_max) caps.pop_back();
        if (caps.empty()) caps.push_back(opt.char_fn_n_max);
        checks.push_back(check_char_fn_convergence(caps, opt.char_fn_N));
    }
    checks.push_back(fit_quadratic_conjugation(opt.pair_n_max, 0.1, fopt));
    checks.push_back(fit_residual_norm(opt.pair_n_max, 0.1, fopt));
    checks.push_back(fit_displaced_number_growth(opt.displaced_n_max, 1.0, fopt));
    checks.push_back(fit_cubic_conjugation(opt.triad_n_max, fopt));
    checks.push_back(fit_cubic_field_commutator(opt.triad_n_max, fopt));

    int passed = 0, failed = 0;
    ordered_json failed_names = ordered_json::array();
    for (const auto& c : checks) {
        if (c.at("pass").get<bool>()) {
            ++passed;
        } else {
            ++failed;
            failed_names.push_back(c.at("name"));
        }
    }
    out["checks"] = checks;
    out["summary"] = ordered_json{{"total", passed + failed},
                                  {"passed", passed},
                                  {"failed", failed},
                                  {"failed_names", failed_names},
                                  {"pass", failed == 0}};
    return out;
}

}  // namespace bogoclt::verify
