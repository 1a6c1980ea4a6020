#include "isingrg/dynamics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isingrg/errors.hpp"

namespace isingrg {

void validate(const DynamicsParams& p) {
    if (!std::isfinite(p.gamma)) throw std::domain_error("DynamicsParams: gamma must be finite");
    if (!(p.noise_scale > 0.0) || !std::isfinite(p.noise_scale))
        throw std::domain_error("DynamicsParams: noise_scale must be positive");
}

double site_update_probability(const DynamicsParams& p, double K, int left, int center, int right,
                               int next) {
    validate(p);
    if (!std::isfinite(K)) throw std::domain_error("site_update_probability: non-finite coupling");
    if (left * left != 1 || center * center != 1 || right * right != 1 || next * next != 1)
        throw std::domain_error("site_update_probability: spins must be +1 or -1");
    const double drift = K * (left + right) + (1.0 - p.gamma) * center;
    return gauss_cdf(next * drift / p.noise_scale);
}

ThetaMatrix build_theta(const DynamicsParams& p, double K, int m) {
    validate(p);
    if (!std::isfinite(K)) throw std::domain_error("build_theta: non-finite coupling");
    if (m < 1 || m > 4) throw resource_error("build_theta: m must be in [1, 4]");

    ThetaMatrix theta;
    theta.m = m;
    theta.coupling = K;
    theta.params = p;
    const int rows = theta.rows(), cols = theta.cols();
    theta.entries.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    for (int col = 0; col < cols; ++col) {
        // Drift at each observed site from its window triple.
        double drift[4];
        for (int k = 0; k < m; ++k) {
            const int left = spin_of_bit(static_cast<std::uint64_t>(col), 3 * k);
            const int center = spin_of_bit(static_cast<std::uint64_t>(col), 3 * k + 1);
            const int right = spin_of_bit(static_cast<std::uint64_t>(col), 3 * k + 2);
            drift[k] = (K * (left + right) + (1.0 - p.gamma) * center) / p.noise_scale;
        }
        for (int row = 0; row < rows; ++row) {
            double prob = 1.0;
            for (int k = 0; k < m; ++k)
                prob *= gauss_cdf(spin_of_bit(static_cast<std::uint64_t>(row), k) * drift[k]);
            theta.entries[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
                          static_cast<std::size_t>(col)] = prob;
        }
    }
    return theta;
}

TransferDeterminedMatrix build_transfer_determined(const DynamicsParams& p, int m) {
    validate(p);
    if (m < 1 || m > 8) throw resource_error("build_transfer_determined: m must be in [1, 8]");

    const double x = (1.0 - p.gamma) / p.noise_scale;
    const double same = gauss_cdf(x);
    const double diff = gauss_cdf(-x);
    // Entry depends only on how many of the m sign pairs disagree.
    std::vector<double> by_mismatch(static_cast<std::size_t>(m) + 1);
    for (int hd = 0; hd <= m; ++hd) {
        double v = 1.0;
        for (int k = 0; k < m - hd; ++k) v *= same;
        for (int k = 0; k < hd; ++k) v *= diff;
        by_mismatch[static_cast<std::size_t>(hd)] = v;
    }

    TransferDeterminedMatrix mat;
    mat.m = m;
    mat.params = p;
    const int dim = mat.dim();
    mat.entries.resize(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
    for (int row = 0; row < dim; ++row)
        for (int col = 0; col < dim; ++col)
            mat.entries[static_cast<std::size_t>(row) * static_cast<std::size_t>(dim) +
                        static_cast<std::size_t>(col)] =
                by_mismatch[static_cast<std::size_t>(std::popcount(
                    static_cast<unsigned>(row ^ col)))];
    return mat;
}

std::vector<double> spectrum_check(const TransferDeterminedMatrix& mat) {
    const int dim = mat.dim();
    Eigen::MatrixXd em(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) em(r, c) = mat.at(r, c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(em, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw numeric_error("spectrum_check: eigensolve failed");
    std::vector<double> eig(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    if (std::abs(eig.front() - 1.0) > 1e-10)
        throw numeric_error("spectrum_check: top eigenvalue must be 1");
    if (dim > 1 && !(eig[1] < 1.0))
        throw numeric_error("spectrum_check: top eigenvalue must be simple");
    return eig;
}

CoefficientVector coefficient_iteration(const CoefficientVector& v,
                                        const TransferDeterminedMatrix& mat, int t) {
    if (t < 0) throw std::domain_error("coefficient_iteration: negative step count");
    const int dim = mat.dim();
    if (v.m != mat.m || v.coeffs.size() != static_cast<std::size_t>(dim))
        throw std::domain_error("coefficient_iteration: dimension mismatch");
    CoefficientVector out = v;
    std::vector<double> next(static_cast<std::size_t>(dim));
    for (int step = 0; step < t; ++step) {
        for (int c = 0; c < dim; ++c) {
            double acc = 0.0;
            for (int r = 0; r < dim; ++r) acc += out.coeffs[static_cast<std::size_t>(r)] * mat.at(r, c);
            next[static_cast<std::size_t>(c)] = acc;
        }
        out.coeffs.swap(next);
    }
    return out;
}

void validate(const WindowDistribution& w) {
    if (w.m < 1) throw std::domain_error("WindowDistribution: m must be >= 1");
    if (w.probs.size() != (std::size_t{1} << (3 * w.m)))
        throw std::domain_error("WindowDistribution: need 2^{3m} entries");
    double sum = 0.0;
    for (double p : w.probs) {
        if (!(p >= -1e-15)) throw std::domain_error("WindowDistribution: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::domain_error("WindowDistribution: probabilities must sum to 1");
}

NewSpinDistribution new_spin_distribution(const ThetaMatrix& theta, const WindowDistribution& w) {
    validate(w);
    if (theta.m != w.m) throw std::domain_error("new_spin_distribution: dimension mismatch");
    NewSpinDistribution out;
    out.m = theta.m;
    out.probs.assign(static_cast<std::size_t>(theta.rows()), 0.0);
    for (int r = 0; r < theta.rows(); ++r) {
        double acc = 0.0;
        for (int c = 0; c < theta.cols(); ++c) acc += theta.at(r, c) * w.probs[static_cast<std::size_t>(c)];
        out.probs[static_cast<std::size_t>(r)] = acc;
    }
    return out;
}

double observable_from_distribution(const CoefficientVector& v, const NewSpinDistribution& dist) {
    if (v.m != dist.m || v.coeffs.size() != dist.probs.size())
        throw std::domain_error("observable_from_distribution: dimension mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < v.coeffs.size(); ++k) acc += v.coeffs[k] * dist.probs[k];
    return acc;
}

ThetaErrorBound theta_error_bound(const DynamicsParams& p, double K, int m) {
    validate(p);
    if (!std::isfinite(K) || K < 0.0)
        throw std::domain_error("theta_error_bound: coupling must be finite and nonnegative");
    const ThetaMatrix at_k = build_theta(p, K, m);
    const ThetaMatrix at_zero = build_theta(p, 0.0, m);
    double max_abs = 0.0, frob_sq = 0.0;
    for (std::size_t e = 0; e < at_k.entries.size(); ++e) {
        const double diff = at_k.entries[e] - at_zero.entries[e];
        max_abs = std::max(max_abs, std::abs(diff));
        frob_sq += diff * diff;
    }
    const double bound = 2.0 * m * K / (p.noise_scale * std::sqrt(2.0 * std::numbers::pi));
    if (max_abs > bound + 1e-12)
        throw numeric_error("theta_error_bound: Lipschitz bound violated");
    return {max_abs, std::sqrt(frob_sq), bound};
}

ObservableLimits fixed_point_observable_limit(const ObservableFn& f, const ObservableFn& g) {
    const ObservableConstants k = observable_constants(f, g);
    const double q = 0.25 * k.c4_12 * k.c2_12;
    if (q == 0.0) throw std::domain_error("fixed_point_observable_limit: zero total mass");
    const double s_hat = 0.25 * k.A;
    const double s_tilde = xlogx(q);
    return {s_hat, s_tilde, s_hat - s_tilde};
}

double m_point_observable(std::span<const double> f_table, const NewSpinDistribution& dist) {
    if (f_table.size() != dist.probs.size())
        throw std::domain_error("m_point_observable: table length mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < f_table.size(); ++k) {
        if (!(f_table[k] >= 0.0)) throw std::domain_error("m_point_observable: negative table entry");
        acc += f_table[k] * dist.probs[k];
    }
    return acc;
}

double m_point_limit(std::span<const double> f_table) {
    if (f_table.empty() || (f_table.size() & (f_table.size() - 1)) != 0)
        throw std::domain_error("m_point_limit: table length must be a power of two");
    double acc = 0.0;
    for (double v : f_table) {
        if (!(v >= 0.0)) throw std::domain_error("m_point_limit: negative table entry");
        acc += v;
    }
    return acc / static_cast<double>(f_table.size());
}

std::vector<double> two_site_table(const ObservableFn& f, const ObservableFn& g) {
    validate(f);
    validate(g);
    return {f.v_plus * g.v_plus, f.v_minus * g.v_plus, f.v_plus * g.v_minus,
            f.v_minus * g.v_minus};
}

CoefficientVector hat_coefficients(const ObservableConstants& k) {
    return {2, {k.a, k.b, k.c, k.d}};
}

CoefficientVector tilde_coefficients(const ObservableConstants& k) {
    return {2, {k.ta, k.tb, k.tc, k.td}};
}

}  // namespace isingrg
