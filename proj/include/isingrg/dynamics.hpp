#pragma once

// Synchronous sign-threshold spin dynamics, window form: the transition
// matrix from a block of observed sites with their neighbors to the new
// spins at the observed sites, the symmetric matrix that governs the K = 0
// coefficient iteration, and the fixed-point values the observables
// converge to.

#include <span>
#include <vector>

#include "isingrg/transfer.hpp"

namespace isingrg {

struct DynamicsParams {
    double gamma = 0.0;        // drift coefficient on the center spin is 1 - gamma
    double noise_scale = 1.0;  // standard deviation of the site noise
};

void validate(const DynamicsParams& p);

// P(next | left, center, right) for one site update; the threshold tie
// resolves to +1, so the two outcomes sum to 1 by the reflection identity.
double site_update_probability(const DynamicsParams& p, double K, int left, int center, int right,
                               int next);

// 2^m x 2^{3m} transition matrix. Column c enumerates the window word
// (left_1, center_1, right_1, ..., left_m, center_m, right_m) in binary
// sort; row r enumerates the new spins at the m observed sites. Every
// column sums to 1.
struct ThetaMatrix {
    int m = 0;
    double coupling = 0.0;
    DynamicsParams params;
    std::vector<double> entries;  // row-major

    int rows() const { return 1 << m; }
    int cols() const { return 1 << (3 * m); }
    double at(int row, int col) const {
        return entries[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols()) +
                       static_cast<std::size_t>(col)];
    }
};

ThetaMatrix build_theta(const DynamicsParams& p, double K, int m);

// Symmetric doubly stochastic 2^m x 2^m matrix with entries
// prod_k Phi(x r_k c_k), x = (1 - gamma)/noise_scale; its powers drive the
// K = 0 coefficient iteration.
struct TransferDeterminedMatrix {
    int m = 0;
    DynamicsParams params;
    std::vector<double> entries;  // row-major

    int dim() const { return 1 << m; }
    double at(int row, int col) const {
        return entries[static_cast<std::size_t>(row) * static_cast<std::size_t>(dim()) +
                       static_cast<std::size_t>(col)];
    }
};

TransferDeterminedMatrix build_transfer_determined(const DynamicsParams& p, int m);

// Eigenvalues sorted descending. Verifies the stochastic structure: the top
// eigenvalue is 1 to 1e-10 and simple.
std::vector<double> spectrum_check(const TransferDeterminedMatrix& mat);

struct CoefficientVector {
    int m = 0;
    std::vector<double> coeffs;  // 2^m entries
};

// Row vector times the matrix, t times.
CoefficientVector coefficient_iteration(const CoefficientVector& v,
                                        const TransferDeterminedMatrix& mat, int t);

struct WindowDistribution {
    int m = 0;
    std::vector<double> probs;  // 2^{3m} entries, binary sort
};

struct NewSpinDistribution {
    int m = 0;
    std::vector<double> probs;  // 2^m entries, binary sort
};

void validate(const WindowDistribution& w);

NewSpinDistribution new_spin_distribution(const ThetaMatrix& theta, const WindowDistribution& w);

double observable_from_distribution(const CoefficientVector& v, const NewSpinDistribution& dist);

// Entrywise gap between the transition matrices at coupling K and at 0,
// with the Lipschitz bound 2 m K / (noise_scale sqrt(2 pi)) it must obey.
struct ThetaErrorBound {
    double max_abs;
    double frobenius;
    double lipschitz_bound;
};

ThetaErrorBound theta_error_bound(const DynamicsParams& p, double K, int m);

// Values the two-point observables converge to as the coupling schedule
// decays to the fixed point K = 0.
struct ObservableLimits {
    double s_hat;
    double s_tilde;
    double s;
};

ObservableLimits fixed_point_observable_limit(const ObservableFn& f, const ObservableFn& g);

// Expectation of an m-site table against a new-spin distribution.
double m_point_observable(std::span<const double> f_table, const NewSpinDistribution& dist);

// Fixed-point value of the same expectation: the plain table mean.
double m_point_limit(std::span<const double> f_table);

// Two-site product table {f+g+, f-g+, f+g-, f-g-} in binary sort.
std::vector<double> two_site_table(const ObservableFn& f, const ObservableFn& g);

// Coefficient vectors over the four two-site cells.
CoefficientVector hat_coefficients(const ObservableConstants& k);    // (a, b, c, d)
CoefficientVector tilde_coefficients(const ObservableConstants& k);  // (ta, tb, tc, td)

}  // namespace isingrg
