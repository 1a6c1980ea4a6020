#pragma once

// Exact transfer-matrix results for the one-dimensional nearest-neighbor
// spin chain: spectra, partition functions, pair correlations, and the
// entropy-like two-point observables <F log F> - <F> log <F> with
// F = f^2(s_i) g^2(s_j), in the infinite-chain limit for periodic and for
// fixed boundaries.

#include <array>

#include "isingrg/numerics.hpp"

namespace isingrg {

// Dimensionless couplings (temperature folded in). gamma is the quadratic
// offset used by the dynamics module; it is a constant energy shift for
// unit spins and does not enter any equilibrium formula.
struct Coupling {
    double K = 0.0;
    double h = 0.0;
    double gamma = 0.0;
};

void validate(const Coupling& c);

struct TransferSpectrum {
    double lambda_plus;
    double lambda_minus;
    double angle_phi;  // diagonalizing rotation angle, -pi/4 at h = 0

    double ratio() const { return lambda_minus / lambda_plus; }
};

// Squared observable values at the two spin states: v_plus = f^2(+1),
// v_minus = f^2(-1).
struct ObservableFn {
    double v_plus = 1.0;
    double v_minus = 1.0;
};

void validate(const ObservableFn& f);

struct ObservableConstants {
    double a, b, c, d;       // x log x weights over the four (s_i, s_j) cells
    double A, B;             // a+b+c+d and a-b-c+d
    double c2_12, c4_12;     // g^2(1)+g^2(-1) and f^2(1)+f^2(-1)
    double delta_bar;        // (f^2(1)-f^2(-1)) (g^2(1)-g^2(-1))
    double delta_hat;        // (xlogx f^2(1) - xlogx f^2(-1)) (g^2(1)-g^2(-1))
    double delta_tilde;      // (xlogx g^2(1) - xlogx g^2(-1)) (f^2(1)-f^2(-1))
    double ta, tb, tc, td;   // plain product weights over the same cells
};

struct TwoPointObservable {
    double s_hat;    // <F log F>
    double s_tilde;  // <F> log <F>
    double s;        // s_hat - s_tilde
};

// Infinite-chain observables under the four fixed boundary pairs
// (+,+), (-,+), (+,-), (-,-) at sites 0 and N+1, plus the intermediate
// matrix elements they are assembled from.
struct BoundaryLimitSet {
    std::array<double, 4> s_hat;
    std::array<double, 4> s_tilde;
    double M11, M21;  // x-log-x insertion at site i, plain at site j
    double L11, L21;  // plain insertion at i, x-log-x at j
    double R11, R21;  // plain insertions at both sites
    double R_hat1, R_hat2;
};

TransferSpectrum transfer_spectrum(const Coupling& c);

// lambda_+^N + lambda_-^N over the N-site ring.
double partition_function(const Coupling& c, int n_sites);

// sin^2(2 phi) (lambda_-/lambda_+)^d; reduces to tanh(K)^d at h = 0.
double correlation_two_point(const Coupling& c, int distance);

ObservableConstants observable_constants(const ObservableFn& f, const ObservableFn& g);

// Closed form at h = 0, periodic boundary, site separation d >= 1.
TwoPointObservable two_point_observable(const Coupling& c, const ObservableFn& f,
                                        const ObservableFn& g, int distance);

// log lambda_+ (h = 0); analytically independent of the boundary pair.
double free_energy_density(const Coupling& c);

// <s0| P^{N+1} |sN1> = (lambda_+^{N+1} +/- lambda_-^{N+1})/2, plus sign for
// equal boundary spins.
double fixed_boundary_partition(const Coupling& c, int n_sites, int s0, int sN1);

// Infinite-chain limits of the fixed-boundary observables at absolute sites
// 1 <= i < j with j - i >= 2 (one transfer block must separate the two
// operator insertions).
BoundaryLimitSet boundary_limit_observables(const Coupling& c, const ObservableFn& f,
                                            const ObservableFn& g, int i, int j);

// Finite-ring pair correlation <s_x s_{x+d}> on N sites at h = 0:
// (rho^d + rho^{N-d}) / (1 + rho^N) with rho = lambda_-/lambda_+.
double ring_pair_correlation(const Coupling& c, int distance, int n_sites);

}  // namespace isingrg
