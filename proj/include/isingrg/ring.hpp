#pragma once

// Exact probability-distribution evolution of the synchronous dynamics on a
// small periodic ring: one full synchronous kernel application without ever
// materializing the 2^N x 2^N transition matrix, plus marginals, window
// extraction and scheduled evolution of the observables.

#include <span>

#include "isingrg/dynamics.hpp"
#include "isingrg/schedule.hpp"

namespace isingrg {

inline constexpr int kMaxExactRingSites = 14;

struct RingDistribution {
    int n_sites = 0;
    std::vector<double> probs;  // 2^n entries, binary sort (site 1 least significant)
};

void validate(const RingDistribution& dist);

RingDistribution uniform_ring_distribution(int n_sites);
RingDistribution point_mass_all_plus(int n_sites);

// Nearest-neighbor Gibbs measure on the ring, prob(s) ~ exp(K sum s_i s_{i+1}).
RingDistribution gibbs_initial_distribution(double K, int n_sites);

// One synchronous update of the whole distribution. The kernel factorizes
// over sites, so the update runs as a site-by-site sweep that multiplies in
// one factor at a time and sums out each old spin as soon as every factor
// referencing it has been applied; the working table never exceeds 2^{N+3}.
RingDistribution exact_ring_step(const DynamicsParams& p, double K, const RingDistribution& dist);

// Direct dense accumulation over all (old, new) configuration pairs. Kept
// as the reference for testing the sweep; quadratic in the state count.
RingDistribution exact_ring_step_reference(const DynamicsParams& p, double K,
                                           const RingDistribution& dist);

// Marginal law of the spins at the given sites (1-based), binary sort.
std::vector<double> site_marginal(const RingDistribution& dist, std::span<const int> sites);

// Joint law of (left, center, right) triples around each observed site,
// in the window ordering. Requires pairwise cyclic distance >= 3.
WindowDistribution window_from_ring(const RingDistribution& dist, std::span<const int> sites);

struct EvolveRow {
    int t;
    double coupling;  // coupling used for the step into time t
    double s_hat;     // <F log F> over the observed sites
    double s_tilde;   // <F> log <F>
    double s;
    double mean;      // <F>
};

struct EvolveResult {
    std::vector<EvolveRow> rows;
    double limit_s_hat;
    double limit_s_tilde;
    double limit_s;
    double limit_mean;
};

// Apply the scheduled kernel `steps` times and evaluate the table
// observables on the observed sites after every step.
EvolveResult exact_ring_evolve(const DynamicsParams& p, const Schedule& schedule,
                               RingDistribution init, int steps, std::span<const int> sites,
                               std::span<const double> f_table);

}  // namespace isingrg
