#pragma once

// Brute-force sums over every spin configuration of small rings and open
// chains. These are the ground truth the closed forms are tested against.
//
// The main kernels split the configuration range into a fixed number of
// chunks, accumulate each chunk with compensated summation and merge the
// chunk totals in chunk order, so the result is identical for any thread
// count. Naive single-loop *_reference versions are kept for testing the
// kernels themselves.

#include "isingrg/transfer.hpp"

namespace isingrg {

inline constexpr int kMaxEnumerationSites = 22;

// <F log F>, <F> log <F> and their difference over the N-site periodic
// chain, F = f^2(s_i) g^2(s_j), by exact enumeration (h = 0).
TwoPointObservable finite_ring_observable(const Coupling& c, const ObservableFn& f,
                                          const ObservableFn& g, int i, int j, int n_sites);
TwoPointObservable finite_ring_observable_reference(const Coupling& c, const ObservableFn& f,
                                                    const ObservableFn& g, int i, int j,
                                                    int n_sites);

// Same observables on the open chain of interior sites 1..N with fixed
// boundary spins at sites 0 and N+1 (h = 0).
TwoPointObservable finite_open_chain_observable(const Coupling& c, const ObservableFn& f,
                                                const ObservableFn& g, int i, int j, int n_sites,
                                                int s0, int sN1);
TwoPointObservable finite_open_chain_observable_reference(const Coupling& c,
                                                          const ObservableFn& f,
                                                          const ObservableFn& g, int i, int j,
                                                          int n_sites, int s0, int sN1);

// Partition sum over the N-site ring, general field allowed.
double ring_partition_brute(const Coupling& c, int n_sites);
double ring_partition_brute_reference(const Coupling& c, int n_sites);

// Partition sum over the open chain with fixed boundary spins (h = 0).
double fixed_boundary_partition_brute(const Coupling& c, int n_sites, int s0, int sN1);

// <s_i s_j> on the N-site ring by enumeration (h = 0).
double ring_pair_correlation_brute(const Coupling& c, int i, int j, int n_sites);

}  // namespace isingrg
