#pragma once

// The coarse-graining coupling map K -> (1/2) log cosh K, iterated
// trajectories, and the remainder sequences of the correlation-function and
// observable scaling equations together with decay-rate estimation.

#include <vector>

#include "isingrg/transfer.hpp"

namespace isingrg {

struct RgTrajectory {
    std::vector<double> k_values;  // K_0, K_1, ..., K_n
    int dilatation_base = 2;
};

enum class RemainderKind { correlation, observable_hat, observable_tilde, observable };

// values[m] is the gap at iteration m between the coarse-grained quantity at
// the original separation and the original quantity at the dilated
// separation 2^m |x2 - x1|.
struct RemainderSeries {
    std::vector<double> values;
    RemainderKind kind = RemainderKind::correlation;
    int x1 = 0;
    int x2 = 1;
    double scaling_factor_z = 1.0;
};

// One coarse-graining step: K' = (1/2) log cosh K, the new field staying 0.
// Satisfies 0 <= K' <= K/2.
double rgt_step(double k);

// Exact single-decimation map for comparison: marginalizing the middle spin
// of a three-site open segment yields K' = (1/2) log cosh(2K). This is kept
// separate from rgt_step and never substituted for it.
double exact_decimation_step(double k);

RgTrajectory rg_trajectory(double k0, int n);

// Pair-correlation remainders: values[m] = tanh^d(K_m) - z^{-1} tanh^{2^m d}(K_0)
// with d = |x2 - x1|; values[0] = 0 identically.
RemainderSeries correlation_remainder(double k0, int x1, int x2, int n, double z = 1.0);

struct ObservableRemainders {
    RemainderSeries hat;
    RemainderSeries tilde;
    RemainderSeries full;  // hat - tilde, entry by entry
};

ObservableRemainders observable_remainders(double k0, const ObservableFn& f,
                                           const ObservableFn& g, int x1, int x2, int n,
                                           double z = 1.0);

// Least-squares slope of log|values[m]| against m over entries past
// from_index with |value| > 1e-300. Needs at least three usable points.
double decay_rate_fit(const RemainderSeries& series, int from_index);

}  // namespace isingrg
