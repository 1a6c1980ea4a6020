#pragma once

// Trajectory-level simulation of the synchronous dynamics: exact Gibbs
// sampling of the initial ring state, the synchronous threshold update, and
// replica ensembles with deterministic seeding. Replicas are independent,
// so the ensemble loop parallelizes; per-checkpoint word counts are merged
// as integers, which makes every estimate independent of the thread count.

#include <cstdint>
#include <random>
#include <vector>

#include "isingrg/dynamics.hpp"
#include "isingrg/schedule.hpp"

namespace isingrg {

using RingState = std::vector<std::int8_t>;  // +1 / -1 per site

inline constexpr double kDefaultMcBudget = 1e10;  // n_sites * steps * replicas

// Mixing function used to derive one engine seed per replica.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica);

// Exact sample from the nearest-neighbor Gibbs measure on the ring via the
// marginal chain: site 1 is uniform by symmetry, then each conditional
// combines the bond to the previous site with the closed-form weight of the
// remaining arc back to site 1.
RingState gibbs_sample(double K, int n_sites, std::mt19937_64& eng);
RingState gibbs_sample(double K, int n_sites, std::uint64_t seed);

// One synchronous update; every site draws its own noise, threshold ties
// resolve to +1.
void mc_step(const DynamicsParams& p, double K, const RingState& in, RingState& out,
             std::mt19937_64& eng, std::normal_distribution<double>& noise);
RingState mc_step(const DynamicsParams& p, double K, const RingState& in, std::mt19937_64& eng);

enum class McInit { gibbs, all_plus };

struct McConfig {
    int n_sites = 0;
    int steps = 0;
    std::int64_t replicas = 0;
    std::uint64_t seed = 0;
    std::vector<int> sites;       // observed sites, 1-based
    std::vector<double> f_table;  // 2^m nonnegative values
    McInit init = McInit::gibbs;
    double init_coupling = 1.0;
    int checkpoint_stride = 0;  // 0 means steps/10, at least 1
    double budget = kDefaultMcBudget;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct McCheckpoint {
    int t;
    double coupling;      // coupling used for the step into time t
    McEstimate s_hat;     // <F log F>
    McEstimate s_tilde;   // <F> log <F> (delta-method error)
    McEstimate s;         // difference (delta-method error)
    McEstimate mean;      // <F>
    McEstimate connected; // spin covariance of the first two observed sites
    std::vector<std::uint64_t> counts;  // occupancy of the 2^m observed words
};

struct McResult {
    std::vector<McCheckpoint> checkpoints;
    double limit_s_hat;
    double limit_s_tilde;
    double limit_s;
    double limit_mean;
};

McResult mc_simulate(const DynamicsParams& p, const Schedule& schedule, const McConfig& cfg);

}  // namespace isingrg
