#include "isingrg/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isingrg/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace isingrg {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica) {
    return splitmix64(seed ^ splitmix64(replica + 1));
}

RingState gibbs_sample(double K, int n_sites, std::mt19937_64& eng) {
    if (!std::isfinite(K) || K < 0.0)
        throw std::domain_error("gibbs_sample: coupling must be finite and nonnegative");
    if (n_sites < 3) throw std::domain_error("gibbs_sample: need at least 3 sites");

    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double rho = std::tanh(K);
    std::vector<double> rho_pow(static_cast<std::size_t>(n_sites) + 1);
    rho_pow[0] = 1.0;
    for (int k = 1; k <= n_sites; ++k) rho_pow[static_cast<std::size_t>(k)] = rho_pow[static_cast<std::size_t>(k - 1)] * rho;

    RingState s(static_cast<std::size_t>(n_sites));
    s[0] = u01(eng) < 0.5 ? +1 : -1;
    for (int k = 1; k < n_sites; ++k) {
        // Weight of sigma_k: bond to the sampled neighbor times the summed
        // weight of the remaining n-k bonds closing the loop at site 1.
        const int prev = s[static_cast<std::size_t>(k - 1)];
        const double closing = rho_pow[static_cast<std::size_t>(n_sites - k)];
        const double w_plus = std::exp(K * prev) * (1.0 + s[0] * closing);
        const double w_minus = std::exp(-K * prev) * (1.0 - s[0] * closing);
        s[static_cast<std::size_t>(k)] = u01(eng) * (w_plus + w_minus) < w_plus ? +1 : -1;
    }
    return s;
}

RingState gibbs_sample(double K, int n_sites, std::uint64_t seed) {
    std::mt19937_64 eng(splitmix64(seed));
    return gibbs_sample(K, n_sites, eng);
}

void mc_step(const DynamicsParams& p, double K, const RingState& in, RingState& out,
             std::mt19937_64& eng, std::normal_distribution<double>& noise) {
    const int n = static_cast<int>(in.size());
    if (n < 3) throw std::domain_error("mc_step: need at least 3 sites");
    out.resize(in.size());
    const double center_coeff = 1.0 - p.gamma;
    for (int i = 0; i < n; ++i) {
        const int left = in[static_cast<std::size_t>((i + n - 1) % n)];
        const int right = in[static_cast<std::size_t>((i + 1) % n)];
        const double drift = K * (left + right) + center_coeff * in[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(i)] =
            drift + p.noise_scale * noise(eng) >= 0.0 ? +1 : -1;
    }
}

RingState mc_step(const DynamicsParams& p, double K, const RingState& in, std::mt19937_64& eng) {
    validate(p);
    std::normal_distribution<double> noise;
    RingState out;
    mc_step(p, K, in, out, eng, noise);
    return out;
}

namespace {

std::vector<int> checkpoint_times(int steps, int stride) {
    if (stride <= 0) stride = std::max(1, steps / 10);
    std::vector<int> times;
    for (int t = stride; t < steps; t += stride) times.push_back(t);
    times.push_back(steps);
    return times;
}

// Sample mean and standard error of table[w] over replica word counts.
McEstimate table_estimate(const std::vector<std::uint64_t>& counts,
                          const std::vector<double>& table, double n) {
    double mean = 0.0, sq = 0.0;
    for (std::size_t w = 0; w < counts.size(); ++w) {
        const double c = static_cast<double>(counts[w]);
        mean += c * table[w];
        sq += c * table[w] * table[w];
    }
    mean /= n;
    sq /= n;
    const double var = std::max(0.0, (sq - mean * mean) * n / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

}  // namespace

McResult mc_simulate(const DynamicsParams& p, const Schedule& schedule, const McConfig& cfg) {
    validate(p);
    if (cfg.n_sites < 3) throw std::domain_error("mc_simulate: need at least 3 sites");
    if (cfg.steps < 1) throw std::domain_error("mc_simulate: need at least one step");
    if (cfg.replicas < 1) throw std::domain_error("mc_simulate: need at least one replica");
    if (cfg.init == McInit::gibbs && (!std::isfinite(cfg.init_coupling) || cfg.init_coupling < 0))
        throw std::domain_error("mc_simulate: invalid initial coupling");
    if (cfg.sites.empty() || cfg.sites.size() > 16)
        throw std::domain_error("mc_simulate: need between 1 and 16 observed sites");
    for (std::size_t a = 0; a < cfg.sites.size(); ++a) {
        if (cfg.sites[a] < 1 || cfg.sites[a] > cfg.n_sites)
            throw std::domain_error("mc_simulate: observed site out of range");
        for (std::size_t b = a + 1; b < cfg.sites.size(); ++b)
            if (cfg.sites[a] == cfg.sites[b]) throw std::domain_error("mc_simulate: duplicate site");
    }
    const int m = static_cast<int>(cfg.sites.size());
    const std::size_t n_words = std::size_t{1} << m;
    if (cfg.f_table.size() != n_words)
        throw std::domain_error("mc_simulate: table length mismatch");
    for (double v : cfg.f_table)
        if (!(v >= 0.0)) throw std::domain_error("mc_simulate: negative table entry");
    const double work = static_cast<double>(cfg.n_sites) * static_cast<double>(cfg.steps) *
                        static_cast<double>(cfg.replicas);
    if (work > cfg.budget)
        throw resource_error("mc_simulate: n_sites*steps*replicas exceeds the budget");

    const std::vector<int> times = checkpoint_times(cfg.steps, cfg.checkpoint_stride);
    const std::size_t n_checkpoints = times.size();

    std::vector<double> couplings(static_cast<std::size_t>(cfg.steps));
    for (int t = 0; t < cfg.steps; ++t) couplings[static_cast<std::size_t>(t)] = schedule.coupling_at(t);

    // One word count table per checkpoint; integer merges keep the result
    // identical for any thread count.
    std::vector<std::vector<std::uint64_t>> counts(n_checkpoints,
                                                   std::vector<std::uint64_t>(n_words, 0));

#pragma omp parallel
    {
        std::vector<std::vector<std::uint64_t>> local(n_checkpoints,
                                                      std::vector<std::uint64_t>(n_words, 0));
        RingState state, next;
        std::normal_distribution<double> noise;
#pragma omp for schedule(static)
        for (std::int64_t r = 0; r < cfg.replicas; ++r) {
            std::mt19937_64 eng(replica_seed(cfg.seed, static_cast<std::uint64_t>(r)));
            noise.reset();
            if (cfg.init == McInit::gibbs) {
                state = gibbs_sample(cfg.init_coupling, cfg.n_sites, eng);
            } else {
                state.assign(static_cast<std::size_t>(cfg.n_sites), +1);
            }
            std::size_t next_cp = 0;
            for (int t = 1; t <= cfg.steps; ++t) {
                mc_step(p, couplings[static_cast<std::size_t>(t - 1)], state, next, eng, noise);
                state.swap(next);
                if (next_cp < n_checkpoints && times[next_cp] == t) {
                    std::uint64_t word = 0;
                    for (int k = 0; k < m; ++k)
                        word |= bit_of_spin(state[static_cast<std::size_t>(cfg.sites[static_cast<std::size_t>(k)] - 1)])
                                << k;
                    ++local[next_cp][word];
                    ++next_cp;
                }
            }
        }
#pragma omp critical
        for (std::size_t cp = 0; cp < n_checkpoints; ++cp)
            for (std::size_t w = 0; w < n_words; ++w) counts[cp][w] += local[cp][w];
    }

    std::vector<double> flog(n_words);
    for (std::size_t w = 0; w < n_words; ++w) flog[w] = xlogx(cfg.f_table[w]);

    McResult result;
    result.limit_mean = m_point_limit(cfg.f_table);
    result.limit_s_hat = 0.0;
    for (double v : flog) result.limit_s_hat += v;
    result.limit_s_hat /= static_cast<double>(n_words);
    result.limit_s_tilde = xlogx(result.limit_mean);
    result.limit_s = result.limit_s_hat - result.limit_s_tilde;

    const double n = static_cast<double>(cfg.replicas);
    result.checkpoints.reserve(n_checkpoints);
    for (std::size_t cp = 0; cp < n_checkpoints; ++cp) {
        McCheckpoint out;
        out.t = times[cp];
        out.coupling = couplings[static_cast<std::size_t>(times[cp] - 1)];
        out.counts = counts[cp];

        out.s_hat = table_estimate(counts[cp], flog, n);
        out.mean = table_estimate(counts[cp], cfg.f_table, n);

        // <F> log <F> and the difference, with delta-method errors; the
        // cross term uses the replica covariance of (log-table, table).
        const double q = out.mean.value;
        double cross = 0.0;
        for (std::size_t w = 0; w < n_words; ++w)
            cross += static_cast<double>(counts[cp][w]) * flog[w] * cfg.f_table[w];
        cross /= n;
        const double cov_aq =
            (cross - out.s_hat.value * q) * n / (n - 1.0);
        if (q > 0.0) {
            const double dq = 1.0 + std::log(q);  // d(q log q)/dq
            out.s_tilde.value = xlogx(q);
            out.s_tilde.std_error = std::abs(dq) * out.mean.std_error;
            const double var_a = out.s_hat.std_error * out.s_hat.std_error * n;
            const double var_q = out.mean.std_error * out.mean.std_error * n;
            const double var_s = std::max(0.0, var_a + dq * dq * var_q - 2.0 * dq * cov_aq);
            out.s.value = out.s_hat.value - out.s_tilde.value;
            out.s.std_error = std::sqrt(var_s / n);
        } else {
            out.s_tilde = {0.0, 0.0};
            out.s = out.s_hat;
        }

        if (m >= 2) {
            // Spin covariance of the first two observed sites; spins are the
            // low two word bits, and the product second moment is exactly 1.
            double m1 = 0.0, m2 = 0.0, m12 = 0.0;
            for (std::size_t w = 0; w < n_words; ++w) {
                const double c = static_cast<double>(counts[cp][w]);
                const double phi1 = spin_of_bit(w, 0);
                const double phi2 = spin_of_bit(w, 1);
                m1 += c * phi1;
                m2 += c * phi2;
                m12 += c * phi1 * phi2;
            }
            m1 /= n;
            m2 /= n;
            m12 /= n;
            const double bias = n / (n - 1.0);
            const double var_1 = (1.0 - m1 * m1) * bias;
            const double var_2 = (1.0 - m2 * m2) * bias;
            const double var_12 = (1.0 - m12 * m12) * bias;
            const double cov_12_1 = (m2 - m12 * m1) * bias;  // E[prod phi1] = E[phi2]
            const double cov_12_2 = (m1 - m12 * m2) * bias;
            const double cov_1_2 = (m12 - m1 * m2) * bias;
            const double var_conn =
                std::max(0.0, var_12 + m2 * m2 * var_1 + m1 * m1 * var_2 -
                                  2.0 * m2 * cov_12_1 - 2.0 * m1 * cov_12_2 +
                                  2.0 * m1 * m2 * cov_1_2);
            out.connected.value = m12 - m1 * m2;
            out.connected.std_error = std::sqrt(var_conn / n);
        } else {
            out.connected = {0.0, 0.0};
        }
        result.checkpoints.push_back(std::move(out));
    }
    return result;
}

}  // namespace isingrg
