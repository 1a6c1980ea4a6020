#include "isingrg/ring.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <cstdint>
#include <stdexcept>

#include "isingrg/errors.hpp"

namespace isingrg {

namespace {

using u64 = std::uint64_t;

void check_site_list(std::span<const int> sites, int n_sites) {
    if (sites.empty()) throw std::domain_error("ring: empty site list");
    for (std::size_t a = 0; a < sites.size(); ++a) {
        if (sites[a] < 1 || sites[a] > n_sites)
            throw std::domain_error("ring: site index out of range");
        for (std::size_t b = a + 1; b < sites.size(); ++b)
            if (sites[a] == sites[b]) throw std::domain_error("ring: duplicate site");
    }
}

int cyclic_distance(int a, int b, int n) {
    const int d = std::abs(a - b);
    return std::min(d, n - d);
}

// Per-site factor table: probability of the next spin given the old
// (left, center, right) triple, indexed by the triple's bit pattern.
struct FactorTable {
    double p[8][2];
};

FactorTable make_factors(const DynamicsParams& params, double K) {
    FactorTable f;
    for (int t = 0; t < 8; ++t) {
        const int left = spin_of_bit(static_cast<u64>(t), 0);
        const int center = spin_of_bit(static_cast<u64>(t), 1);
        const int right = spin_of_bit(static_cast<u64>(t), 2);
        const double drift =
            (K * (left + right) + (1.0 - params.gamma) * center) / params.noise_scale;
        f.p[t][0] = gauss_cdf(drift);
        f.p[t][1] = gauss_cdf(-drift);
    }
    return f;
}

inline int triple(int l, int c, int r) { return l | c << 1 | r << 2; }

}  // namespace

void validate(const RingDistribution& dist) {
    if (dist.n_sites < 3) throw std::domain_error("RingDistribution: need at least 3 sites");
    if (dist.n_sites > kMaxExactRingSites)
        throw resource_error("RingDistribution: exact evolution capped at 14 sites");
    if (dist.probs.size() != (std::size_t{1} << dist.n_sites))
        throw std::domain_error("RingDistribution: need 2^n entries");
    double sum = 0.0;
    for (double p : dist.probs) {
        if (!(p >= -1e-15)) throw std::domain_error("RingDistribution: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::domain_error("RingDistribution: probabilities must sum to 1");
}

RingDistribution uniform_ring_distribution(int n_sites) {
    if (n_sites < 3) throw std::domain_error("uniform_ring_distribution: need at least 3 sites");
    if (n_sites > kMaxExactRingSites) throw resource_error("uniform_ring_distribution: too large");
    RingDistribution d;
    d.n_sites = n_sites;
    d.probs.assign(std::size_t{1} << n_sites, 1.0 / std::ldexp(1.0, n_sites));
    return d;
}

RingDistribution point_mass_all_plus(int n_sites) {
    if (n_sites < 3) throw std::domain_error("point_mass_all_plus: need at least 3 sites");
    if (n_sites > kMaxExactRingSites) throw resource_error("point_mass_all_plus: too large");
    RingDistribution d;
    d.n_sites = n_sites;
    d.probs.assign(std::size_t{1} << n_sites, 0.0);
    d.probs[0] = 1.0;
    return d;
}

RingDistribution gibbs_initial_distribution(double K, int n_sites) {
    if (!std::isfinite(K) || K < 0.0)
        throw std::domain_error("gibbs_initial_distribution: coupling must be finite and nonnegative");
    if (n_sites < 3) throw std::domain_error("gibbs_initial_distribution: need at least 3 sites");
    if (n_sites > kMaxExactRingSites)
        throw resource_error("gibbs_initial_distribution: exact distribution capped at 14 sites");

    const int n = n_sites;
    const u64 total = u64{1} << n;
    const u64 mask = total - 1;
    std::vector<double> w(static_cast<std::size_t>(n) + 1);
    for (int u = 0; u <= n; ++u) w[static_cast<std::size_t>(u)] = std::exp(K * (n - 2 * u));

    RingDistribution d;
    d.n_sites = n;
    d.probs.resize(total);
    KahanSum z;
    for (u64 s = 0; s < total; ++s) {
        const u64 rot = ((s << 1) | (s >> (n - 1))) & mask;
        const double weight = w[static_cast<std::size_t>(std::popcount(rot ^ s))];
        d.probs[s] = weight;
        z.add(weight);
    }
    const double inv_z = 1.0 / z.value();
    for (double& p : d.probs) p *= inv_z;
    return d;
}

RingDistribution exact_ring_step(const DynamicsParams& params, double K,
                                 const RingDistribution& dist) {
    validate(params);
    validate(dist);
    if (!std::isfinite(K)) throw std::domain_error("exact_ring_step: non-finite coupling");

    const int n = dist.n_sites;
    const FactorTable fac = make_factors(params, K);

    // Working table after stage k, for k = 2 .. n-1:
    //   bits [0, k)    new spins 1..k
    //   bit  k         old spin 1
    //   bits [k+1, ..) old spins k..n
    // Old spins 2..k-1 are already summed out; the size stays 2^{n+2}.
    std::vector<double> cur(std::size_t{1} << (n + 2));
    for (u64 s = 0; s < (u64{1} << n); ++s) {
        const int s1 = static_cast<int>(s & 1);
        const int s2 = static_cast<int>((s >> 1) & 1);
        const int s3 = static_cast<int>((s >> 2) & 1);
        const int sn = static_cast<int>((s >> (n - 1)) & 1);
        const double base = dist.probs[s];
        const u64 rest = s >> 1;  // old spins 2..n
        for (int w1 = 0; w1 < 2; ++w1) {
            const double f1 = base * fac.p[triple(sn, s1, s2)][w1];
            for (int w2 = 0; w2 < 2; ++w2) {
                const double f2 = fac.p[triple(s1, s2, s3)][w2];
                cur[static_cast<u64>(w1) | static_cast<u64>(w2) << 1 |
                    static_cast<u64>(s1) << 2 | rest << 3] = f1 * f2;
            }
        }
    }

    // Multiply in the factor for new spin k+1 and sum out old spin k.
    std::vector<double> nxt(std::size_t{1} << (n + 2));
    for (int k = 2; k <= n - 2; ++k) {
        const u64 low_mask = (u64{1} << k) - 1;
        for (u64 d = 0; d < nxt.size(); ++d) {
            const u64 w = d & low_mask;
            const int w_next = static_cast<int>((d >> k) & 1);
            const int s1 = static_cast<int>((d >> (k + 1)) & 1);
            const u64 rest = d >> (k + 2);  // old spins k+1..n
            const int sk1 = static_cast<int>(rest & 1);
            const int sk2 = static_cast<int>((rest >> 1) & 1);
            double acc = 0.0;
            for (int sk = 0; sk < 2; ++sk) {
                const u64 src = w | static_cast<u64>(s1) << k | static_cast<u64>(sk) << (k + 1) |
                                rest << (k + 2);
                acc += cur[src] * fac.p[triple(sk, sk1, sk2)][w_next];
            }
            nxt[d] = acc;
        }
        cur.swap(nxt);
    }

    // Last factor wraps around through old spins (n-1, n, 1); sum all three.
    RingDistribution out;
    out.n_sites = n;
    out.probs.assign(std::size_t{1} << n, 0.0);
    const u64 low_mask = (u64{1} << (n - 1)) - 1;
    for (u64 d = 0; d < out.probs.size(); ++d) {
        const u64 w = d & low_mask;
        const int w_next = static_cast<int>((d >> (n - 1)) & 1);
        double acc = 0.0;
        for (int s1 = 0; s1 < 2; ++s1)
            for (int sn1 = 0; sn1 < 2; ++sn1)
                for (int sn = 0; sn < 2; ++sn) {
                    const u64 src = w | static_cast<u64>(s1) << (n - 1) |
                                    static_cast<u64>(sn1) << n | static_cast<u64>(sn) << (n + 1);
                    acc += cur[src] * fac.p[triple(sn1, sn, s1)][w_next];
                }
        out.probs[d] = acc;
    }
    return out;
}

RingDistribution exact_ring_step_reference(const DynamicsParams& params, double K,
                                           const RingDistribution& dist) {
    validate(params);
    validate(dist);
    if (dist.n_sites > 10)
        throw resource_error("exact_ring_step_reference: dense reference capped at 10 sites");

    const int n = dist.n_sites;
    const u64 total = u64{1} << n;
    RingDistribution out;
    out.n_sites = n;
    out.probs.assign(total, 0.0);

    std::vector<double> site_plus(static_cast<std::size_t>(n));
    std::vector<double> cond(total);
    for (u64 s = 0; s < total; ++s) {
        if (dist.probs[s] == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            const int left = spin_of_bit(s, (i + n - 1) % n);
            const int center = spin_of_bit(s, i);
            const int right = spin_of_bit(s, (i + 1) % n);
            const double drift =
                (K * (left + right) + (1.0 - params.gamma) * center) / params.noise_scale;
            site_plus[static_cast<std::size_t>(i)] = gauss_cdf(drift);
        }
        // Tensor out the product conditional over all new configurations.
        cond[0] = 1.0;
        u64 filled = 1;
        for (int i = 0; i < n; ++i) {
            const double pp = site_plus[static_cast<std::size_t>(i)];
            for (u64 c = 0; c < filled; ++c) {
                cond[c + filled] = cond[c] * (1.0 - pp);
                cond[c] *= pp;
            }
            filled <<= 1;
        }
        for (u64 c = 0; c < total; ++c) out.probs[c] += dist.probs[s] * cond[c];
    }
    return out;
}

std::vector<double> site_marginal(const RingDistribution& dist, std::span<const int> sites) {
    validate(dist);
    check_site_list(sites, dist.n_sites);
    const int m = static_cast<int>(sites.size());
    std::vector<double> marg(std::size_t{1} << m, 0.0);
    for (u64 s = 0; s < dist.probs.size(); ++s) {
        u64 word = 0;
        for (int k = 0; k < m; ++k)
            word |= ((s >> (sites[static_cast<std::size_t>(k)] - 1)) & 1) << k;
        marg[word] += dist.probs[s];
    }
    return marg;
}

WindowDistribution window_from_ring(const RingDistribution& dist, std::span<const int> sites) {
    validate(dist);
    check_site_list(sites, dist.n_sites);
    const int n = dist.n_sites;
    for (std::size_t a = 0; a < sites.size(); ++a)
        for (std::size_t b = a + 1; b < sites.size(); ++b)
            if (cyclic_distance(sites[a], sites[b], n) < 3)
                throw std::domain_error(
                    "window_from_ring: observed sites must be at least 3 apart so the windows "
                    "are disjoint");

    const int m = static_cast<int>(sites.size());
    WindowDistribution w;
    w.m = m;
    w.probs.assign(std::size_t{1} << (3 * m), 0.0);
    for (u64 s = 0; s < dist.probs.size(); ++s) {
        u64 word = 0;
        for (int k = 0; k < m; ++k) {
            const int x = sites[static_cast<std::size_t>(k)];
            const u64 left = (s >> ((x - 2 + n) % n)) & 1;
            const u64 center = (s >> (x - 1)) & 1;
            const u64 right = (s >> (x % n)) & 1;
            word |= (left | center << 1 | right << 2) << (3 * k);
        }
        w.probs[word] += dist.probs[s];
    }
    return w;
}

EvolveResult exact_ring_evolve(const DynamicsParams& params, const Schedule& schedule,
                               RingDistribution init, int steps, std::span<const int> sites,
                               std::span<const double> f_table) {
    validate(params);
    validate(init);
    check_site_list(sites, init.n_sites);
    if (steps < 0) throw std::domain_error("exact_ring_evolve: negative step count");
    const std::size_t m_states = std::size_t{1} << sites.size();
    if (f_table.size() != m_states)
        throw std::domain_error("exact_ring_evolve: table length mismatch");

    std::vector<double> flog(m_states);
    for (std::size_t w = 0; w < m_states; ++w) {
        if (!(f_table[w] >= 0.0))
            throw std::domain_error("exact_ring_evolve: negative table entry");
        flog[w] = xlogx(f_table[w]);
    }

    EvolveResult result;
    result.limit_mean = m_point_limit(f_table);
    result.limit_s_hat = 0.0;
    for (double v : flog) result.limit_s_hat += v;
    result.limit_s_hat /= static_cast<double>(m_states);
    result.limit_s_tilde = xlogx(result.limit_mean);
    result.limit_s = result.limit_s_hat - result.limit_s_tilde;

    result.rows.reserve(static_cast<std::size_t>(steps));
    RingDistribution cur = std::move(init);
    for (int t = 1; t <= steps; ++t) {
        const double K = schedule.coupling_at(t - 1);
        cur = exact_ring_step(params, K, cur);
        const std::vector<double> marg = site_marginal(cur, sites);
        double s_hat = 0.0, mean = 0.0;
        for (std::size_t w = 0; w < m_states; ++w) {
            s_hat += flog[w] * marg[w];
            mean += f_table[w] * marg[w];
        }
        const double s_tilde = xlogx(std::max(mean, 0.0));
        result.rows.push_back({t, K, s_hat, s_tilde, s_hat - s_tilde, mean});
    }
    return result;
}

}  // namespace isingrg
