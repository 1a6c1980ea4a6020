#include "isingrg/enumeration.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <stdexcept>
#include <vector>

#include "isingrg/errors.hpp"

namespace isingrg {

namespace {

using u64 = std::uint64_t;

void check_sites(int i, int j, int n_sites) {
    if (n_sites < 2) throw std::domain_error("enumeration: need at least two sites");
    if (n_sites > kMaxEnumerationSites)
        throw resource_error("enumeration: more than 2^22 configurations");
    if (i < 1 || j <= i || j > n_sites)
        throw std::domain_error("enumeration: need 1 <= i < j <= n_sites");
}

void check_h_zero(const Coupling& c, const char* who) {
    if (c.h != 0.0) throw unsupported_regime(std::string(who) + ": requires h = 0");
}

// Number of unequal adjacent pairs around the ring.
inline int ring_mismatches(u64 s, int n, u64 mask) {
    const u64 rot = ((s << 1) | (s >> (n - 1))) & mask;
    return static_cast<int>(std::popcount(rot ^ s));
}

// Weight table over the mismatch count: exp(K (n_bonds - 2u)).
std::vector<double> bond_weights(double K, int n_bonds) {
    std::vector<double> w(static_cast<std::size_t>(n_bonds) + 1);
    for (int u = 0; u <= n_bonds; ++u) w[static_cast<std::size_t>(u)] = std::exp(K * (n_bonds - 2 * u));
    return w;
}

struct Partial {
    KahanSum z, f_log_f, f;
};

// Accumulate three weighted sums over [begin, end) and merge per chunk; the
// chunk grid is fixed so results do not depend on the thread count.
template <typename Body>
Partial chunked_sums(u64 total, Body&& body) {
    const u64 n_chunks = std::min<u64>(total, 256);
    std::vector<Partial> partials(n_chunks);
#pragma omp parallel for schedule(static)
    for (std::int64_t ch = 0; ch < static_cast<std::int64_t>(n_chunks); ++ch) {
        const u64 begin = total / n_chunks * static_cast<u64>(ch) +
                          std::min<u64>(static_cast<u64>(ch), total % n_chunks);
        const u64 end = begin + total / n_chunks + (static_cast<u64>(ch) < total % n_chunks ? 1 : 0);
        body(begin, end, partials[static_cast<std::size_t>(ch)]);
    }
    Partial merged;
    for (const Partial& p : partials) {
        merged.z.add(p.z.value());
        merged.f_log_f.add(p.f_log_f.value());
        merged.f.add(p.f.value());
    }
    return merged;
}

TwoPointObservable normalize(const Partial& sums) {
    const double z = sums.z.value();
    const double s_hat = sums.f_log_f.value() / z;
    const double mass = sums.f.value() / z;
    const double s_tilde = xlogx(mass);
    return {s_hat, s_tilde, s_hat - s_tilde};
}

}  // namespace

TwoPointObservable finite_ring_observable(const Coupling& c, const ObservableFn& f,
                                          const ObservableFn& g, int i, int j, int n_sites) {
    validate(c);
    check_h_zero(c, "finite_ring_observable");
    check_sites(i, j, n_sites);
    validate(f);
    validate(g);

    const int n = n_sites;
    const u64 total = u64{1} << n;
    const u64 mask = total - 1;
    const std::vector<double> w = bond_weights(c.K, n);
    const std::array<double, 2> fv{f.v_plus, f.v_minus};
    const std::array<double, 2> gv{g.v_plus, g.v_minus};
    std::array<double, 4> ftab{}, fltab{};
    for (int bi = 0; bi < 2; ++bi)
        for (int bj = 0; bj < 2; ++bj) {
            const double val = fv[static_cast<std::size_t>(bi)] * gv[static_cast<std::size_t>(bj)];
            ftab[static_cast<std::size_t>(bi | bj << 1)] = val;
            fltab[static_cast<std::size_t>(bi | bj << 1)] = xlogx(val);
        }
    const int bi_shift = i - 1, bj_shift = j - 1;

    const Partial sums = chunked_sums(total, [&](u64 begin, u64 end, Partial& p) {
        for (u64 s = begin; s < end; ++s) {
            const double weight = w[static_cast<std::size_t>(ring_mismatches(s, n, mask))];
            const u64 cell = ((s >> bi_shift) & 1) | ((s >> bj_shift) & 1) << 1;
            p.z.add(weight);
            p.f_log_f.add(weight * fltab[static_cast<std::size_t>(cell)]);
            p.f.add(weight * ftab[static_cast<std::size_t>(cell)]);
        }
    });
    return normalize(sums);
}

TwoPointObservable finite_ring_observable_reference(const Coupling& c, const ObservableFn& f,
                                                    const ObservableFn& g, int i, int j,
                                                    int n_sites) {
    validate(c);
    check_h_zero(c, "finite_ring_observable_reference");
    check_sites(i, j, n_sites);
    if (n_sites > 16) throw resource_error("reference enumeration capped at 16 sites");
    validate(f);
    validate(g);

    double z = 0.0, flogf = 0.0, fsum = 0.0;
    for (u64 s = 0; s < (u64{1} << n_sites); ++s) {
        double bonds = 0.0;
        for (int k = 0; k < n_sites; ++k)
            bonds += spin_of_bit(s, k) * spin_of_bit(s, (k + 1) % n_sites);
        const double weight = std::exp(c.K * bonds);
        const double fi = spin_of_bit(s, i - 1) == +1 ? f.v_plus : f.v_minus;
        const double gj = spin_of_bit(s, j - 1) == +1 ? g.v_plus : g.v_minus;
        z += weight;
        flogf += weight * xlogx(fi * gj);
        fsum += weight * fi * gj;
    }
    const double s_hat = flogf / z;
    const double s_tilde = xlogx(fsum / z);
    return {s_hat, s_tilde, s_hat - s_tilde};
}

TwoPointObservable finite_open_chain_observable(const Coupling& c, const ObservableFn& f,
                                                const ObservableFn& g, int i, int j, int n_sites,
                                                int s0, int sN1) {
    validate(c);
    check_h_zero(c, "finite_open_chain_observable");
    check_sites(i, j, n_sites);
    if (s0 * s0 != 1 || sN1 * sN1 != 1)
        throw std::domain_error("finite_open_chain_observable: boundary spins must be +1 or -1");
    validate(f);
    validate(g);

    const int n = n_sites;
    const u64 total = u64{1} << n;
    // n+1 bonds along the extended word (s0, interior..., sN1).
    const std::vector<double> w = bond_weights(c.K, n + 1);
    const u64 edge_mask = (u64{1} << (n + 1)) - 1;
    const u64 b0 = bit_of_spin(s0);
    const u64 bN1 = bit_of_spin(sN1) << (n + 1);
    const std::array<double, 2> fv{f.v_plus, f.v_minus};
    const std::array<double, 2> gv{g.v_plus, g.v_minus};
    std::array<double, 4> ftab{}, fltab{};
    for (int bi = 0; bi < 2; ++bi)
        for (int bj = 0; bj < 2; ++bj) {
            const double val = fv[static_cast<std::size_t>(bi)] * gv[static_cast<std::size_t>(bj)];
            ftab[static_cast<std::size_t>(bi | bj << 1)] = val;
            fltab[static_cast<std::size_t>(bi | bj << 1)] = xlogx(val);
        }

    const Partial sums = chunked_sums(total, [&](u64 begin, u64 end, Partial& p) {
        for (u64 s = begin; s < end; ++s) {
            const u64 ext = b0 | (s << 1) | bN1;
            const int u = static_cast<int>(std::popcount((ext ^ (ext >> 1)) & edge_mask));
            const double weight = w[static_cast<std::size_t>(u)];
            const u64 cell = ((s >> (i - 1)) & 1) | ((s >> (j - 1)) & 1) << 1;
            p.z.add(weight);
            p.f_log_f.add(weight * fltab[static_cast<std::size_t>(cell)]);
            p.f.add(weight * ftab[static_cast<std::size_t>(cell)]);
        }
    });
    return normalize(sums);
}

TwoPointObservable finite_open_chain_observable_reference(const Coupling& c,
                                                          const ObservableFn& f,
                                                          const ObservableFn& g, int i, int j,
                                                          int n_sites, int s0, int sN1) {
    validate(c);
    check_h_zero(c, "finite_open_chain_observable_reference");
    check_sites(i, j, n_sites);
    if (n_sites > 16) throw resource_error("reference enumeration capped at 16 sites");
    validate(f);
    validate(g);

    double z = 0.0, flogf = 0.0, fsum = 0.0;
    for (u64 s = 0; s < (u64{1} << n_sites); ++s) {
        double bonds = s0 * spin_of_bit(s, 0) + spin_of_bit(s, n_sites - 1) * sN1;
        for (int k = 0; k + 1 < n_sites; ++k) bonds += spin_of_bit(s, k) * spin_of_bit(s, k + 1);
        const double weight = std::exp(c.K * bonds);
        const double fi = spin_of_bit(s, i - 1) == +1 ? f.v_plus : f.v_minus;
        const double gj = spin_of_bit(s, j - 1) == +1 ? g.v_plus : g.v_minus;
        z += weight;
        flogf += weight * xlogx(fi * gj);
        fsum += weight * fi * gj;
    }
    const double s_hat = flogf / z;
    const double s_tilde = xlogx(fsum / z);
    return {s_hat, s_tilde, s_hat - s_tilde};
}

double ring_partition_brute(const Coupling& c, int n_sites) {
    validate(c);
    if (n_sites < 1) throw std::domain_error("ring_partition_brute: need at least one site");
    if (n_sites > kMaxEnumerationSites)
        throw resource_error("ring_partition_brute: more than 2^22 configurations");

    const int n = n_sites;
    const u64 total = u64{1} << n;
    const u64 mask = total - 1;
    const std::vector<double> wk = bond_weights(c.K, n);
    std::vector<double> wh(static_cast<std::size_t>(n) + 1);
    for (int p = 0; p <= n; ++p) wh[static_cast<std::size_t>(p)] = std::exp(c.h * (n - 2 * p));

    const Partial sums = chunked_sums(total, [&](u64 begin, u64 end, Partial& p) {
        for (u64 s = begin; s < end; ++s) {
            const int u = n == 1 ? 0 : ring_mismatches(s, n, mask);
            const int minus = static_cast<int>(std::popcount(s));
            p.z.add(wk[static_cast<std::size_t>(u)] * wh[static_cast<std::size_t>(minus)]);
        }
    });
    return sums.z.value();
}

double ring_partition_brute_reference(const Coupling& c, int n_sites) {
    validate(c);
    if (n_sites < 1) throw std::domain_error("ring_partition_brute_reference: need at least one site");
    if (n_sites > 16) throw resource_error("reference enumeration capped at 16 sites");
    double z = 0.0;
    for (u64 s = 0; s < (u64{1} << n_sites); ++s) {
        double bonds = 0.0, field = 0.0;
        for (int k = 0; k < n_sites; ++k) {
            bonds += spin_of_bit(s, k) * spin_of_bit(s, (k + 1) % n_sites);
            field += spin_of_bit(s, k);
        }
        z += std::exp(c.K * bonds + c.h * field);
    }
    return z;
}

double fixed_boundary_partition_brute(const Coupling& c, int n_sites, int s0, int sN1) {
    validate(c);
    check_h_zero(c, "fixed_boundary_partition_brute");
    if (n_sites < 1 || n_sites > kMaxEnumerationSites)
        throw resource_error("fixed_boundary_partition_brute: size out of range");
    if (s0 * s0 != 1 || sN1 * sN1 != 1)
        throw std::domain_error("fixed_boundary_partition_brute: boundary spins must be +1 or -1");

    const int n = n_sites;
    const u64 total = u64{1} << n;
    const std::vector<double> w = bond_weights(c.K, n + 1);
    const u64 edge_mask = (u64{1} << (n + 1)) - 1;
    const u64 b0 = bit_of_spin(s0);
    const u64 bN1 = bit_of_spin(sN1) << (n + 1);

    const Partial sums = chunked_sums(total, [&](u64 begin, u64 end, Partial& p) {
        for (u64 s = begin; s < end; ++s) {
            const u64 ext = b0 | (s << 1) | bN1;
            const int u = static_cast<int>(std::popcount((ext ^ (ext >> 1)) & edge_mask));
            p.z.add(w[static_cast<std::size_t>(u)]);
        }
    });
    return sums.z.value();
}

double ring_pair_correlation_brute(const Coupling& c, int i, int j, int n_sites) {
    validate(c);
    check_h_zero(c, "ring_pair_correlation_brute");
    check_sites(i, j, n_sites);

    const int n = n_sites;
    const u64 total = u64{1} << n;
    const u64 mask = total - 1;
    const std::vector<double> w = bond_weights(c.K, n);

    const Partial sums = chunked_sums(total, [&](u64 begin, u64 end, Partial& p) {
        for (u64 s = begin; s < end; ++s) {
            const double weight = w[static_cast<std::size_t>(ring_mismatches(s, n, mask))];
            const int prod = spin_of_bit(s, i - 1) * spin_of_bit(s, j - 1);
            p.z.add(weight);
            p.f.add(weight * prod);
        }
    });
    return sums.f.value() / sums.z.value();
}

}  // namespace isingrg
