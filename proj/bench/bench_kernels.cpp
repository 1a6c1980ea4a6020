// Timing comparison between the serial reference implementations and the
// chunked OpenMP kernels, plus replica throughput at one thread versus all.

#include <chrono>
#include <cstdio>

#include "isingrg/enumeration.hpp"
#include "isingrg/montecarlo.hpp"
#include "isingrg/ring.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace

int main() {
    using namespace isingrg;
    const int hw = max_threads();
    std::printf("threads available: %d\n\n", hw);

    {
        const Coupling c{0.7, 0.0, 0.0};
        const ObservableFn f{2.0, 1.0}, g{3.0, 1.0};

        auto t0 = clock_type::now();
        const TwoPointObservable ref = finite_ring_observable_reference(c, f, g, 2, 7, 16);
        const double t_ref = seconds_since(t0);

        set_threads(1);
        t0 = clock_type::now();
        const TwoPointObservable serial = finite_ring_observable(c, f, g, 2, 7, 16);
        const double t_serial = seconds_since(t0);

        set_threads(hw);
        t0 = clock_type::now();
        const TwoPointObservable parallel = finite_ring_observable(c, f, g, 2, 7, 16);
        const double t_par = seconds_since(t0);

        std::printf("ring enumeration, 16 sites\n");
        std::printf("  naive reference   %8.1f ms  (s = %.12f)\n", t_ref * 1e3, ref.s);
        std::printf("  kernel, 1 thread  %8.1f ms  (s = %.12f)\n", t_serial * 1e3, serial.s);
        std::printf("  kernel, %d threads %8.1f ms  (s = %.12f)\n", hw, t_par * 1e3, parallel.s);

        set_threads(1);
        t0 = clock_type::now();
        const TwoPointObservable big1 = finite_ring_observable(c, f, g, 2, 7, 22);
        const double t_big1 = seconds_since(t0);
        set_threads(hw);
        t0 = clock_type::now();
        const TwoPointObservable bigp = finite_ring_observable(c, f, g, 2, 7, 22);
        const double t_bigp = seconds_since(t0);
        std::printf("ring enumeration, 22 sites (4.2M configurations)\n");
        std::printf("  kernel, 1 thread  %8.1f ms\n", t_big1 * 1e3);
        std::printf("  kernel, %d threads %8.1f ms  (speedup %.2fx, |ds| = %.1e)\n\n", hw,
                    t_bigp * 1e3, t_big1 / t_bigp, std::abs(big1.s - bigp.s));
    }

    {
        const DynamicsParams params{0.0, 1.0};
        RingDistribution dist = gibbs_initial_distribution(0.8, 12);

        auto t0 = clock_type::now();
        RingDistribution a = dist;
        for (int t = 0; t < 50; ++t) a = exact_ring_step(params, 0.3, a);
        const double t_sweep = seconds_since(t0);

        RingDistribution small = gibbs_initial_distribution(0.8, 10);
        t0 = clock_type::now();
        RingDistribution b = small;
        for (int t = 0; t < 50; ++t) b = exact_ring_step_reference(params, 0.3, b);
        const double t_dense = seconds_since(t0);

        std::printf("exact synchronous kernel, 50 steps\n");
        std::printf("  factor sweep, 12 sites     %8.1f ms\n", t_sweep * 1e3);
        std::printf("  dense reference, 10 sites  %8.1f ms\n\n", t_dense * 1e3);
    }

    {
        McConfig cfg;
        cfg.n_sites = 128;
        cfg.steps = 50;
        cfg.replicas = 4000;
        cfg.seed = 11;
        cfg.sites = {1, 4};
        cfg.f_table = {4.0, 2.0, 2.0, 1.0};
        const DynamicsParams params{0.0, 1.0};
        const Schedule schedule = Schedule::geometric(0.5, 0.5);

        set_threads(1);
        auto t0 = clock_type::now();
        const McResult r1 = mc_simulate(params, schedule, cfg);
        const double t_one = seconds_since(t0);

        set_threads(hw);
        t0 = clock_type::now();
        const McResult rp = mc_simulate(params, schedule, cfg);
        const double t_all = seconds_since(t0);

        const double updates = static_cast<double>(cfg.n_sites) * cfg.steps * cfg.replicas;
        std::printf("replica simulation, 128 sites x 50 steps x 4000 replicas\n");
        std::printf("  1 thread   %8.1f ms  (%.0f Mupdates/s)\n", t_one * 1e3,
                    updates / t_one / 1e6);
        std::printf("  %d threads  %8.1f ms  (%.0f Mupdates/s, speedup %.2fx, ds = %.1e)\n", hw,
                    t_all * 1e3, updates / t_all / 1e6, t_one / t_all,
                    std::abs(r1.checkpoints.back().s.value - rp.checkpoints.back().s.value));
    }
    return 0;
}
