#include "isingrg/rgflow.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <stdexcept>

namespace isingrg {

namespace {

// (1/2) log(cosh(u)) for u >= 0, accurate over the whole range: small u go
// through cosh(u) - 1 = 2 sinh^2(u/2), large u through the exponential form
// so nothing overflows.
double half_log_cosh_of(double u) {
    if (u < 1.0) {
        const double s = std::sinh(0.5 * u);
        return 0.5 * std::log1p(2.0 * s * s);
    }
    return 0.5 * (u + std::log1p(std::exp(-2.0 * u)) - std::numbers::ln2);
}

void check_coupling(double k, const char* who) {
    if (!std::isfinite(k) || k < 0.0)
        throw std::domain_error(std::string(who) + ": coupling must be finite and nonnegative");
}

}  // namespace

double rgt_step(double k) {
    check_coupling(k, "rgt_step");
    return half_log_cosh_of(k);
}

double exact_decimation_step(double k) {
    check_coupling(k, "exact_decimation_step");
    return half_log_cosh_of(2.0 * k);
}

RgTrajectory rg_trajectory(double k0, int n) {
    check_coupling(k0, "rg_trajectory");
    if (n < 0) throw std::domain_error("rg_trajectory: negative iteration count");
    RgTrajectory traj;
    traj.k_values.reserve(static_cast<std::size_t>(n) + 1);
    traj.k_values.push_back(k0);
    for (int t = 1; t <= n; ++t) traj.k_values.push_back(rgt_step(traj.k_values.back()));
    return traj;
}

namespace {

// tanh(K_0)^(2^m d) with the exponent formed exactly in double.
double dilated_correlation(double k0, int d, int m) {
    return std::pow(std::tanh(k0), std::ldexp(static_cast<double>(d), m));
}

void check_remainder_args(double k0, int x1, int x2, int n, double z) {
    check_coupling(k0, "remainder series");
    if (x1 == x2) throw std::domain_error("remainder series: sites must differ");
    if (n < 0) throw std::domain_error("remainder series: negative iteration count");
    if (!(z > 0.0) || !std::isfinite(z))
        throw std::domain_error("remainder series: scaling factor must be positive");
}

}  // namespace

RemainderSeries correlation_remainder(double k0, int x1, int x2, int n, double z) {
    check_remainder_args(k0, x1, x2, n, z);
    const int d = std::abs(x2 - x1);
    const RgTrajectory traj = rg_trajectory(k0, n);
    RemainderSeries out;
    out.kind = RemainderKind::correlation;
    out.x1 = x1;
    out.x2 = x2;
    out.scaling_factor_z = z;
    out.values.reserve(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) {
        if (m == 0) {
            out.values.push_back(0.0);
            continue;
        }
        const double coarse = std::pow(std::tanh(traj.k_values[static_cast<std::size_t>(m)]), d);
        out.values.push_back(coarse - dilated_correlation(k0, d, m) / z);
    }
    return out;
}

ObservableRemainders observable_remainders(double k0, const ObservableFn& f,
                                           const ObservableFn& g, int x1, int x2, int n,
                                           double z) {
    check_remainder_args(k0, x1, x2, n, z);
    const ObservableConstants k = observable_constants(f, g);
    const int d = std::abs(x2 - x1);
    const RgTrajectory traj = rg_trajectory(k0, n);
    const double q0 = 0.25 * k.c4_12 * k.c2_12;

    ObservableRemainders out;
    out.hat = {{}, RemainderKind::observable_hat, x1, x2, z};
    out.tilde = {{}, RemainderKind::observable_tilde, x1, x2, z};
    out.full = {{}, RemainderKind::observable, x1, x2, z};
    for (int m = 0; m <= n; ++m) {
        if (m == 0) {
            out.hat.values.push_back(0.0);
            out.tilde.values.push_back(0.0);
            out.full.values.push_back(0.0);
            continue;
        }
        const double coarse = std::pow(std::tanh(traj.k_values[static_cast<std::size_t>(m)]), d);
        const double dilated = dilated_correlation(k0, d, m);
        const double hat = 0.25 * k.B * (coarse - dilated / z);
        const double tilde =
            xlogx(q0 + 0.25 * k.delta_bar * coarse) - xlogx(q0 + 0.25 * k.delta_bar * dilated) / z;
        out.hat.values.push_back(hat);
        out.tilde.values.push_back(tilde);
        out.full.values.push_back(hat - tilde);
    }
    return out;
}

double decay_rate_fit(const RemainderSeries& series, int from_index) {
    if (from_index < 0) throw std::domain_error("decay_rate_fit: negative start index");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t m = static_cast<std::size_t>(from_index); m < series.values.size(); ++m) {
        const double v = std::abs(series.values[m]);
        if (v <= 1e-300) continue;
        const double x = static_cast<double>(m);
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 3) throw std::domain_error("decay_rate_fit: need at least three usable points");
    const double denom = count * sxx - sx * sx;
    return (count * sxy - sx * sy) / denom;
}

}  // namespace isingrg
