#include "isingrg/transfer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isingrg/errors.hpp"

namespace isingrg {

void validate(const Coupling& c) {
    if (!std::isfinite(c.K) || !std::isfinite(c.h) || !std::isfinite(c.gamma))
        throw std::domain_error("Coupling: fields must be finite");
    if (c.K < 0.0) throw std::domain_error("Coupling: K must be nonnegative");
}

void validate(const ObservableFn& f) {
    if (!std::isfinite(f.v_plus) || !std::isfinite(f.v_minus))
        throw std::domain_error("ObservableFn: values must be finite");
    if (f.v_plus < 0.0 || f.v_minus < 0.0)
        throw std::domain_error("ObservableFn: squared values must be nonnegative");
    if (f.v_plus == 0.0 && f.v_minus == 0.0)
        throw std::domain_error("ObservableFn: both values vanish");
}

TransferSpectrum transfer_spectrum(const Coupling& c) {
    validate(c);
    const double ek = std::exp(c.K);
    const double emk = std::exp(-c.K);
    if (c.h == 0.0) return {ek + emk, ek - emk, -std::numbers::pi / 4.0};
    const double sh = std::sinh(c.h);
    const double root = std::sqrt(sh * sh + std::exp(-4.0 * c.K));
    const double phi = 0.5 * std::atan(std::exp(-2.0 * c.K) / sh);
    return {ek * (std::cosh(c.h) + root), ek * (std::cosh(c.h) - root), phi};
}

double partition_function(const Coupling& c, int n_sites) {
    if (n_sites < 1) throw std::domain_error("partition_function: need at least one site");
    const TransferSpectrum sp = transfer_spectrum(c);
    return std::pow(sp.lambda_plus, n_sites) + std::pow(sp.lambda_minus, n_sites);
}

double correlation_two_point(const Coupling& c, int distance) {
    if (distance < 0) throw std::domain_error("correlation_two_point: negative distance");
    const TransferSpectrum sp = transfer_spectrum(c);
    double sin_2phi_sq = 1.0;
    if (c.h != 0.0) {
        const double t = std::exp(-4.0 * c.K);  // tan^2(2 phi) * sinh^2(h)
        const double sh = std::sinh(c.h);
        sin_2phi_sq = t / (sh * sh + t);
    }
    return sin_2phi_sq * std::pow(sp.ratio(), distance);
}

ObservableConstants observable_constants(const ObservableFn& f, const ObservableFn& g) {
    validate(f);
    validate(g);
    ObservableConstants k{};
    k.a = xlogx(f.v_plus * g.v_plus);
    k.b = xlogx(f.v_minus * g.v_plus);
    k.c = xlogx(f.v_plus * g.v_minus);
    k.d = xlogx(f.v_minus * g.v_minus);
    k.A = k.a + k.b + k.c + k.d;
    k.B = k.a - k.b - k.c + k.d;
    k.c2_12 = g.v_plus + g.v_minus;
    k.c4_12 = f.v_plus + f.v_minus;
    k.delta_bar = (f.v_plus - f.v_minus) * (g.v_plus - g.v_minus);
    k.delta_hat = (xlogx(f.v_plus) - xlogx(f.v_minus)) * (g.v_plus - g.v_minus);
    k.delta_tilde = (xlogx(g.v_plus) - xlogx(g.v_minus)) * (f.v_plus - f.v_minus);
    k.ta = f.v_plus * g.v_plus;
    k.tb = f.v_minus * g.v_plus;
    k.tc = f.v_plus * g.v_minus;
    k.td = f.v_minus * g.v_minus;
    return k;
}

TwoPointObservable two_point_observable(const Coupling& c, const ObservableFn& f,
                                        const ObservableFn& g, int distance) {
    validate(c);
    if (c.h != 0.0)
        throw unsupported_regime("two_point_observable: closed form exists only at h = 0");
    if (distance < 1) throw std::domain_error("two_point_observable: distance must be >= 1");
    const ObservableConstants k = observable_constants(f, g);
    const double rho_d = std::pow(transfer_spectrum(c).ratio(), distance);
    const double s_hat = 0.25 * k.A + 0.25 * k.B * rho_d;
    const double q = 0.25 * k.c4_12 * k.c2_12 + 0.25 * k.delta_bar * rho_d;
    const double s_tilde = xlogx(q);
    return {s_hat, s_tilde, s_hat - s_tilde};
}

double free_energy_density(const Coupling& c) {
    validate(c);
    if (c.h != 0.0) throw unsupported_regime("free_energy_density: requires h = 0");
    return std::log(transfer_spectrum(c).lambda_plus);
}

double fixed_boundary_partition(const Coupling& c, int n_sites, int s0, int sN1) {
    validate(c);
    if (c.h != 0.0) throw unsupported_regime("fixed_boundary_partition: requires h = 0");
    if (n_sites < 1) throw std::domain_error("fixed_boundary_partition: need at least one site");
    if (s0 * s0 != 1 || sN1 * sN1 != 1)
        throw std::domain_error("fixed_boundary_partition: boundary spins must be +1 or -1");
    const TransferSpectrum sp = transfer_spectrum(c);
    const double lp = std::pow(sp.lambda_plus, n_sites + 1);
    const double lm = std::pow(sp.lambda_minus, n_sites + 1);
    return s0 == sN1 ? 0.5 * (lp + lm) : 0.5 * (lp - lm);
}

namespace {

// Symmetric 2x2 operator matrix in the rotated (eigen) basis. Raw entries
// are w_plus e^{2K} + w_minus e^{-2K} on the diagonal corners and
// w_plus + w_minus off-diagonal; the rotation maps them to
// h11 = (C11+C22)/2 + C12, h12 = -(C11-C22)/2, h22 = (C11+C22)/2 - C12.
struct Rotated2x2 {
    double h11, h12, h22;
};

Rotated2x2 rotated_operator(double w_plus, double w_minus, double K) {
    const double e2k = std::exp(2.0 * K);
    const double em2k = std::exp(-2.0 * K);
    const double c11 = w_plus * e2k + w_minus * em2k;
    const double c12 = w_plus + w_minus;
    const double c22 = w_plus * em2k + w_minus * e2k;
    return {0.5 * (c11 + c22) + c12, -0.5 * (c11 - c22), 0.5 * (c11 + c22) - c12};
}

struct Mat2 {
    double e11, e12, e21, e22;
};

// diag(1, rho^p) * X * diag(1, rho^q) * Y for rotated operators X, Y;
// the common factor lambda_+^{p+q} is kept out for numerical range.
Mat2 scaled_product(const Rotated2x2& x, const Rotated2x2& y, double rho, int p, int q) {
    const double rp = std::pow(rho, p);
    const double rq = std::pow(rho, q);
    const double a11 = x.h11, a12 = x.h12 * rq;
    const double a21 = x.h12 * rp, a22 = x.h22 * rp * rq;
    return {a11 * y.h11 + a12 * y.h12, a11 * y.h12 + a12 * y.h22,
            a21 * y.h11 + a22 * y.h12, a21 * y.h12 + a22 * y.h22};
}

double clamped_xlogx(double q) {
    if (q < 0.0 && q > -1e-9) q = 0.0;
    return xlogx(q);
}

}  // namespace

BoundaryLimitSet boundary_limit_observables(const Coupling& c, const ObservableFn& f,
                                            const ObservableFn& g, int i, int j) {
    validate(c);
    if (c.h != 0.0)
        throw unsupported_regime("boundary_limit_observables: closed form exists only at h = 0");
    if (i < 1 || j <= i) throw std::domain_error("boundary_limit_observables: need 1 <= i < j");
    if (j - i < 2)
        throw std::domain_error(
            "boundary_limit_observables: sites must satisfy j - i >= 2 so a transfer block "
            "separates the insertions");
    validate(f);
    validate(g);

    const TransferSpectrum sp = transfer_spectrum(c);
    const double rho = sp.ratio();
    const double K = c.K;

    const Rotated2x2 c1 = rotated_operator(xlogx(f.v_plus), xlogx(f.v_minus), K);
    const Rotated2x2 c2 = rotated_operator(g.v_plus, g.v_minus, K);
    const Rotated2x2 c3 = rotated_operator(xlogx(g.v_plus), xlogx(g.v_minus), K);
    const Rotated2x2 c4 = rotated_operator(f.v_plus, f.v_minus, K);

    const int p = i - 1, q = j - i - 2;
    const Mat2 m = scaled_product(c1, c2, rho, p, q);  // x-log-x at i, plain at j
    const Mat2 l = scaled_product(c4, c3, rho, p, q);  // plain at i, x-log-x at j
    const Mat2 r = scaled_product(c4, c2, rho, p, q);  // plain at both sites

    // The overall scale lambda_+^{p+q} = lambda_+^{j-3} cancels against
    // lambda_+^{-j-1} up to lambda_+^{-4}.
    const double inv_lp4 = std::pow(sp.lambda_plus, -4);
    const double hat_minus = (l.e11 - l.e21 + m.e11 - m.e21) * inv_lp4;
    const double hat_plus = (l.e11 + l.e21 + m.e11 + m.e21) * inv_lp4;
    const double mass_minus = (r.e11 - r.e21) * inv_lp4;  // limit <F> for (+,*) boundaries
    const double mass_plus = (r.e11 + r.e21) * inv_lp4;   // limit <F> for (-,*) boundaries

    BoundaryLimitSet out{};
    out.s_hat = {hat_minus, hat_plus, hat_minus, hat_plus};
    out.R_hat1 = clamped_xlogx(mass_minus);
    out.R_hat2 = clamped_xlogx(mass_plus);
    out.s_tilde = {out.R_hat1, out.R_hat2, out.R_hat1, out.R_hat2};

    const double scale = std::pow(sp.lambda_plus, j - 3);
    out.M11 = m.e11 * scale;
    out.M21 = m.e21 * scale;
    out.L11 = l.e11 * scale;
    out.L21 = l.e21 * scale;
    out.R11 = r.e11 * scale;
    out.R21 = r.e21 * scale;
    return out;
}

double ring_pair_correlation(const Coupling& c, int distance, int n_sites) {
    validate(c);
    if (c.h != 0.0) throw unsupported_regime("ring_pair_correlation: requires h = 0");
    if (n_sites < 1 || distance < 0 || distance > n_sites)
        throw std::domain_error("ring_pair_correlation: need 0 <= distance <= n_sites");
    const double rho = transfer_spectrum(c).ratio();
    return (std::pow(rho, distance) + std::pow(rho, n_sites - distance)) /
           (1.0 + std::pow(rho, n_sites));
}

}  // namespace isingrg
