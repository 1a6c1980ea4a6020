#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "isingrg/dynamics.hpp"
#include "isingrg/errors.hpp"

using namespace isingrg;

namespace {
constexpr double kPhi1 = 0.8413447460685429;
constexpr double kPhi1Sq = 0.7078609817371410;
constexpr double kGap = 0.6826894921370859;    // Phi(1) - Phi(-1)
constexpr double kGapSq = 0.4660649426743923;  // squared
constexpr double kThreeLn2 = 2.0794415416798359;
}  // namespace

TEST_CASE("site update probability") {
    const DynamicsParams p{0.0, 1.0};
    CHECK(site_update_probability(p, 0.0, +1, +1, -1, +1) == doctest::Approx(kPhi1).epsilon(1e-15));
    const DynamicsParams quiet{1.0, 1.0};
    CHECK(site_update_probability(quiet, 0.0, -1, +1, +1, +1) == 0.5);
    CHECK(site_update_probability(quiet, 0.0, -1, -1, +1, -1) == 0.5);

    std::mt19937_64 eng(3);
    std::uniform_int_distribution<int> spin(0, 1);
    std::uniform_real_distribution<double> real(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const DynamicsParams q{real(eng) - 1.0, real(eng) + 0.1};
        const double K = real(eng);
        const int l = spin(eng) ? 1 : -1, c = spin(eng) ? 1 : -1, r = spin(eng) ? 1 : -1;
        const double up = site_update_probability(q, K, l, c, r, +1);
        const double dn = site_update_probability(q, K, l, c, r, -1);
        CHECK(std::abs(up + dn - 1.0) <= 1e-15);
    }
    CHECK_THROWS_AS(site_update_probability({0.0, 0.0}, 0.0, 1, 1, 1, 1), std::domain_error);
    CHECK_THROWS_AS(site_update_probability(p, 0.0, 1, 2, 1, 1), std::domain_error);
}

TEST_CASE("theta matrix structure") {
    const DynamicsParams p{0.0, 1.0};
    SUBCASE("all-plus window, all-plus row at K = 0") {
        const ThetaMatrix theta = build_theta(p, 0.0, 2);
        CHECK(theta.at(0, 0) == doctest::Approx(kPhi1Sq).epsilon(1e-15));
    }
    SUBCASE("columns sum to one") {
        for (int m : {1, 2, 3}) {
            for (double K : {0.0, 0.3}) {
                for (double gamma : {0.0, 0.5}) {
                    const ThetaMatrix theta = build_theta({gamma, 1.0}, K, m);
                    for (int col = 0; col < theta.cols(); ++col) {
                        double sum = 0.0;
                        for (int row = 0; row < theta.rows(); ++row) {
                            const double e = theta.at(row, col);
                            CHECK(e > 0.0);
                            CHECK(e < 1.0);
                            sum += e;
                        }
                        CHECK(std::abs(sum - 1.0) <= 1e-12);
                    }
                }
            }
        }
    }
    SUBCASE("at K = 0 only 2^m distinct columns remain") {
        for (int m : {1, 2}) {
            const ThetaMatrix theta = build_theta(p, 0.0, m);
            std::set<std::vector<double>> distinct;
            for (int col = 0; col < theta.cols(); ++col) {
                std::vector<double> column;
                for (int row = 0; row < theta.rows(); ++row) column.push_back(theta.at(row, col));
                distinct.insert(column);
            }
            CHECK(distinct.size() == static_cast<std::size_t>(1 << m));
        }
        const ThetaMatrix coupled = build_theta(p, 0.4, 2);
        std::set<std::vector<double>> distinct;
        for (int col = 0; col < coupled.cols(); ++col) {
            std::vector<double> column;
            for (int row = 0; row < coupled.rows(); ++row) column.push_back(coupled.at(row, col));
            distinct.insert(column);
        }
        CHECK(distinct.size() > 4);
    }
    SUBCASE("size cap") { CHECK_THROWS_AS(build_theta(p, 0.0, 5), resource_error); }
}

TEST_CASE("transfer-determined matrix and spectrum") {
    SUBCASE("fully noisy case is the flat projector") {
        const TransferDeterminedMatrix mat = build_transfer_determined({1.0, 1.0}, 2);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) CHECK(mat.at(r, c) == 0.25);
        const std::vector<double> eig = spectrum_check(mat);
        CHECK(eig[0] == doctest::Approx(1.0).epsilon(1e-12));
        for (int k = 1; k < 4; ++k) CHECK(std::abs(eig[k]) <= 1e-12);
    }
    SUBCASE("noise-free drift spectrum is {1, r, r, r^2}") {
        const TransferDeterminedMatrix mat = build_transfer_determined({0.0, 1.0}, 2);
        for (int r = 0; r < 4; ++r) {
            double col_sum = 0.0;
            for (int c = 0; c < 4; ++c) {
                CHECK(mat.at(r, c) == mat.at(c, r));
                col_sum += mat.at(c, r);
            }
            CHECK(std::abs(col_sum - 1.0) <= 1e-14);
        }
        const std::vector<double> eig = spectrum_check(mat);
        CHECK(std::abs(eig[0] - 1.0) <= 1e-10);
        CHECK(std::abs(eig[1] - kGap) <= 1e-10);
        CHECK(std::abs(eig[2] - kGap) <= 1e-10);
        CHECK(std::abs(eig[3] - kGapSq) <= 1e-10);
    }
    SUBCASE("analytic spectrum for a scaled drift") {
        const DynamicsParams p{0.3, 2.0};
        const double r = gauss_cdf((1.0 - p.gamma) / p.noise_scale) -
                         gauss_cdf(-(1.0 - p.gamma) / p.noise_scale);
        const std::vector<double> eig = spectrum_check(build_transfer_determined(p, 2));
        CHECK(eig[1] == doctest::Approx(r).epsilon(1e-12));
        CHECK(eig[3] == doctest::Approx(r * r).epsilon(1e-12));
    }
    SUBCASE("three observed sites keep a simple top eigenvalue") {
        const std::vector<double> eig = spectrum_check(build_transfer_determined({0.0, 1.0}, 3));
        CHECK(eig.size() == 8);
        CHECK(std::abs(eig[0] - 1.0) <= 1e-10);
        CHECK(eig[1] < 1.0 - 0.25);
    }
    SUBCASE("matrix powers flatten at the predicted horizon") {
        const TransferDeterminedMatrix mat = build_transfer_determined({0.0, 1.0}, 2);
        const int horizon = static_cast<int>(std::ceil(std::log(1e-10) / std::log(kGap)));
        CHECK(horizon == 61);
        std::vector<double> power(16, 0.0);
        for (int d = 0; d < 4; ++d) power[static_cast<std::size_t>(d * 4 + d)] = 1.0;
        std::vector<double> next(16);
        for (int step = 0; step < horizon; ++step) {
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) {
                    double acc = 0.0;
                    for (int k = 0; k < 4; ++k)
                        acc += power[static_cast<std::size_t>(r * 4 + k)] * mat.at(k, c);
                    next[static_cast<std::size_t>(r * 4 + c)] = acc;
                }
            power.swap(next);
        }
        for (double e : power) CHECK(std::abs(e - 0.25) <= 1e-10);
    }
}

TEST_CASE("coefficient iteration") {
    const TransferDeterminedMatrix mat = build_transfer_determined({0.0, 1.0}, 2);
    const ObservableConstants k = observable_constants({2, 1}, {2, 1});
    SUBCASE("zero steps is the identity") {
        const CoefficientVector v = hat_coefficients(k);
        const CoefficientVector out = coefficient_iteration(v, mat, 0);
        CHECK(out.coeffs == v.coeffs);
    }
    SUBCASE("the flat vector is fixed") {
        const CoefficientVector flat{2, {1.0, 1.0, 1.0, 1.0}};
        const CoefficientVector out = coefficient_iteration(flat, mat, 7);
        for (double x : out.coeffs) CHECK(x == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("long iteration converges to the mean in every slot") {
        const CoefficientVector out = coefficient_iteration(hat_coefficients(k), mat, 80);
        for (double x : out.coeffs) CHECK(std::abs(x - kThreeLn2) <= 1e-10);
    }
    SUBCASE("the coefficient sum is preserved") {
        const CoefficientVector out = coefficient_iteration(hat_coefficients(k), mat, 13);
        double sum = 0.0;
        for (double x : out.coeffs) sum += x;
        CHECK(sum == doctest::Approx(k.A).epsilon(1e-12));
    }
    SUBCASE("dimension mismatch rejected") {
        const CoefficientVector bad{2, {1.0, 2.0}};
        CHECK_THROWS_AS(coefficient_iteration(bad, mat, 1), std::domain_error);
    }
}

TEST_CASE("new spin distribution") {
    const DynamicsParams p{0.0, 1.0};
    SUBCASE("point-mass window at K = 0") {
        WindowDistribution w;
        w.m = 2;
        w.probs.assign(64, 0.0);
        w.probs[0] = 1.0;
        const NewSpinDistribution out = new_spin_distribution(build_theta(p, 0.0, 2), w);
        const double phi_m = 1.0 - kPhi1;
        CHECK(out.probs[0] == doctest::Approx(kPhi1 * kPhi1).epsilon(1e-14));
        CHECK(out.probs[1] == doctest::Approx(phi_m * kPhi1).epsilon(1e-13));
        CHECK(out.probs[2] == doctest::Approx(kPhi1 * phi_m).epsilon(1e-13));
        CHECK(out.probs[3] == doctest::Approx(phi_m * phi_m).epsilon(1e-12));
    }
    SUBCASE("pure noise flattens any window") {
        std::mt19937_64 eng(9);
        std::uniform_real_distribution<double> real(0.0, 1.0);
        WindowDistribution w;
        w.m = 2;
        w.probs.resize(64);
        double sum = 0.0;
        for (double& x : w.probs) sum += (x = real(eng));
        for (double& x : w.probs) x /= sum;
        const NewSpinDistribution out = new_spin_distribution(build_theta({1.0, 1.0}, 0.0, 2), w);
        for (double x : out.probs) CHECK(x == doctest::Approx(0.25).epsilon(1e-13));
        double total = 0.0;
        for (double x : out.probs) total += x;
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
    SUBCASE("dimension mismatch rejected") {
        WindowDistribution w;
        w.m = 1;
        w.probs.assign(8, 0.125);
        CHECK_THROWS_AS(new_spin_distribution(build_theta(p, 0.0, 2), w), std::domain_error);
    }
}

TEST_CASE("observables from distributions") {
    NewSpinDistribution uniform;
    uniform.m = 2;
    uniform.probs.assign(4, 0.25);
    const ObservableConstants k = observable_constants({2, 1}, {2, 1});
    SUBCASE("constant coefficients return themselves") {
        const CoefficientVector v{2, {0.7, 0.7, 0.7, 0.7}};
        CHECK(observable_from_distribution(v, uniform) == doctest::Approx(0.7).epsilon(1e-15));
    }
    SUBCASE("hat weights against the uniform law give A/4") {
        CHECK(observable_from_distribution(hat_coefficients(k), uniform) ==
              doctest::Approx(kThreeLn2).epsilon(1e-14));
    }
    SUBCASE("tilde weights against the uniform law give the limit mass") {
        CHECK(observable_from_distribution(tilde_coefficients(k), uniform) ==
              doctest::Approx(0.25 * k.c4_12 * k.c2_12).epsilon(1e-14));
    }
    SUBCASE("dimension mismatch rejected") {
        const CoefficientVector v{1, {1.0, 2.0}};
        CHECK_THROWS_AS(observable_from_distribution(v, uniform), std::domain_error);
    }
}

TEST_CASE("transition-matrix gap obeys the Lipschitz bound") {
    const DynamicsParams p{0.0, 1.0};
    SUBCASE("exact zero at K = 0") {
        const ThetaErrorBound e = theta_error_bound(p, 0.0, 2);
        CHECK(e.max_abs == 0.0);
        CHECK(e.frobenius == 0.0);
    }
    SUBCASE("bounded, and the ratio to K shrinks toward 0") {
        double prev_ratio = 1e9;
        for (double K : {0.4, 0.2, 0.1, 0.05}) {
            const ThetaErrorBound e = theta_error_bound(p, K, 2);
            CHECK(e.max_abs <= e.lipschitz_bound);
            CHECK(e.frobenius >= e.max_abs);
            const double ratio = e.max_abs / K;
            CHECK(ratio < prev_ratio);
            prev_ratio = ratio;
        }
    }
}

TEST_CASE("fixed-point observable limits") {
    SUBCASE("flat observable") {
        const ObservableLimits limits = fixed_point_observable_limit({1, 1}, {1, 1});
        CHECK(limits.s_hat == 0.0);
        CHECK(limits.s_tilde == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(limits.s == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("frozen values for (2,1) x (2,1)") {
        const ObservableLimits limits = fixed_point_observable_limit({2, 1}, {2, 1});
        CHECK(limits.s_hat == doctest::Approx(kThreeLn2).epsilon(1e-14));
        CHECK(limits.s_tilde == doctest::Approx(1.8245929864867397).epsilon(1e-14));
        CHECK(limits.s == doctest::Approx(0.2548485551930962).epsilon(1e-12));
    }
    SUBCASE("the K = 0 closed form reaches the limit at any separation") {
        const ObservableLimits limits = fixed_point_observable_limit({2, 1}, {3, 1});
        for (int d : {1, 5}) {
            const TwoPointObservable obs = two_point_observable({0.0, 0.0, 0.0}, {2, 1}, {3, 1}, d);
            CHECK(obs.s_hat == doctest::Approx(limits.s_hat).epsilon(1e-15));
            CHECK(obs.s == doctest::Approx(limits.s).epsilon(1e-13));
        }
    }
}

TEST_CASE("m-point table expectation") {
    NewSpinDistribution uniform;
    uniform.m = 3;
    uniform.probs.assign(8, 0.125);
    const std::vector<double> table{1, 2, 3, 4, 5, 6, 7, 8};
    CHECK(m_point_observable(table, uniform) == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(m_point_limit(table) == doctest::Approx(4.5).epsilon(1e-15));

    const std::vector<double> flat{0.7, 0.7, 0.7, 0.7, 0.7, 0.7, 0.7, 0.7};
    CHECK(m_point_observable(flat, uniform) == doctest::Approx(0.7).epsilon(1e-15));

    const std::vector<double> wrong{1, 2};
    CHECK_THROWS_AS(m_point_observable(wrong, uniform), std::domain_error);
    const std::vector<double> negative{1, 2, 3, -4, 5, 6, 7, 8};
    CHECK_THROWS_AS(m_point_observable(negative, uniform), std::domain_error);
}
