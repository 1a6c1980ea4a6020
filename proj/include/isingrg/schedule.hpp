#pragma once

// Time-indexed coupling K_t driving the dynamics toward the K = 0 fixed
// point. The dilatation factor is reported as 2^t.

#include <cmath>
#include <stdexcept>

#include "isingrg/rgflow.hpp"

namespace isingrg {

class Schedule {
  public:
    enum class Kind { constant, geometric, rgt_iterated };

    static Schedule constant(double k) {
        check(k);
        return Schedule(Kind::constant, k, 1.0);
    }
    static Schedule geometric(double k0, double q) {
        check(k0);
        if (!(q > 0.0 && q < 1.0))
            throw std::domain_error("Schedule: geometric ratio must be in (0,1)");
        return Schedule(Kind::geometric, k0, q);
    }
    static Schedule rgt_iterated(double k0) {
        check(k0);
        return Schedule(Kind::rgt_iterated, k0, 1.0);
    }

    double coupling_at(int t) const {
        if (t < 0) throw std::domain_error("Schedule: negative time");
        switch (kind_) {
            case Kind::constant:
                return k0_;
            case Kind::geometric:
                return k0_ * std::pow(q_, t);
            case Kind::rgt_iterated: {
                double k = k0_;
                for (int s = 0; s < t; ++s) k = rgt_step(k);
                return k;
            }
        }
        return k0_;
    }

    double lambda_at(int t) const { return std::ldexp(1.0, t); }

    Kind kind() const { return kind_; }
    double base_coupling() const { return k0_; }
    double ratio() const { return q_; }

  private:
    Schedule(Kind kind, double k0, double q) : kind_(kind), k0_(k0), q_(q) {}
    static void check(double k) {
        if (!std::isfinite(k) || k < 0.0)
            throw std::domain_error("Schedule: coupling must be finite and nonnegative");
    }

    Kind kind_;
    double k0_;
    double q_;
};

}  // namespace isingrg
