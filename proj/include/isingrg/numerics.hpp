#pragma once

// Scalar and indexing utilities shared by every module: the standard normal
// CDF and the binary-sort encoding of +/-1 spin words.

#include <cstdint>
#include <span>
#include <vector>

namespace isingrg {

// P(N(0,1) <= x), built on erfc so that gauss_cdf(x) + gauss_cdf(-x) = 1
// holds to machine precision. Throws std::domain_error on non-finite input.
double gauss_cdf(double x);

// x*log(x) extended continuously with 0*log(0) = 0. Negative x throws.
double xlogx(double x);

// Binary-sort rank of a spin word: position 1 is the least significant bit,
// +1 encodes as bit 0 and -1 as bit 1. The all-(+1) word has rank 0.
std::uint64_t spin_rank(std::span<const int> word);

// Inverse of spin_rank for a word of the given length.
std::vector<int> rank_to_spins(std::uint64_t rank, int length);

inline int spin_of_bit(std::uint64_t bits, int pos) {
    return ((bits >> pos) & 1u) ? -1 : +1;
}

inline std::uint64_t bit_of_spin(int spin) { return spin == -1 ? 1u : 0u; }

// Kahan-compensated accumulator. Enumeration kernels sum fixed chunks with
// one of these and merge the chunk totals in chunk order, which keeps the
// result independent of the thread count.
class KahanSum {
  public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace isingrg
