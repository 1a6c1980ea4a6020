#include "isingrg/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace isingrg {

double gauss_cdf(double x) {
    if (!std::isfinite(x)) throw std::domain_error("gauss_cdf: non-finite argument");
    // 0.5*erfc(-x/sqrt(2)); the reflection identity then holds by construction.
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    return 0.5 * std::erfc(-x * inv_sqrt2);
}

double xlogx(double x) {
    if (!(x >= 0.0)) throw std::domain_error("xlogx: argument must be nonnegative");
    return x == 0.0 ? 0.0 : x * std::log(x);
}

std::uint64_t spin_rank(std::span<const int> word) {
    if (word.empty()) throw std::domain_error("spin_rank: empty word");
    if (word.size() > 63) throw std::domain_error("spin_rank: word longer than 63 spins");
    std::uint64_t rank = 0;
    for (std::size_t k = 0; k < word.size(); ++k) {
        if (word[k] == -1)
            rank |= std::uint64_t{1} << k;
        else if (word[k] != +1)
            throw std::domain_error("spin_rank: spins must be +1 or -1");
    }
    return rank;
}

std::vector<int> rank_to_spins(std::uint64_t rank, int length) {
    if (length < 1 || length > 63) throw std::domain_error("rank_to_spins: length out of range");
    if (rank >> length) throw std::domain_error("rank_to_spins: rank out of range");
    std::vector<int> word(static_cast<std::size_t>(length));
    for (int k = 0; k < length; ++k) word[static_cast<std::size_t>(k)] = spin_of_bit(rank, k);
    return word;
}

}  // namespace isingrg
