#ifndef LCHCA_NUMTHEORY_HPP
#define LCHCA_NUMTHEORY_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace lchca {

/// Largest multiplicative-group order the generic-group solvers accept.
/// Baby-step/giant-step space is O(sqrt of the largest prime factor), so
/// anything past 2^48 stops being a desk-scale computation.
inline constexpr std::uint64_t kMaxGroupOrder = std::uint64_t{1} << 48;

/// Default trial-division bound before the rho fallback kicks in.
inline constexpr std::uint64_t kDefaultTrialBound = std::uint64_t{1} << 20;

/// Counter-based generator: one cheap, well-mixed 64-bit stream per seed.
/// Used wherever determinism must survive resharding across workers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform-ish draw in [0, bound); bound must be nonzero. The modulo bias
  /// is below 2^-16 for every bound this library ever samples from.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Deterministic Miller-Rabin, valid for every 64-bit input.
bool is_prime_u64(std::uint64_t n);

/// base^exp if it fits in 64 bits, nullopt on overflow.
std::optional<std::uint64_t> checked_pow_u64(std::uint64_t base, std::uint32_t exp);

struct PrimePower {
  std::uint64_t prime;
  std::uint32_t exponent;
};

/// Full factorization, smallest primes first. Trial division up to
/// trial_bound, Pollard-Brent rho on whatever composite remains; throws
/// CapacityError if rho stalls.
std::vector<PrimePower> factorize(std::uint64_t n,
                                  std::uint64_t trial_bound = kDefaultTrialBound);

/// Inverse of a mod m (gcd(a, m) must be 1).
std::uint64_t inv_mod_u64(std::uint64_t a, std::uint64_t m);

}  // namespace lchca

#endif  // LCHCA_NUMTHEORY_HPP
