#include "lchca/numtheory.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "lchca/errors.hpp"

namespace lchca {

std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mul_mod_u64(result, base, m);
    base = mul_mod_u64(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set is a proven witness set for all n < 3.3 * 10^24.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::optional<std::uint64_t> checked_pow_u64(std::uint64_t base, std::uint32_t exp) {
  unsigned __int128 acc = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > ~std::uint64_t{0}) return std::nullopt;
  }
  return static_cast<std::uint64_t>(acc);
}

namespace {

std::uint64_t pollard_brent(std::uint64_t n, std::uint64_t c) {
  // Brent's cycle-finding variant of Pollard rho with batched gcds.
  std::uint64_t x = 2, y = 2, d = 1, q = 1, ys = y;
  std::uint64_t r = 1;
  const std::uint64_t batch = 128;
  auto f = [&](std::uint64_t v) { return (mul_mod_u64(v, v, n) + c) % n; };
  while (d == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = f(y);
    std::uint64_t k = 0;
    while (k < r && d == 1) {
      ys = y;
      std::uint64_t lim = std::min(batch, r - k);
      for (std::uint64_t i = 0; i < lim; ++i) {
        y = f(y);
        q = mul_mod_u64(q, x > y ? x - y : y - x, n);
      }
      d = std::gcd(q, n);
      k += batch;
    }
    r <<= 1;
  }
  if (d == n) {
    // recover by stepping one at a time from the saved point
    d = 1;
    while (d == 1) {
      ys = f(ys);
      d = std::gcd(x > ys ? x - ys : ys - x, n);
    }
  }
  return d;
}

void factor_rec(std::uint64_t n, std::vector<std::uint64_t>& primes) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    primes.push_back(n);
    return;
  }
  for (std::uint64_t c = 1; c < 64; ++c) {
    std::uint64_t d = pollard_brent(n, c);
    if (d != n && d != 1) {
      factor_rec(d, primes);
      factor_rec(n / d, primes);
      return;
    }
  }
  throw CapacityError("factorize: rho failed to split " + std::to_string(n));
}

}  // namespace

std::vector<PrimePower> factorize(std::uint64_t n, std::uint64_t trial_bound) {
  if (n == 0) throw DomainError("factorize: zero has no factorization");
  std::vector<std::uint64_t> primes;
  for (std::uint64_t q = 2; q <= trial_bound && q <= n / q; q += (q == 2 ? 1 : 2)) {
    while (n % q == 0) {
      primes.push_back(q);
      n /= q;
    }
  }
  if (n > 1) factor_rec(n, primes);

  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> out;
  for (std::uint64_t q : primes) {
    if (!out.empty() && out.back().prime == q) {
      ++out.back().exponent;
    } else {
      out.push_back({q, 1});
    }
  }
  return out;
}

std::uint64_t inv_mod_u64(std::uint64_t a, std::uint64_t m) {
  __int128 t = 0, nt = 1;
  __int128 r = m, nr = a % m;
  while (nr != 0) {
    __int128 quot = r / nr;
    __int128 tmp = t - quot * nt;
    t = nt;
    nt = tmp;
    tmp = r - quot * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw DomainError("inv_mod_u64: arguments are not coprime");
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

}  // namespace lchca
