#ifndef LCHCA_POW_HPP
#define LCHCA_POW_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "lchca/reductions.hpp"

namespace lchca {

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);
std::string hex_encode(std::span<const std::uint8_t> data);
std::vector<std::uint8_t> hex_decode(std::string_view text);

/// Protocol parameters: the CA is the companion matrix of the primitive
/// polynomial f, the prover must match the first k cells within delta steps.
struct PowParams {
  Prime p{2};
  std::uint32_t n = 0;
  Polynomial f{Prime(2)};  // monic primitive, degree n
  std::uint32_t k = 0;     // difficulty: fixed-prefix length, k < n
  std::uint64_t delta = 0;

  /// delta = 8 p^k (clamped to the period): success probability about
  /// 1 - e^-8 per challenge under the uniform sampling model.
  static std::uint64_t recommended_delta(Prime p, std::uint32_t n, std::uint32_t k);
  /// Finds a primitive polynomial for (p, n) deterministically from the seed
  /// and applies the recommended delta.
  static PowParams standard(Prime p, std::uint32_t n, std::uint32_t k,
                            std::uint64_t seed = 0);

  void validate() const;
};

/// A message-derived puzzle. start and prefix are exactly reproducible from
/// the digest and the parameters.
struct PowChallenge {
  PowParams params;
  std::array<std::uint8_t, 32> digest{};  // SHA-256 of the message
  Configuration start;                    // nonzero, n digits
  std::vector<std::uint32_t> prefix;      // k digits

  /// Structured wire text; exact round-trip through parse().
  std::string to_text() const;
  static PowChallenge parse(std::string_view text);
};

struct PowSolution {
  std::uint64_t tau = 0;
};

PowChallenge make_challenge(std::span<const std::uint8_t> message,
                            const PowParams& params);
PowChallenge make_challenge(std::string_view message, const PowParams& params);

/// The SDDP scan for the challenge; nullopt on exhaustion (the caller
/// re-issues with a salted message).
std::optional<PowSolution> prove(const PowChallenge& challenge, unsigned jobs = 1,
                                 SddpScanStats* stats = nullptr);

struct VerifyResult {
  enum class Status {
    accepted,
    rejected_bound,     // tau >= delta
    rejected_prefix,    // prefix of M^tau s differs from x
    rejected_malformed, // challenge fails its structural invariants
  };

  Status status = Status::rejected_malformed;
  std::string detail;
  /// Matrix-matrix multiplications spent; at most 2 ceil(log2 tau) + 2.
  std::uint64_t matrix_mults = 0;

  bool ok() const noexcept { return status == Status::accepted; }
};

std::string_view to_string(VerifyResult::Status s);

/// Exponentiation-based check: never iterates the scan, so its cost is
/// logarithmic in the claimed witness.
VerifyResult verify(const PowChallenge& challenge, const PowSolution& solution);

}  // namespace lchca

#endif  // LCHCA_POW_HPP
