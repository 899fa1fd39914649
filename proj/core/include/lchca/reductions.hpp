#ifndef LCHCA_REDUCTIONS_HPP
#define LCHCA_REDUCTIONS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lchca/ca.hpp"

namespace lchca {

/// Recover the discrete distance tau with target = M^tau start.
struct DdpInstance {
  DdpInstance(Lchca automaton, Configuration start_config, Configuration target_config);

  Lchca ca;
  Configuration start;   // nonzero
  Configuration target;
};

/// Either a finite distance or the explicit unreachable marker.
class DdpSolution {
 public:
  static DdpSolution at(std::uint64_t tau) { return DdpSolution(tau); }
  static DdpSolution unreachable() { return DdpSolution(std::nullopt); }

  bool is_unreachable() const noexcept { return !tau_.has_value(); }
  std::uint64_t tau() const;

  friend bool operator==(const DdpSolution& a, const DdpSolution& b) {
    return a.tau_ == b.tau_;
  }

  /// Decimal tau, or the literal token "unreachable".
  std::string to_string() const;

 private:
  explicit DdpSolution(std::optional<std::uint64_t> t) : tau_(t) {}
  std::optional<std::uint64_t> tau_;
};

/// Iterated-step oracle: least tau in [0, bound) reaching the target,
/// unreachable otherwise. bound is capped at 2^26.
DdpSolution solve_ddp_bruteforce(const DdpInstance& inst, std::uint64_t bound);

/// M = Q diag(root^{p^i}) Q^{-1} over F_p[x]/<f_M>, eigenvector columns
/// scaled to leading entry 1. Requires an irreducible characteristic
/// polynomial.
struct Diagonalization {
  ExtFieldPtr field;
  ExtFieldElement root;  // class of x: a root of the characteristic polynomial
  MatrixExt eigenvectors;
  MatrixExt eigenvalues;  // diagonal
  MatrixExt eigenvectors_inv;
};

Diagonalization diagonalize(const MatrixFp& m);

/// Which linear system the DDP-to-DLP map solves for root^tau.
enum class DlpReductionPath {
  coordinate_ratio,  // one coordinate of Q^{-1}s / Q^{-1}t (default)
  full_system,       // Gaussian elimination on Q y = t
};

struct DlpInstance {
  ExtFieldElement base;   // the root; a generator for max-length CA
  ExtFieldElement value;  // root^tau
};

/// Maps a reachable DDP instance to the discrete-log pair (root, root^tau).
/// DomainError when the target is provably not reachable.
DlpInstance ddp_to_dlp(const DdpInstance& inst,
                       DlpReductionPath path = DlpReductionPath::coordinate_ratio);

/// Full DDP solver: diagonalize, map to a discrete log, solve it, reduce
/// modulo the matrix order. Unreachable when the log does not exist.
DdpSolution solve_ddp(const DdpInstance& inst,
                      DlpReductionPath path = DlpReductionPath::coordinate_ratio);

/// Matrix of left multiplication by a in the polynomial basis of its field:
/// column j holds the coefficients of a * x^j.
MatrixFp multiplication_matrix(const ExtFieldElement& a);

/// A DLP instance recast as a DDP instance on the multiplication-matrix CA.
/// The distance IS the logarithm, so decoding is the identity.
struct DlpViaDdp {
  DdpInstance instance;
  std::uint64_t decode(const DdpSolution& s) const;
};

/// base must be primitive (its multiplication matrix then drives a
/// maximum-length CA).
DlpViaDdp dlp_to_ddp(const ExtFieldElement& base, const ExtFieldElement& value);

/// Least tau with the fixed coordinates of M^tau s equal to x, scanning one
/// banded step at a time over a full period. nullopt if the orbit misses the
/// target set (possible for group CA).
std::optional<std::uint64_t> solve_fdp(const Lchca& ca, const Configuration& s,
                                       std::span<const std::uint32_t> x,
                                       std::span<const std::uint32_t> coords);

struct SddpInstance {
  SddpInstance(Lchca automaton, Configuration start_config,
               std::vector<std::uint32_t> fixed_digits, std::uint64_t bound,
               std::vector<std::uint32_t> fixed_coords = {});

  Lchca ca;
  Configuration start;             // nonzero
  std::vector<std::uint32_t> x;    // fixed digits, length k < n
  std::vector<std::uint32_t> coords;  // the k fixed coordinates (default 0..k-1)
  std::uint64_t delta = 0;         // scan bound, >= 1
};

struct SddpScanStats {
  /// Scan-loop iterations: exactly min(tau + 1, delta).
  std::uint64_t configurations_examined = 0;
};

/// Least tau < delta matching x on the fixed coordinates; the same scan as
/// solve_fdp truncated at delta.
std::optional<std::uint64_t> solve_sddp(const SddpInstance& inst,
                                        SddpScanStats* stats = nullptr);

/// Stride-partitioned scan across workers; the published best tau lets
/// workers abandon ranges that can no longer win. Same answer as the
/// sequential scan.
std::optional<std::uint64_t> solve_sddp_parallel(const SddpInstance& inst,
                                                 unsigned jobs);

/// Structured-text problem statement. The CA is embedded by reference (the
/// path of its spec file); configurations stay raw strings until the spec
/// is available to validate them against.
struct ProblemStatement {
  enum class Kind { ddp, fdp, sddp };

  Kind kind = Kind::ddp;
  std::string spec_ref;
  std::string start;
  std::string target;                   // ddp only
  std::string x;                        // fdp/sddp; empty means k = 0
  std::string coords;                   // optional comma list
  std::optional<std::uint64_t> delta;   // sddp only

  std::string to_text() const;
  static ProblemStatement parse(std::string_view text);
};

std::string_view to_string(ProblemStatement::Kind k);

/// A statement bound to its automaton, ready to solve.
struct ResolvedProblem {
  ProblemStatement::Kind kind;
  Lchca ca;
  Configuration start;
  Configuration target;                 // ddp
  std::vector<std::uint32_t> x;         // fdp/sddp
  std::vector<std::uint32_t> coords;
  std::uint64_t delta = 0;              // sddp
};

/// Validates the statement's fields against the given automaton.
ResolvedProblem resolve(const ProblemStatement& statement, Lchca ca);

/// Loads a statement file and its referenced spec (resolved relative to the
/// statement file's directory).
ResolvedProblem load_problem_file(const std::string& path);

}  // namespace lchca

#endif  // LCHCA_REDUCTIONS_HPP
