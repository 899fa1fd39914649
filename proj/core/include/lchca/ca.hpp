#ifndef LCHCA_CA_HPP
#define LCHCA_CA_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lchca/matfp.hpp"

namespace lchca {

/// A full assignment of cell states, leftmost cell first.
using Configuration = std::vector<std::uint32_t>;

/// Digit string for p <= 10 ("1100"), comma-separated otherwise.
std::string config_to_string(Prime p, const Configuration& cells);
/// Parses either form; rejects digits outside [0, p) and, when expected_len
/// is given, any other length.
Configuration parse_configuration(Prime p, std::string_view text,
                                  std::optional<std::uint32_t> expected_len = {});

/// Local-rule description: per-cell weights over a shared neighborhood of
/// relative offsets. Cells at the boundary simply lack out-of-range taps
/// (null boundary).
struct RuleSpec {
  Prime p;
  std::uint32_t cells = 0;
  std::vector<std::int32_t> neighborhood;
  /// weights[i][k] multiplies the state of cell i+k in the update of cell i.
  std::vector<std::map<std::int32_t, std::uint32_t>> weights;
};

/// Banded transition matrix of the rule: M[i][i+k] = weights[i][k].
/// DomainError if any weight references an offset outside the neighborhood.
MatrixFp build_matrix(const RuleSpec& spec);

enum class CaClass {
  uniform,            // reducible characteristic polynomial
  hybrid_group,       // irreducible, not primitive
  hybrid_max_length,  // primitive
};

std::string_view to_string(CaClass c);

/// Classification straight from the characteristic polynomial.
CaClass classify(const MatrixFp& m);

/// A linear cellular automaton over F_p with its cached characteristic
/// polynomial and classification. Immutable; cheap to copy and share.
class Lchca {
 public:
  static Lchca from_matrix(MatrixFp m);
  static Lchca from_rule(const RuleSpec& spec);

  /// Structured-text spec file. The loader recomputes the characteristic
  /// polynomial and cross-checks it against a `charpoly` line when present.
  static Lchca load(std::istream& in);
  static Lchca load_file(const std::string& path);
  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;

  Prime modulus() const noexcept { return m_.modulus(); }
  std::uint32_t cells() const noexcept { return m_.rows(); }
  const MatrixFp& matrix() const noexcept { return m_; }
  const Polynomial& characteristic_poly() const noexcept { return fm_; }
  CaClass classification() const noexcept { return class_; }
  bool is_hybrid() const noexcept { return class_ != CaClass::uniform; }
  bool is_max_length() const noexcept { return class_ == CaClass::hybrid_max_length; }

  /// Multiplicative order of the transition matrix (hybrid CA only).
  std::uint64_t order() const;

  /// One transition, using the banded structure of the matrix.
  Configuration step(const Configuration& s) const;
  /// tau transitions via matrix exponentiation; run(s, 0) == s.
  Configuration run(const Configuration& s, std::uint64_t tau) const;

  /// Least k >= 1 returning to s; nullopt marks the dead zero configuration.
  /// Equals order() for every nonzero s of a hybrid CA.
  std::optional<std::uint64_t> cycle_length(const Configuration& s) const;

  struct Cycle {
    Configuration representative;
    std::uint64_t length = 0;
  };
  /// Partition of the nonzero states into orbits (hybrid CA, p^n <= 2^24).
  std::vector<Cycle> enumerate_cycles() const;

 private:
  Lchca(MatrixFp m, Polynomial fm, CaClass cls);
  static Lchca load_impl(std::istream& in);
  void build_sparse_rows();

  MatrixFp m_;
  Polynomial fm_;
  CaClass class_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> sparse_;
};

/// Digit tallies from sampling random exponents of a maximum-length CA.
struct UniformityReport {
  std::uint64_t samples = 0;
  std::uint32_t cells = 0;
  std::uint32_t p = 0;
  Configuration start;
  /// cell_counts[i][d] = number of samples whose cell i held digit d.
  std::vector<std::vector<std::uint64_t>> cell_counts;
  /// pair_counts[pair_index(i,j)][a*p+b] over all i < j.
  std::vector<std::vector<std::uint64_t>> pair_counts;

  std::size_t pair_index(std::uint32_t i, std::uint32_t j) const;
  double cell_frequency(std::uint32_t cell, std::uint32_t digit) const;
  /// Chi-square statistic of one cell's digit distribution.
  double chi_square(std::uint32_t cell) const;
  /// max_{a,b} |P(c_i=a, c_j=b) - P(c_i=a) P(c_j=b)|.
  double pair_deviation(std::uint32_t i, std::uint32_t j) const;
  double max_pair_deviation() const;
};

/// Samples tau uniformly from [0, p^n - 1), tallies the cells of M^tau s for
/// a fixed seed-derived nonzero s. Deterministic for a given seed no matter
/// how many workers share the loop (counter-based per-sample seeding).
UniformityReport uniformity_report(const Lchca& ca, std::uint64_t samples,
                                   std::uint64_t seed, unsigned jobs = 1);

}  // namespace lchca

#endif  // LCHCA_CA_HPP
