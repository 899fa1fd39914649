#ifndef LCHCA_MATFP_HPP
#define LCHCA_MATFP_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lchca/ff.hpp"

namespace lchca {

/// Dense row-major matrix over F_p. Entries are always reduced digits.
class MatrixFp {
 public:
  MatrixFp(Prime p, std::uint32_t rows, std::uint32_t cols);
  static MatrixFp identity(Prime p, std::uint32_t n);
  static MatrixFp from_rows(Prime p,
                            const std::vector<std::vector<std::uint32_t>>& rows);

  Prime modulus() const noexcept { return p_; }
  std::uint32_t rows() const noexcept { return rows_; }
  std::uint32_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  std::uint32_t operator()(std::uint32_t r, std::uint32_t c) const {
    return e_[std::size_t{r} * cols_ + c];
  }
  void set(std::uint32_t r, std::uint32_t c, std::uint32_t v);

  const std::vector<std::uint32_t>& entries() const noexcept { return e_; }

  friend MatrixFp operator*(const MatrixFp& a, const MatrixFp& b);
  friend MatrixFp operator+(const MatrixFp& a, const MatrixFp& b);
  friend bool operator==(const MatrixFp& a, const MatrixFp& b) {
    return a.p_ == b.p_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }
  friend bool operator!=(const MatrixFp& a, const MatrixFp& b) { return !(a == b); }

  /// Wire format "p:RxC:e00,e01,..." (row-major); exact round-trip.
  std::string to_string() const;
  static MatrixFp parse(std::string_view text);

 private:
  Prime p_;
  std::uint32_t rows_, cols_;
  std::vector<std::uint32_t> e_;
};

/// Multiplication-by-x matrix of F_p[x]/<f> in the polynomial basis
/// (f monic, degree >= 1): column j holds the coefficients of x^{j+1} mod f.
MatrixFp companion_matrix(const Polynomial& f);

std::vector<std::uint32_t> mat_vec(const MatrixFp& m, std::span<const std::uint32_t> v);

/// M^e by square-and-multiply; M^0 = I.
MatrixFp mat_pow(const MatrixFp& m, std::uint64_t e);
/// Same, reporting the number of matrix-matrix multiplications performed.
MatrixFp mat_pow_counted(const MatrixFp& m, std::uint64_t e, std::uint64_t& mults);

/// Unique solution of A x = b for square invertible A (exact elimination,
/// pivot on the first nonzero entry). SingularMatrixError carries the rank.
std::vector<std::uint32_t> gauss_solve(const MatrixFp& a, std::span<const std::uint32_t> b);

MatrixFp mat_inv(const MatrixFp& a);

/// Monic characteristic polynomial det(xI - M) via similarity reduction to
/// Hessenberg form followed by the leading-minor recurrence.
Polynomial char_poly(const MatrixFp& m);

/// Least d >= 1 with M^d = I, by divisor descent over the factorization of
/// p^n - 1. Requires char_poly(M) irreducible (UnsupportedError otherwise).
std::uint64_t mat_order(const MatrixFp& m);

/// Dense matrix over an extension field.
class MatrixExt {
 public:
  MatrixExt(ExtFieldPtr field, std::uint32_t rows, std::uint32_t cols);
  static MatrixExt identity(const ExtFieldPtr& field, std::uint32_t n);

  const ExtFieldPtr& field() const noexcept { return field_; }
  std::uint32_t rows() const noexcept { return rows_; }
  std::uint32_t cols() const noexcept { return cols_; }

  const ExtFieldElement& operator()(std::uint32_t r, std::uint32_t c) const {
    return e_[std::size_t{r} * cols_ + c];
  }
  void set(std::uint32_t r, std::uint32_t c, ExtFieldElement v);

  friend MatrixExt operator*(const MatrixExt& a, const MatrixExt& b);
  friend bool operator==(const MatrixExt& a, const MatrixExt& b);
  friend bool operator!=(const MatrixExt& a, const MatrixExt& b) { return !(a == b); }

 private:
  ExtFieldPtr field_;
  std::uint32_t rows_, cols_;
  std::vector<ExtFieldElement> e_;
};

/// Embed an F_p matrix into the extension field.
MatrixExt lift(const MatrixFp& m, const ExtFieldPtr& field);
std::vector<ExtFieldElement> lift_vec(std::span<const std::uint32_t> v,
                                      const ExtFieldPtr& field);

std::vector<ExtFieldElement> mat_vec(const MatrixExt& m,
                                     std::span<const ExtFieldElement> v);
std::vector<ExtFieldElement> gauss_solve(const MatrixExt& a,
                                         std::span<const ExtFieldElement> b);
MatrixExt mat_inv(const MatrixExt& a);

/// One kernel vector of a rank n-1 square matrix, scaled so its first
/// nonzero entry is 1. DomainError if the kernel is trivial.
std::vector<ExtFieldElement> null_space_vector(const MatrixExt& a);

}  // namespace lchca

#endif  // LCHCA_MATFP_HPP
