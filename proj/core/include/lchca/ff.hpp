#ifndef LCHCA_FF_HPP
#define LCHCA_FF_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lchca/errors.hpp"
#include "lchca/numtheory.hpp"

namespace lchca {

/// A validated odd-sized prime modulus, 2 <= p < 2^31.
/// Construction runs a deterministic primality check.
class Prime {
 public:
  explicit Prime(std::uint32_t p);

  std::uint32_t value() const noexcept { return p_; }

  friend bool operator==(Prime a, Prime b) noexcept { return a.p_ == b.p_; }
  friend bool operator!=(Prime a, Prime b) noexcept { return a.p_ != b.p_; }

 private:
  std::uint32_t p_;
};

// Digit arithmetic in F_p. Digits are always kept reduced in [0, p).
inline std::uint32_t fp_add(std::uint32_t a, std::uint32_t b, Prime p) {
  std::uint64_t s = std::uint64_t{a} + b;
  return static_cast<std::uint32_t>(s >= p.value() ? s - p.value() : s);
}
inline std::uint32_t fp_sub(std::uint32_t a, std::uint32_t b, Prime p) {
  return a >= b ? a - b : static_cast<std::uint32_t>(a + std::uint64_t{p.value()} - b);
}
inline std::uint32_t fp_neg(std::uint32_t a, Prime p) {
  return a == 0 ? 0 : p.value() - a;
}
inline std::uint32_t fp_mul(std::uint32_t a, std::uint32_t b, Prime p) {
  return static_cast<std::uint32_t>(std::uint64_t{a} * b % p.value());
}

/// Multiplicative inverse in F_p; a must be nonzero mod p.
std::uint32_t fp_inv(std::uint32_t a, Prime p);

/// Dense univariate polynomial over F_p, coefficient of x^i at index i.
/// Always normalized: no trailing zero coefficients, digits in [0, p).
class Polynomial {
 public:
  /// The zero polynomial over F_p.
  explicit Polynomial(Prime p) : p_(p) {}

  /// Coefficients must already be reduced digits; trailing zeros are stripped.
  Polynomial(Prime p, std::vector<std::uint32_t> coeffs);

  static Polynomial zero(Prime p) { return Polynomial(p); }
  static Polynomial one(Prime p) { return Polynomial(p, {1}); }
  static Polynomial x(Prime p) { return Polynomial(p, {0, 1}); }
  static Polynomial constant(Prime p, std::uint32_t c) {
    return Polynomial(p, {c % p.value()});
  }

  Prime modulus() const noexcept { return p_; }
  /// Degree, with deg(0) = -1.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  std::uint32_t coeff(std::size_t i) const noexcept {
    return i < c_.size() ? c_[i] : 0;
  }
  std::uint32_t lead() const noexcept { return c_.empty() ? 0 : c_.back(); }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
  bool is_monic() const noexcept { return lead() == 1; }
  const std::vector<std::uint32_t>& coeffs() const noexcept { return c_; }

  /// Scaled to leading coefficient 1 (polynomial must be nonzero).
  Polynomial monic() const;

  std::uint32_t eval(std::uint32_t at) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator*(std::uint32_t digit) const;
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.p_ == b.p_ && a.c_ == b.c_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) {
    return !(a == b);
  }

  /// Wire format "p:c0,c1,...,cn" (little-endian coefficients).
  std::string to_string() const;
  /// Parses the wire format; rejects digits outside [0, p).
  static Polynomial parse(std::string_view text);

 private:
  void normalize();

  Prime p_;
  std::vector<std::uint32_t> c_;
};

/// Quotient and remainder of a by b (b nonzero, same modulus).
std::pair<Polynomial, Polynomial> poly_divmod(const Polynomial& a,
                                              const Polynomial& b);
Polynomial poly_mod(const Polynomial& a, const Polynomial& f);

/// a*b reduced mod f; f must be monic of degree >= 1, all three over one p.
Polynomial poly_mul_mod(const Polynomial& a, const Polynomial& b,
                        const Polynomial& f);
Polynomial poly_pow_mod(const Polynomial& base, std::uint64_t exp,
                        const Polynomial& f);

/// Monic gcd.
Polynomial poly_gcd(Polynomial a, Polynomial b);

/// Deterministic finite-field irreducibility test (x^{p^n} = x mod f plus
/// the gcd condition at every maximal proper subfield degree).
bool is_irreducible(const Polynomial& f);

/// True iff the residue class of x has multiplicative order p^n - 1 in
/// F_p[x]/<f>. Requires f irreducible; needs the factorization of p^n - 1,
/// so desk-scale caps apply (CapacityError beyond them).
bool is_primitive(const Polynomial& f);

/// Seeded random search for a monic irreducible (optionally primitive)
/// polynomial of the given degree (>= 2). Deterministic per seed.
Polynomial find_irreducible(Prime p, std::uint32_t degree, bool want_primitive,
                            std::uint64_t seed);

class ExtField;
class ExtFieldElement;
using ExtFieldPtr = std::shared_ptr<const ExtField>;

namespace detail {
/// Internal: permits degree-1 quotients (needed by the 1x1 diagonalization).
ExtFieldPtr make_ext_field_any_degree(Polynomial modulus);
}  // namespace detail

/// The extension field F_{p^n} = F_p[x]/<f> for monic irreducible f.
/// Create through make(); elements keep their parent alive via shared_ptr.
class ExtField : public std::enable_shared_from_this<ExtField> {
 public:
  /// Degree >= 2 (degree-1 quotients are rejected at this surface).
  static ExtFieldPtr make(Polynomial modulus);

  Prime characteristic() const noexcept { return p_; }
  std::uint32_t degree() const noexcept { return n_; }
  const Polynomial& modulus() const noexcept { return f_; }

  /// p^n - 1 when it fits in 64 bits.
  std::optional<std::uint64_t> unit_group_order() const;

  ExtFieldElement zero() const;
  ExtFieldElement one() const;
  /// The residue class of x.
  ExtFieldElement gen() const;
  /// Element from reduced digit vector of length <= n (padded with zeros).
  ExtFieldElement element(std::vector<std::uint32_t> coeffs) const;
  /// Element from an arbitrary polynomial over the same p (reduced mod f).
  ExtFieldElement from_polynomial(const Polynomial& value) const;

  bool same(const ExtField& other) const noexcept {
    return this == &other || (p_ == other.p_ && f_ == other.f_);
  }

 private:
  explicit ExtField(Polynomial f);

  Prime p_;
  std::uint32_t n_;
  Polynomial f_;

  friend ExtFieldPtr detail::make_ext_field_any_degree(Polynomial modulus);
};

/// An element of F_{p^n}, stored as n reduced digits in the polynomial
/// basis {1, x, ..., x^{n-1}}. Immutable; safe to share across threads.
class ExtFieldElement {
 public:
  const ExtFieldPtr& field() const noexcept { return field_; }
  const std::vector<std::uint32_t>& coeffs() const noexcept { return c_; }

  bool is_zero() const noexcept;
  bool is_one() const noexcept;
  Polynomial to_polynomial() const;

  ExtFieldElement operator+(const ExtFieldElement& o) const;
  ExtFieldElement operator-(const ExtFieldElement& o) const;
  ExtFieldElement operator*(const ExtFieldElement& o) const;
  ExtFieldElement operator/(const ExtFieldElement& o) const;
  ExtFieldElement inverse() const;
  /// Square-and-multiply power; a^0 = 1 for every a (including 0).
  ExtFieldElement pow(std::uint64_t exp) const;
  /// x -> x^{p^count}.
  ExtFieldElement frobenius(std::uint32_t count = 1) const;

  friend bool operator==(const ExtFieldElement& a, const ExtFieldElement& b);
  friend bool operator!=(const ExtFieldElement& a, const ExtFieldElement& b) {
    return !(a == b);
  }

 private:
  friend class ExtField;
  ExtFieldElement(ExtFieldPtr field, std::vector<std::uint32_t> coeffs)
      : field_(std::move(field)), c_(std::move(coeffs)) {}

  ExtFieldPtr field_;
  std::vector<std::uint32_t> c_;
};

/// Order of a in the multiplicative group (a nonzero).
std::uint64_t multiplicative_order(const ExtFieldElement& a);

/// Least x >= 0 with base^x == value, via Pohlig-Hellman over the
/// factorization of ord(base) with baby-step/giant-step per prime.
/// nullopt when value lies outside <base>.
std::optional<std::uint64_t> dlog(const ExtFieldElement& base,
                                  const ExtFieldElement& value);

}  // namespace lchca

#endif  // LCHCA_FF_HPP
