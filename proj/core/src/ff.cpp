#include "lchca/ff.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>

namespace lchca {

Prime::Prime(std::uint32_t p) : p_(p) {
  if (p < 2 || p >= (std::uint32_t{1} << 31) || !is_prime_u64(p)) {
    throw DomainError("Prime: " + std::to_string(p) + " is not a prime in [2, 2^31)");
  }
}

std::uint32_t fp_inv(std::uint32_t a, Prime p) {
  a %= p.value();
  if (a == 0) throw DomainError("fp_inv: zero is not a unit mod " + std::to_string(p.value()));
  // Extended Euclid on (a, p); p prime so the gcd is 1.
  std::int64_t t = 0, nt = 1;
  std::int64_t r = p.value(), nr = a;
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += p.value();
  return static_cast<std::uint32_t>(t);
}

Polynomial::Polynomial(Prime p, std::vector<std::uint32_t> coeffs)
    : p_(p), c_(std::move(coeffs)) {
  for (std::uint32_t d : c_) {
    if (d >= p_.value()) {
      throw DomainError("Polynomial: coefficient " + std::to_string(d) +
                        " not reduced mod " + std::to_string(p_.value()));
    }
  }
  normalize();
}

void Polynomial::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Polynomial Polynomial::monic() const {
  if (is_zero()) throw DomainError("Polynomial::monic: zero polynomial");
  if (is_monic()) return *this;
  return *this * fp_inv(lead(), p_);
}

std::uint32_t Polynomial::eval(std::uint32_t at) const {
  at %= p_.value();
  std::uint32_t acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) {
    acc = fp_add(fp_mul(acc, at, p_), c_[i], p_);
  }
  return acc;
}

namespace {
void require_same_modulus(Prime a, Prime b, const char* op) {
  if (a != b) {
    throw DomainError(std::string(op) + ": mismatched moduli " +
                      std::to_string(a.value()) + " vs " + std::to_string(b.value()));
  }
}
}  // namespace

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  require_same_modulus(a.p_, b.p_, "poly add");
  std::vector<std::uint32_t> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = fp_add(a.coeff(i), b.coeff(i), a.p_);
  }
  Polynomial r(a.p_);
  r.c_ = std::move(c);
  r.normalize();
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  require_same_modulus(a.p_, b.p_, "poly sub");
  std::vector<std::uint32_t> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = fp_sub(a.coeff(i), b.coeff(i), a.p_);
  }
  Polynomial r(a.p_);
  r.c_ = std::move(c);
  r.normalize();
  return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  require_same_modulus(a.p_, b.p_, "poly mul");
  if (a.is_zero() || b.is_zero()) return Polynomial(a.p_);
  const std::uint64_t p = a.p_.value();
  std::vector<std::uint32_t> c(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      c[i + j] = static_cast<std::uint32_t>(
          (c[i + j] + std::uint64_t{a.c_[i]} * b.c_[j]) % p);
    }
  }
  Polynomial r(a.p_);
  r.c_ = std::move(c);
  r.normalize();
  return r;
}

Polynomial Polynomial::operator*(std::uint32_t digit) const {
  digit %= p_.value();
  std::vector<std::uint32_t> c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] = fp_mul(c_[i], digit, p_);
  Polynomial r(p_);
  r.c_ = std::move(c);
  r.normalize();
  return r;
}

std::string Polynomial::to_string() const {
  std::ostringstream os;
  os << p_.value() << ':';
  if (c_.empty()) {
    os << '0';
  } else {
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) os << ',';
      os << c_[i];
    }
  }
  return os.str();
}

Polynomial Polynomial::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError("Polynomial::parse: missing ':' in \"" + std::string(text) + "\"");
  }
  std::string head(text.substr(0, colon));
  if (head.empty() || head.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("Polynomial::parse: bad modulus in \"" + std::string(text) + "\"");
  }
  std::uint64_t p_raw = 0;
  try {
    p_raw = std::stoull(head);
  } catch (const std::exception&) {
    throw ParseError("Polynomial::parse: bad modulus in \"" + std::string(text) + "\"");
  }
  if (p_raw < 2 || p_raw >= (std::uint64_t{1} << 31) || !is_prime_u64(p_raw)) {
    throw ParseError("Polynomial::parse: modulus is not a valid prime");
  }
  Prime p(static_cast<std::uint32_t>(p_raw));

  std::vector<std::uint32_t> coeffs;
  std::string body(text.substr(colon + 1));
  std::istringstream is(body);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("Polynomial::parse: bad digit \"" + tok + "\"");
    }
    std::uint64_t d = 0;
    try {
      d = std::stoull(tok);
    } catch (const std::exception&) {
      throw ParseError("Polynomial::parse: bad digit \"" + tok + "\"");
    }
    if (d >= p.value()) {
      throw ParseError("Polynomial::parse: digit " + tok + " not reduced mod " +
                       std::to_string(p.value()));
    }
    coeffs.push_back(static_cast<std::uint32_t>(d));
  }
  if (coeffs.empty()) throw ParseError("Polynomial::parse: no coefficients");
  return Polynomial(p, std::move(coeffs));
}

std::pair<Polynomial, Polynomial> poly_divmod(const Polynomial& a, const Polynomial& b) {
  require_same_modulus(a.modulus(), b.modulus(), "poly divmod");
  if (b.is_zero()) throw DomainError("poly_divmod: division by zero polynomial");
  Prime p = a.modulus();
  if (a.degree() < b.degree()) return {Polynomial(p), a};

  const std::uint32_t lead_inv = fp_inv(b.lead(), p);
  std::vector<std::uint32_t> rem(a.coeffs());
  std::vector<std::uint32_t> quot(a.degree() - b.degree() + 1, 0);
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    std::uint32_t top = rem[k + b.degree()];
    if (top == 0) continue;
    std::uint32_t q = fp_mul(top, lead_inv, p);
    quot[k] = q;
    for (int i = 0; i <= b.degree(); ++i) {
      rem[k + i] = fp_sub(rem[k + i], fp_mul(q, b.coeff(i), p), p);
    }
  }
  rem.resize(b.degree() >= 0 ? b.degree() : 0);
  return {Polynomial(p, std::move(quot)), Polynomial(p, std::move(rem))};
}

Polynomial poly_mod(const Polynomial& a, const Polynomial& f) {
  return poly_divmod(a, f).second;
}

Polynomial poly_mul_mod(const Polynomial& a, const Polynomial& b, const Polynomial& f) {
  require_same_modulus(a.modulus(), f.modulus(), "poly_mul_mod");
  require_same_modulus(b.modulus(), f.modulus(), "poly_mul_mod");
  if (!f.is_monic() || f.degree() < 1) {
    throw DomainError("poly_mul_mod: modulus must be monic of degree >= 1");
  }
  return poly_mod(a * b, f);
}

Polynomial poly_pow_mod(const Polynomial& base, std::uint64_t exp, const Polynomial& f) {
  Polynomial result = Polynomial::one(f.modulus());
  Polynomial b = poly_mod(base, f);
  while (exp != 0) {
    if (exp & 1) result = poly_mul_mod(result, b, f);
    b = poly_mul_mod(b, b, f);
    exp >>= 1;
  }
  return result;
}

Polynomial poly_gcd(Polynomial a, Polynomial b) {
  require_same_modulus(a.modulus(), b.modulus(), "poly_gcd");
  while (!b.is_zero()) {
    Polynomial r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a.monic();
}

bool is_irreducible(const Polynomial& f) {
  if (f.degree() < 1) throw DomainError("is_irreducible: degree must be >= 1");
  const Polynomial fm = f.monic();
  const int n = fm.degree();
  if (n == 1) return true;

  Prime p = fm.modulus();
  const Polynomial x = Polynomial::x(p);

  // x^{p^k} mod f for k = 1..n via repeated Frobenius steps.
  std::vector<Polynomial> frob;  // frob[k-1] = x^{p^k} mod f
  frob.reserve(n);
  Polynomial t = poly_pow_mod(x, p.value(), fm);
  frob.push_back(t);
  for (int k = 2; k <= n; ++k) {
    t = poly_pow_mod(t, p.value(), fm);
    frob.push_back(t);
  }
  if (frob[n - 1] != poly_mod(x, fm)) return false;
  for (const auto& [q, e] : factorize(static_cast<std::uint64_t>(n))) {
    const int k = n / static_cast<int>(q);
    Polynomial g = poly_gcd(fm, frob[k - 1] - x);
    if (!g.is_one()) return false;
  }
  return true;
}

namespace {

std::uint64_t unit_order_or_throw(Prime p, std::uint32_t n, const char* op) {
  auto pn = checked_pow_u64(p.value(), n);
  if (!pn || *pn - 1 > kMaxGroupOrder) {
    throw CapacityError(std::string(op) + ": group order p^n - 1 exceeds the 2^48 cap");
  }
  return *pn - 1;
}

}  // namespace

bool is_primitive(const Polynomial& f) {
  if (f.degree() < 1) throw DomainError("is_primitive: degree must be >= 1");
  const Polynomial fm = f.monic();
  if (fm.coeff(0) == 0) return false;  // x divides f, so x is not a unit
  if (!is_irreducible(fm)) return false;

  Prime p = fm.modulus();
  const std::uint32_t n = static_cast<std::uint32_t>(fm.degree());
  const std::uint64_t order = unit_order_or_throw(p, n, "is_primitive");
  if (order == 1) return false;  // trivial unit group: nothing generates p^n-1 > 1 states

  const Polynomial x = Polynomial::x(p);
  for (const auto& [q, e] : factorize(order)) {
    if (poly_pow_mod(x, order / q, fm).is_one()) return false;
  }
  return true;
}

Polynomial find_irreducible(Prime p, std::uint32_t degree, bool want_primitive,
                            std::uint64_t seed) {
  if (degree < 2) {
    throw DomainError("find_irreducible: degree must be >= 2");
  }
  if (want_primitive) {
    unit_order_or_throw(p, degree, "find_irreducible");  // fail early, not mid-search
  }
  std::mt19937_64 rng(seed);
  const std::uint64_t budget = 4000 + std::uint64_t{400} * degree;
  for (std::uint64_t attempt = 0; attempt < budget; ++attempt) {
    std::vector<std::uint32_t> c(degree + 1, 0);
    c[degree] = 1;
    // nonzero constant term: a vanishing one means x | f
    c[0] = 1 + static_cast<std::uint32_t>(rng() % (p.value() - 1));
    for (std::uint32_t i = 1; i < degree; ++i) {
      c[i] = static_cast<std::uint32_t>(rng() % p.value());
    }
    Polynomial f(p, std::move(c));
    if (!is_irreducible(f)) continue;
    if (want_primitive && !is_primitive(f)) continue;
    return f;
  }
  throw CapacityError("find_irreducible: search budget exhausted");
}

ExtField::ExtField(Polynomial f)
    : p_(f.modulus()), n_(static_cast<std::uint32_t>(f.degree())), f_(std::move(f)) {}

ExtFieldPtr ExtField::make(Polynomial modulus) {
  if (modulus.degree() < 2) {
    throw DomainError("ExtField: modulus degree must be >= 2");
  }
  if (!modulus.is_monic()) throw DomainError("ExtField: modulus must be monic");
  if (!is_irreducible(modulus)) throw DomainError("ExtField: modulus is reducible");
  return ExtFieldPtr(new ExtField(std::move(modulus)));
}

namespace detail {
ExtFieldPtr make_ext_field_any_degree(Polynomial modulus) {
  if (modulus.degree() < 1) {
    throw DomainError("ExtField: modulus degree must be >= 1");
  }
  if (!modulus.is_monic()) throw DomainError("ExtField: modulus must be monic");
  if (!is_irreducible(modulus)) throw DomainError("ExtField: modulus is reducible");
  return ExtFieldPtr(new ExtField(std::move(modulus)));
}
}  // namespace detail

std::optional<std::uint64_t> ExtField::unit_group_order() const {
  auto pn = checked_pow_u64(p_.value(), n_);
  if (!pn) return std::nullopt;
  return *pn - 1;
}

ExtFieldElement ExtField::zero() const {
  return ExtFieldElement(shared_from_this(), std::vector<std::uint32_t>(n_, 0));
}

ExtFieldElement ExtField::one() const {
  std::vector<std::uint32_t> c(n_, 0);
  c[0] = 1;
  return ExtFieldElement(shared_from_this(), std::move(c));
}

ExtFieldElement ExtField::gen() const {
  if (n_ == 1) {
    // class of x in F_p[x]/<x - a> is the constant a
    return ExtFieldElement(shared_from_this(), {fp_neg(f_.coeff(0), p_)});
  }
  std::vector<std::uint32_t> c(n_, 0);
  c[1] = 1;
  return ExtFieldElement(shared_from_this(), std::move(c));
}

ExtFieldElement ExtField::element(std::vector<std::uint32_t> coeffs) const {
  if (coeffs.size() > n_) {
    throw DomainError("ExtField::element: too many coefficients");
  }
  for (std::uint32_t d : coeffs) {
    if (d >= p_.value()) throw DomainError("ExtField::element: digit not reduced");
  }
  coeffs.resize(n_, 0);
  return ExtFieldElement(shared_from_this(), std::move(coeffs));
}

ExtFieldElement ExtField::from_polynomial(const Polynomial& value) const {
  require_same_modulus(value.modulus(), p_, "ExtField::from_polynomial");
  Polynomial r = value.degree() < static_cast<int>(n_) ? value : poly_mod(value, f_);
  std::vector<std::uint32_t> c(r.coeffs());
  c.resize(n_, 0);
  return ExtFieldElement(shared_from_this(), std::move(c));
}

bool ExtFieldElement::is_zero() const noexcept {
  return std::all_of(c_.begin(), c_.end(), [](std::uint32_t d) { return d == 0; });
}

bool ExtFieldElement::is_one() const noexcept {
  if (c_.empty() || c_[0] != 1) return false;
  return std::all_of(c_.begin() + 1, c_.end(), [](std::uint32_t d) { return d == 0; });
}

Polynomial ExtFieldElement::to_polynomial() const {
  return Polynomial(field_->characteristic(), c_);
}

namespace {
const ExtFieldPtr& require_same_field(const ExtFieldElement& a, const ExtFieldElement& b,
                                      const char* op) {
  if (!a.field()->same(*b.field())) {
    throw DomainError(std::string(op) + ": elements of different fields");
  }
  return a.field();
}
}  // namespace

ExtFieldElement ExtFieldElement::operator+(const ExtFieldElement& o) const {
  const auto& fld = require_same_field(*this, o, "ext add");
  Prime p = fld->characteristic();
  std::vector<std::uint32_t> c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] = fp_add(c_[i], o.c_[i], p);
  return ExtFieldElement(fld, std::move(c));
}

ExtFieldElement ExtFieldElement::operator-(const ExtFieldElement& o) const {
  const auto& fld = require_same_field(*this, o, "ext sub");
  Prime p = fld->characteristic();
  std::vector<std::uint32_t> c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] = fp_sub(c_[i], o.c_[i], p);
  return ExtFieldElement(fld, std::move(c));
}

ExtFieldElement ExtFieldElement::operator*(const ExtFieldElement& o) const {
  const auto& fld = require_same_field(*this, o, "ext mul");
  Polynomial prod = poly_mod(to_polynomial() * o.to_polynomial(), fld->modulus());
  std::vector<std::uint32_t> c(prod.coeffs());
  c.resize(fld->degree(), 0);
  return ExtFieldElement(fld, std::move(c));
}

ExtFieldElement ExtFieldElement::inverse() const {
  if (is_zero()) throw DomainError("ExtFieldElement::inverse: zero is not a unit");
  // Extended Euclid over F_p[x]: u*rep + v*f = 1.
  const Polynomial& f = field_->modulus();
  Prime p = field_->characteristic();
  Polynomial r0 = f, r1 = to_polynomial();
  Polynomial t0 = Polynomial::zero(p), t1 = Polynomial::one(p);
  while (!r1.is_zero()) {
    auto [q, r2] = poly_divmod(r0, r1);
    Polynomial t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  // r0 = gcd is a nonzero constant; scale to make it 1.
  Polynomial inv = t0 * fp_inv(r0.coeff(0), p);
  return field_->from_polynomial(inv);
}

ExtFieldElement ExtFieldElement::operator/(const ExtFieldElement& o) const {
  return *this * o.inverse();
}

ExtFieldElement ExtFieldElement::pow(std::uint64_t exp) const {
  ExtFieldElement result = field_->one();
  ExtFieldElement base = *this;
  while (exp != 0) {
    if (exp & 1) result = result * base;
    base = base * base;
    exp >>= 1;
  }
  return result;
}

ExtFieldElement ExtFieldElement::frobenius(std::uint32_t count) const {
  ExtFieldElement r = *this;
  for (std::uint32_t i = 0; i < count; ++i) {
    r = r.pow(field_->characteristic().value());
  }
  return r;
}

bool operator==(const ExtFieldElement& a, const ExtFieldElement& b) {
  return a.field_->same(*b.field_) && a.c_ == b.c_;
}

namespace {

// Little-endian base-p packing; group order is capped at 2^48 before any
// of this runs, so the key always fits.
std::uint64_t element_key(const ExtFieldElement& a) {
  const std::uint64_t p = a.field()->characteristic().value();
  std::uint64_t key = 0;
  for (std::size_t i = a.coeffs().size(); i-- > 0;) {
    key = key * p + a.coeffs()[i];
  }
  return key;
}

// Baby-step/giant-step inside the subgroup generated by base (prime order q):
// returns t in [0, q) with base^t == value, nullopt if there is none.
std::optional<std::uint64_t> bsgs(const ExtFieldElement& base,
                                  const ExtFieldElement& value, std::uint64_t q) {
  const std::uint64_t m = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(q))));
  std::unordered_map<std::uint64_t, std::uint64_t> table;
  table.reserve(static_cast<std::size_t>(m) * 2);
  ExtFieldElement g = base.field()->one();
  for (std::uint64_t j = 0; j < m; ++j) {
    table.emplace(element_key(g), j);
    g = g * base;
  }
  const ExtFieldElement stride = base.pow(m).inverse();
  ExtFieldElement y = value;
  for (std::uint64_t i = 0; i * m < q + m; ++i) {
    auto it = table.find(element_key(y));
    if (it != table.end()) {
      std::uint64_t t = i * m + it->second;
      if (t < q) return t;
    }
    y = y * stride;
  }
  return std::nullopt;
}

}  // namespace

std::uint64_t multiplicative_order(const ExtFieldElement& a) {
  if (a.is_zero()) throw DomainError("multiplicative_order: zero is not a unit");
  const ExtField& fld = *a.field();
  const std::uint64_t group = unit_order_or_throw(fld.characteristic(), fld.degree(),
                                                  "multiplicative_order");
  if (group == 0) return 1;
  std::uint64_t d = group;
  for (const auto& [q, e] : factorize(group)) {
    for (std::uint32_t i = 0; i < e && d % q == 0; ++i) {
      if (a.pow(d / q).is_one()) {
        d /= q;
      } else {
        break;
      }
    }
  }
  return d;
}

std::optional<std::uint64_t> dlog(const ExtFieldElement& base,
                                  const ExtFieldElement& value) {
  require_same_field(base, value, "dlog");
  if (base.is_zero() || value.is_zero()) {
    throw DomainError("dlog: arguments must be units");
  }
  const std::uint64_t d = multiplicative_order(base);
  if (!value.pow(d).is_one()) return std::nullopt;  // outside <base>
  if (d == 1) return 0;

  // Pohlig-Hellman digit lifting per prime power, combined by CRT.
  std::uint64_t result = 0;
  std::uint64_t modulus = 1;
  for (const auto& [q, e] : factorize(d)) {
    std::uint64_t qe = 1;
    for (std::uint32_t i = 0; i < e; ++i) qe *= q;

    const ExtFieldElement gamma = base.pow(d / q);  // order exactly q
    const ExtFieldElement base_inv = base.inverse();
    std::uint64_t x_qe = 0;
    std::uint64_t qj = 1;  // q^j
    for (std::uint32_t j = 0; j < e; ++j) {
      ExtFieldElement h = (value * base_inv.pow(x_qe)).pow(d / (qj * q));
      auto digit = bsgs(gamma, h, q);
      if (!digit) return std::nullopt;
      x_qe += *digit * qj;
      qj *= q;
    }

    // CRT fold: result mod modulus, x_qe mod qe.
    if (modulus == 1) {
      result = x_qe;
      modulus = qe;
    } else {
      std::uint64_t diff = x_qe >= result % qe ? x_qe - result % qe
                                               : x_qe + qe - result % qe;
      std::uint64_t t = mul_mod_u64(diff, inv_mod_u64(modulus % qe, qe), qe);
      result += modulus * t;
      modulus *= qe;
    }
  }
  return result;
}

}  // namespace lchca
