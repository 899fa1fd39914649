#include "lchca/matfp.hpp"

#include <algorithm>
#include <sstream>

namespace lchca {

MatrixFp::MatrixFp(Prime p, std::uint32_t rows, std::uint32_t cols)
    : p_(p), rows_(rows), cols_(cols), e_(std::size_t{rows} * cols, 0) {
  if (rows == 0 || cols == 0) throw DomainError("MatrixFp: empty dimensions");
}

MatrixFp MatrixFp::identity(Prime p, std::uint32_t n) {
  MatrixFp m(p, n, n);
  for (std::uint32_t i = 0; i < n; ++i) m.e_[std::size_t{i} * n + i] = 1;
  return m;
}

MatrixFp MatrixFp::from_rows(Prime p,
                             const std::vector<std::vector<std::uint32_t>>& rows) {
  if (rows.empty() || rows[0].empty()) throw DomainError("MatrixFp: empty rows");
  MatrixFp m(p, static_cast<std::uint32_t>(rows.size()),
             static_cast<std::uint32_t>(rows[0].size()));
  for (std::uint32_t r = 0; r < m.rows_; ++r) {
    if (rows[r].size() != m.cols_) throw DomainError("MatrixFp: ragged rows");
    for (std::uint32_t c = 0; c < m.cols_; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

void MatrixFp::set(std::uint32_t r, std::uint32_t c, std::uint32_t v) {
  if (v >= p_.value()) throw DomainError("MatrixFp::set: entry not reduced");
  e_[std::size_t{r} * cols_ + c] = v;
}

MatrixFp operator*(const MatrixFp& a, const MatrixFp& b) {
  if (a.p_ != b.p_) throw DomainError("mat mul: mismatched moduli");
  if (a.cols_ != b.rows_) throw DomainError("mat mul: dimension mismatch");
  const std::uint64_t p = a.p_.value();
  MatrixFp r(a.p_, a.rows_, b.cols_);
  for (std::uint32_t i = 0; i < a.rows_; ++i) {
    for (std::uint32_t k = 0; k < a.cols_; ++k) {
      const std::uint64_t aik = a(i, k);
      if (aik == 0) continue;
      const std::size_t arow = std::size_t{i} * b.cols_;
      const std::size_t brow = std::size_t{k} * b.cols_;
      for (std::uint32_t j = 0; j < b.cols_; ++j) {
        r.e_[arow + j] = static_cast<std::uint32_t>(
            (r.e_[arow + j] + aik * b.e_[brow + j]) % p);
      }
    }
  }
  return r;
}

MatrixFp operator+(const MatrixFp& a, const MatrixFp& b) {
  if (a.p_ != b.p_) throw DomainError("mat add: mismatched moduli");
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw DomainError("mat add: dimension mismatch");
  }
  MatrixFp r(a.p_, a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.e_.size(); ++i) {
    r.e_[i] = fp_add(a.e_[i], b.e_[i], a.p_);
  }
  return r;
}

std::string MatrixFp::to_string() const {
  std::ostringstream os;
  os << p_.value() << ':' << rows_ << 'x' << cols_ << ':';
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i) os << ',';
    os << e_[i];
  }
  return os.str();
}

MatrixFp MatrixFp::parse(std::string_view text) {
  auto c1 = text.find(':');
  auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) {
    throw ParseError("MatrixFp::parse: expected p:RxC:entries");
  }
  std::string head(text.substr(0, c1));
  std::string dims(text.substr(c1 + 1, c2 - c1 - 1));
  std::string body(text.substr(c2 + 1));

  dims.erase(std::remove(dims.begin(), dims.end(), ' '), dims.end());
  auto xpos = dims.find('x');
  if (xpos == std::string::npos) throw ParseError("MatrixFp::parse: bad dimensions");

  auto parse_u32 = [](const std::string& s, const char* what) -> std::uint32_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError(std::string("MatrixFp::parse: bad ") + what);
    }
    unsigned long long v = std::stoull(s);
    if (v > 0xffffffffULL) throw ParseError(std::string("MatrixFp::parse: bad ") + what);
    return static_cast<std::uint32_t>(v);
  };

  std::uint32_t p_raw = parse_u32(head, "modulus");
  std::uint32_t rows = parse_u32(dims.substr(0, xpos), "row count");
  std::uint32_t cols = parse_u32(dims.substr(xpos + 1), "column count");
  if (!is_prime_u64(p_raw)) throw ParseError("MatrixFp::parse: modulus is not prime");
  if (rows == 0 || cols == 0) throw ParseError("MatrixFp::parse: empty dimensions");

  Prime p(p_raw);
  MatrixFp m(p, rows, cols);
  std::istringstream is(body);
  std::string tok;
  std::size_t idx = 0;
  while (std::getline(is, tok, ',')) {
    if (idx >= m.e_.size()) throw ParseError("MatrixFp::parse: too many entries");
    std::uint32_t v = parse_u32(tok, "entry");
    if (v >= p.value()) throw ParseError("MatrixFp::parse: entry not reduced");
    m.e_[idx++] = v;
  }
  if (idx != m.e_.size()) throw ParseError("MatrixFp::parse: too few entries");
  return m;
}

MatrixFp companion_matrix(const Polynomial& f) {
  if (!f.is_monic() || f.degree() < 1) {
    throw DomainError("companion_matrix: polynomial must be monic of degree >= 1");
  }
  const auto n = static_cast<std::uint32_t>(f.degree());
  Prime p = f.modulus();
  MatrixFp m(p, n, n);
  for (std::uint32_t j = 0; j + 1 < n; ++j) m.set(j + 1, j, 1);
  for (std::uint32_t i = 0; i < n; ++i) m.set(i, n - 1, fp_neg(f.coeff(i), p));
  return m;
}

std::vector<std::uint32_t> mat_vec(const MatrixFp& m, std::span<const std::uint32_t> v) {
  if (v.size() != m.cols()) throw DomainError("mat_vec: length mismatch");
  const std::uint64_t p = m.modulus().value();
  std::vector<std::uint32_t> out(m.rows(), 0);
  for (std::uint32_t i = 0; i < m.rows(); ++i) {
    std::uint64_t acc = 0;
    for (std::uint32_t j = 0; j < m.cols(); ++j) {
      acc = (acc + std::uint64_t{m(i, j)} * v[j]) % p;
    }
    out[i] = static_cast<std::uint32_t>(acc);
  }
  return out;
}

MatrixFp mat_pow_counted(const MatrixFp& m, std::uint64_t e, std::uint64_t& mults) {
  if (!m.is_square()) throw DomainError("mat_pow: matrix must be square");
  mults = 0;
  MatrixFp result = MatrixFp::identity(m.modulus(), m.rows());
  if (e == 0) return result;
  MatrixFp base = m;
  bool result_is_identity = true;
  while (true) {
    if (e & 1) {
      if (result_is_identity) {
        result = base;
        result_is_identity = false;
      } else {
        result = result * base;
        ++mults;
      }
    }
    e >>= 1;
    if (e == 0) break;
    base = base * base;
    ++mults;
  }
  return result;
}

MatrixFp mat_pow(const MatrixFp& m, std::uint64_t e) {
  std::uint64_t ignored = 0;
  return mat_pow_counted(m, e, ignored);
}

namespace {

// Forward elimination to row echelon form on an augmented matrix
// (width = n + extra). Returns the rank of the left n columns.
std::uint32_t echelon(std::vector<std::vector<std::uint32_t>>& rows, std::uint32_t n,
                      Prime p) {
  const std::uint32_t height = static_cast<std::uint32_t>(rows.size());
  std::uint32_t rank = 0;
  for (std::uint32_t col = 0; col < n && rank < height; ++col) {
    std::uint32_t pivot = rank;
    while (pivot < height && rows[pivot][col] == 0) ++pivot;
    if (pivot == height) continue;
    std::swap(rows[rank], rows[pivot]);
    const std::uint32_t inv = fp_inv(rows[rank][col], p);
    for (std::size_t j = col; j < rows[rank].size(); ++j) {
      rows[rank][j] = fp_mul(rows[rank][j], inv, p);
    }
    for (std::uint32_t r = 0; r < height; ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const std::uint32_t factor = rows[r][col];
      for (std::size_t j = col; j < rows[r].size(); ++j) {
        rows[r][j] = fp_sub(rows[r][j], fp_mul(factor, rows[rank][j], p), p);
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::vector<std::uint32_t> gauss_solve(const MatrixFp& a, std::span<const std::uint32_t> b) {
  if (!a.is_square()) throw DomainError("gauss_solve: matrix must be square");
  if (b.size() != a.rows()) throw DomainError("gauss_solve: length mismatch");
  const std::uint32_t n = a.rows();
  Prime p = a.modulus();
  std::vector<std::vector<std::uint32_t>> rows(n, std::vector<std::uint32_t>(n + 1, 0));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) rows[i][j] = a(i, j);
    rows[i][n] = b[i];
  }
  const std::uint32_t rank = echelon(rows, n, p);
  if (rank < n) {
    throw SingularMatrixError("gauss_solve: singular matrix", rank);
  }
  // echelon() produced reduced row echelon form, so the solution is the
  // last column read off pivot rows (pivot i sits in column i here).
  std::vector<std::uint32_t> x(n, 0);
  for (std::uint32_t i = 0; i < n; ++i) x[i] = rows[i][n];
  return x;
}

MatrixFp mat_inv(const MatrixFp& a) {
  if (!a.is_square()) throw DomainError("mat_inv: matrix must be square");
  const std::uint32_t n = a.rows();
  Prime p = a.modulus();
  std::vector<std::vector<std::uint32_t>> rows(n, std::vector<std::uint32_t>(2 * n, 0));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) rows[i][j] = a(i, j);
    rows[i][n + i] = 1;
  }
  const std::uint32_t rank = echelon(rows, n, p);
  if (rank < n) throw SingularMatrixError("mat_inv: singular matrix", rank);
  MatrixFp inv(p, n, n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) inv.set(i, j, rows[i][n + j]);
  }
  return inv;
}

Polynomial char_poly(const MatrixFp& m) {
  if (!m.is_square()) throw DomainError("char_poly: matrix must be square");
  const std::uint32_t n = m.rows();
  Prime p = m.modulus();

  // Similarity reduction to upper Hessenberg form with exact pivoting.
  std::vector<std::vector<std::uint32_t>> h(n, std::vector<std::uint32_t>(n));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) h[i][j] = m(i, j);
  }
  for (std::uint32_t col = 0; col + 2 < n; ++col) {
    std::uint32_t pivot = col + 1;
    while (pivot < n && h[pivot][col] == 0) ++pivot;
    if (pivot == n) continue;
    if (pivot != col + 1) {
      std::swap(h[pivot], h[col + 1]);
      for (std::uint32_t r = 0; r < n; ++r) std::swap(h[r][pivot], h[r][col + 1]);
    }
    const std::uint32_t inv = fp_inv(h[col + 1][col], p);
    for (std::uint32_t row = col + 2; row < n; ++row) {
      if (h[row][col] == 0) continue;
      const std::uint32_t factor = fp_mul(h[row][col], inv, p);
      for (std::uint32_t j = col; j < n; ++j) {
        h[row][j] = fp_sub(h[row][j], fp_mul(factor, h[col + 1][j], p), p);
      }
      // keep M similar: column col+1 += factor * column row
      for (std::uint32_t r = 0; r < n; ++r) {
        h[r][col + 1] = fp_add(h[r][col + 1], fp_mul(factor, h[r][row], p), p);
      }
    }
  }

  // Leading-minor recurrence for Hessenberg matrices:
  // p_k = (x - h[k-1][k-1]) p_{k-1}
  //       - sum_{i=1}^{k-1} h[i-1][k-1] (prod_{j=i}^{k-1} h[j][j-1]) p_{i-1}
  std::vector<Polynomial> minors;
  minors.reserve(n + 1);
  minors.push_back(Polynomial::one(p));
  const Polynomial x = Polynomial::x(p);
  for (std::uint32_t k = 1; k <= n; ++k) {
    Polynomial pk = (x - Polynomial::constant(p, h[k - 1][k - 1])) * minors[k - 1];
    std::uint32_t subdiag = 1;  // running product of subdiagonal entries
    for (std::uint32_t i = k - 1; i >= 1; --i) {
      subdiag = fp_mul(subdiag, h[i][i - 1], p);
      if (subdiag == 0) break;
      const std::uint32_t w = fp_mul(h[i - 1][k - 1], subdiag, p);
      if (w != 0) pk = pk - minors[i - 1] * w;
    }
    minors.push_back(std::move(pk));
  }
  return minors[n];
}

std::uint64_t mat_order(const MatrixFp& m) {
  Polynomial f = char_poly(m);
  if (!is_irreducible(f)) {
    throw UnsupportedError("mat_order: characteristic polynomial is reducible");
  }
  const std::uint32_t n = m.rows();
  auto pn = checked_pow_u64(m.modulus().value(), n);
  if (!pn || *pn - 1 > kMaxGroupOrder) {
    throw CapacityError("mat_order: group order exceeds the 2^48 cap");
  }
  const std::uint64_t group = *pn - 1;
  const MatrixFp ident = MatrixFp::identity(m.modulus(), n);
  std::uint64_t d = group;
  for (const auto& [q, e] : factorize(group)) {
    for (std::uint32_t i = 0; i < e && d % q == 0; ++i) {
      if (mat_pow(m, d / q) == ident) {
        d /= q;
      } else {
        break;
      }
    }
  }
  return d;
}

MatrixExt::MatrixExt(ExtFieldPtr field, std::uint32_t rows, std::uint32_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) throw DomainError("MatrixExt: empty dimensions");
  e_.reserve(std::size_t{rows} * cols);
  for (std::size_t i = 0; i < std::size_t{rows} * cols; ++i) e_.push_back(field_->zero());
}

MatrixExt MatrixExt::identity(const ExtFieldPtr& field, std::uint32_t n) {
  MatrixExt m(field, n, n);
  for (std::uint32_t i = 0; i < n; ++i) m.set(i, i, field->one());
  return m;
}

void MatrixExt::set(std::uint32_t r, std::uint32_t c, ExtFieldElement v) {
  if (!v.field()->same(*field_)) throw DomainError("MatrixExt::set: wrong field");
  e_[std::size_t{r} * cols_ + c] = std::move(v);
}

MatrixExt operator*(const MatrixExt& a, const MatrixExt& b) {
  if (!a.field_->same(*b.field_)) throw DomainError("ext mat mul: mismatched fields");
  if (a.cols_ != b.rows_) throw DomainError("ext mat mul: dimension mismatch");
  MatrixExt r(a.field_, a.rows_, b.cols_);
  for (std::uint32_t i = 0; i < a.rows_; ++i) {
    for (std::uint32_t k = 0; k < a.cols_; ++k) {
      const ExtFieldElement& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::uint32_t j = 0; j < b.cols_; ++j) {
        if (b(k, j).is_zero()) continue;
        r.set(i, j, r(i, j) + aik * b(k, j));
      }
    }
  }
  return r;
}

bool operator==(const MatrixExt& a, const MatrixExt& b) {
  if (!a.field_->same(*b.field_) || a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    return false;
  }
  for (std::size_t i = 0; i < a.e_.size(); ++i) {
    if (!(a.e_[i] == b.e_[i])) return false;
  }
  return true;
}

MatrixExt lift(const MatrixFp& m, const ExtFieldPtr& field) {
  if (m.modulus() != field->characteristic()) {
    throw DomainError("lift: characteristic mismatch");
  }
  MatrixExt r(field, m.rows(), m.cols());
  for (std::uint32_t i = 0; i < m.rows(); ++i) {
    for (std::uint32_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0) r.set(i, j, field->element({m(i, j)}));
    }
  }
  return r;
}

std::vector<ExtFieldElement> lift_vec(std::span<const std::uint32_t> v,
                                      const ExtFieldPtr& field) {
  std::vector<ExtFieldElement> out;
  out.reserve(v.size());
  for (std::uint32_t d : v) out.push_back(field->element({d}));
  return out;
}

std::vector<ExtFieldElement> mat_vec(const MatrixExt& m,
                                     std::span<const ExtFieldElement> v) {
  if (v.size() != m.cols()) throw DomainError("ext mat_vec: length mismatch");
  std::vector<ExtFieldElement> out;
  out.reserve(m.rows());
  for (std::uint32_t i = 0; i < m.rows(); ++i) {
    ExtFieldElement acc = m.field()->zero();
    for (std::uint32_t j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_zero() && !v[j].is_zero()) acc = acc + m(i, j) * v[j];
    }
    out.push_back(std::move(acc));
  }
  return out;
}

namespace {

std::uint32_t ext_echelon(std::vector<std::vector<ExtFieldElement>>& rows,
                          std::uint32_t n) {
  const std::uint32_t height = static_cast<std::uint32_t>(rows.size());
  std::uint32_t rank = 0;
  for (std::uint32_t col = 0; col < n && rank < height; ++col) {
    std::uint32_t pivot = rank;
    while (pivot < height && rows[pivot][col].is_zero()) ++pivot;
    if (pivot == height) continue;
    std::swap(rows[rank], rows[pivot]);
    const ExtFieldElement inv = rows[rank][col].inverse();
    for (std::size_t j = col; j < rows[rank].size(); ++j) {
      rows[rank][j] = rows[rank][j] * inv;
    }
    for (std::uint32_t r = 0; r < height; ++r) {
      if (r == rank || rows[r][col].is_zero()) continue;
      const ExtFieldElement factor = rows[r][col];
      for (std::size_t j = col; j < rows[r].size(); ++j) {
        rows[r][j] = rows[r][j] - factor * rows[rank][j];
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::vector<ExtFieldElement> gauss_solve(const MatrixExt& a,
                                         std::span<const ExtFieldElement> b) {
  if (a.rows() != a.cols()) throw DomainError("ext gauss_solve: matrix must be square");
  if (b.size() != a.rows()) throw DomainError("ext gauss_solve: length mismatch");
  const std::uint32_t n = a.rows();
  std::vector<std::vector<ExtFieldElement>> rows;
  rows.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::vector<ExtFieldElement> row;
    row.reserve(n + 1);
    for (std::uint32_t j = 0; j < n; ++j) row.push_back(a(i, j));
    row.push_back(b[i]);
    rows.push_back(std::move(row));
  }
  const std::uint32_t rank = ext_echelon(rows, n);
  if (rank < n) throw SingularMatrixError("ext gauss_solve: singular matrix", rank);
  std::vector<ExtFieldElement> x;
  x.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) x.push_back(rows[i][n]);
  return x;
}

MatrixExt mat_inv(const MatrixExt& a) {
  if (a.rows() != a.cols()) throw DomainError("ext mat_inv: matrix must be square");
  const std::uint32_t n = a.rows();
  std::vector<std::vector<ExtFieldElement>> rows;
  rows.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::vector<ExtFieldElement> row;
    row.reserve(2 * n);
    for (std::uint32_t j = 0; j < n; ++j) row.push_back(a(i, j));
    for (std::uint32_t j = 0; j < n; ++j) {
      row.push_back(i == j ? a.field()->one() : a.field()->zero());
    }
    rows.push_back(std::move(row));
  }
  const std::uint32_t rank = ext_echelon(rows, n);
  if (rank < n) throw SingularMatrixError("ext mat_inv: singular matrix", rank);
  MatrixExt inv(a.field(), n, n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) inv.set(i, j, rows[i][n + j]);
  }
  return inv;
}

std::vector<ExtFieldElement> null_space_vector(const MatrixExt& a) {
  if (a.rows() != a.cols()) throw DomainError("null_space_vector: matrix must be square");
  const std::uint32_t n = a.rows();
  std::vector<std::vector<ExtFieldElement>> rows;
  rows.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::vector<ExtFieldElement> row;
    row.reserve(n);
    for (std::uint32_t j = 0; j < n; ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  ext_echelon(rows, n);

  // Locate pivot columns of the reduced form.
  std::vector<int> pivot_of_col(n, -1);
  std::uint32_t r = 0;
  for (std::uint32_t c = 0; c < n && r < n; ++c) {
    if (!rows[r][c].is_zero()) {
      pivot_of_col[c] = static_cast<int>(r);
      ++r;
    }
  }
  std::uint32_t free_col = n;
  for (std::uint32_t c = 0; c < n; ++c) {
    if (pivot_of_col[c] < 0) {
      free_col = c;
      break;
    }
  }
  if (free_col == n) throw DomainError("null_space_vector: trivial kernel");

  std::vector<ExtFieldElement> v;
  v.reserve(n);
  for (std::uint32_t c = 0; c < n; ++c) v.push_back(a.field()->zero());
  v[free_col] = a.field()->one();
  for (std::uint32_t c = 0; c < n; ++c) {
    if (pivot_of_col[c] >= 0) {
      const auto& row = rows[static_cast<std::uint32_t>(pivot_of_col[c])];
      v[c] = a.field()->zero() - row[free_col];
    }
  }
  // Scale so the first nonzero entry is 1.
  for (std::uint32_t c = 0; c < n; ++c) {
    if (!v[c].is_zero()) {
      const ExtFieldElement inv = v[c].inverse();
      for (auto& entry : v) entry = entry * inv;
      break;
    }
  }
  return v;
}

}  // namespace lchca
