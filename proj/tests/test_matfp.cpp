#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lchca/matfp.hpp"
#include "oracles.hpp"

using namespace lchca;

namespace {

MatrixFp from_oracle(Prime p, const oracle::Mat& rows) {
  std::vector<std::vector<std::uint32_t>> r;
  for (const auto& row : rows) r.emplace_back(row.begin(), row.end());
  return MatrixFp::from_rows(p, r);
}

oracle::Mat to_oracle(const MatrixFp& m) {
  oracle::Mat rows(m.rows(), std::vector<long long>(m.cols()));
  for (std::uint32_t i = 0; i < m.rows(); ++i) {
    for (std::uint32_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  }
  return rows;
}

MatrixFp random_invertible(Prime p, std::uint32_t n, SplitMix64& rng) {
  for (;;) {
    MatrixFp m(p, n, n);
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = 0; j < n; ++j) {
        m.set(i, j, static_cast<std::uint32_t>(rng.below(p.value())));
      }
    }
    try {
      mat_inv(m);
      return m;
    } catch (const SingularMatrixError&) {
    }
  }
}

const Prime p2{2};

}  // namespace

TEST_CASE("matrix multiplication") {
  MatrixFp b = from_oracle(p2, {{1, 0}, {1, 1}});
  CHECK(MatrixFp::identity(p2, 2) * b == b);

  MatrixFp a = from_oracle(p2, {{1, 1}, {0, 1}});
  // hand-multiplication oracle
  CHECK(from_oracle(p2, oracle::mat_mul(to_oracle(a), to_oracle(b), 2)) ==
        from_oracle(p2, {{0, 1}, {1, 1}}));
  CHECK(a * b == from_oracle(p2, {{0, 1}, {1, 1}}));

  MatrixFp r23(p2, 2, 3);
  CHECK_THROWS_AS(r23 * r23, DomainError);
}

TEST_CASE("matrix exponentiation") {
  Polynomial f(p2, {1, 1, 0, 0, 1});
  MatrixFp m = companion_matrix(f);

  CHECK(mat_pow(m, 0) == MatrixFp::identity(p2, 4));

  // repeated-multiplication oracle
  MatrixFp acc = MatrixFp::identity(p2, 4);
  for (int i = 0; i < 15; ++i) acc = acc * m;
  CHECK(acc == MatrixFp::identity(p2, 4));
  CHECK(mat_pow(m, 15) == MatrixFp::identity(p2, 4));

  std::vector<std::uint32_t> e0{1, 0, 0, 0};
  std::vector<std::uint32_t> v = e0;
  for (int i = 0; i < 4; ++i) v = mat_vec(m, v);  // repeated mat-vec oracle
  CHECK(v == std::vector<std::uint32_t>{1, 1, 0, 0});
  CHECK(mat_vec(mat_pow(m, 4), e0) == v);

  CHECK_THROWS_AS(mat_pow(MatrixFp(p2, 2, 3), 2), DomainError);
}

TEST_CASE("mat_pow is additive in the exponent") {
  SplitMix64 rng(21);
  MatrixFp m = companion_matrix(find_irreducible(Prime(3), 3, false, 5));
  for (int i = 0; i < 20; ++i) {
    const std::uint64_t a = rng.below(1 << 20);
    const std::uint64_t b = rng.below(1 << 20);
    CHECK(mat_pow(m, a + b) == mat_pow(m, a) * mat_pow(m, b));
  }
}

TEST_CASE("gauss_solve") {
  Prime p3(3), p5(5);
  std::vector<std::uint32_t> b{2, 1};
  CHECK(gauss_solve(MatrixFp::identity(p3, 2), b) == b);

  // over F_3 the rows (1,2) and (2,1) are proportional (row1 = 2*row0) and
  // (1,0) is inconsistent with that: exhaustive oracle over all 9 vectors
  MatrixFp a3 = from_oracle(p3, {{1, 2}, {2, 1}});
  bool any_solution = false;
  for (std::uint32_t x0 = 0; x0 < 3; ++x0) {
    for (std::uint32_t x1 = 0; x1 < 3; ++x1) {
      std::vector<std::uint32_t> x{x0, x1};
      if (mat_vec(a3, x) == std::vector<std::uint32_t>{1, 0}) any_solution = true;
    }
  }
  CHECK_FALSE(any_solution);
  CHECK_THROWS_AS(gauss_solve(a3, std::vector<std::uint32_t>{1, 0}), SingularMatrixError);
  try {
    gauss_solve(a3, std::vector<std::uint32_t>{1, 0});
  } catch (const SingularMatrixError& e) {
    CHECK(e.rank() == 1);
  }

  // the same matrix is invertible over F_5; oracle: enumerate all 25 vectors
  MatrixFp a5 = from_oracle(p5, {{1, 2}, {2, 1}});
  std::vector<std::uint32_t> expected;
  for (std::uint32_t x0 = 0; x0 < 5; ++x0) {
    for (std::uint32_t x1 = 0; x1 < 5; ++x1) {
      std::vector<std::uint32_t> x{x0, x1};
      if (mat_vec(a5, x) == std::vector<std::uint32_t>{1, 0}) expected = x;
    }
  }
  CHECK(expected == std::vector<std::uint32_t>{3, 4});
  std::vector<std::uint32_t> solved = gauss_solve(a5, std::vector<std::uint32_t>{1, 0});
  CHECK(solved == expected);
  CHECK(mat_vec(a5, solved) == std::vector<std::uint32_t>{1, 0});  // substitution

  MatrixFp ones = from_oracle(p2, {{1, 1}, {1, 1}});
  CHECK_THROWS_AS(gauss_solve(ones, std::vector<std::uint32_t>{1, 0}),
                  SingularMatrixError);
}

TEST_CASE("mat_inv") {
  CHECK(mat_inv(MatrixFp::identity(p2, 3)) == MatrixFp::identity(p2, 3));

  MatrixFp m = companion_matrix(Polynomial(p2, {1, 1, 0, 0, 1}));
  CHECK(m * mat_inv(m) == MatrixFp::identity(p2, 4));

  CHECK_THROWS_AS(mat_inv(MatrixFp(p2, 3, 3)), SingularMatrixError);
}

TEST_CASE("char_poly") {
  // companion-matrix property for random monic polynomials
  SplitMix64 rng(31);
  for (std::uint32_t pv : {2u, 3u, 5u}) {
    Prime p(pv);
    for (int i = 0; i < 10; ++i) {
      std::vector<std::uint32_t> c(rng.below(5) + 2);
      for (auto& d : c) d = static_cast<std::uint32_t>(rng.below(pv));
      c.back() = 1;
      Polynomial f(p, std::move(c));
      CHECK(char_poly(companion_matrix(f)) == f);
    }
  }

  CHECK(char_poly(MatrixFp::identity(p2, 2)) == Polynomial(p2, {1, 0, 1}));

  // cofactor-expansion oracle on the 4x4 with rows (0001, 1001, 0100, 0010)
  oracle::Mat rows{{0, 0, 0, 1}, {1, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 1, 0}};
  oracle::Poly expected = oracle::char_poly(rows, 2);
  CHECK(expected == oracle::Poly{1, 1, 0, 0, 1});
  CHECK(char_poly(from_oracle(p2, rows)) == Polynomial(p2, {1, 1, 0, 0, 1}));
}

TEST_CASE("char_poly is a similarity invariant and annihilates its matrix") {
  SplitMix64 rng(77);
  for (std::uint32_t pv : {2u, 5u}) {
    Prime p(pv);
    for (int i = 0; i < 8; ++i) {
      MatrixFp m(p, 4, 4);
      for (std::uint32_t r = 0; r < 4; ++r) {
        for (std::uint32_t c = 0; c < 4; ++c) {
          m.set(r, c, static_cast<std::uint32_t>(rng.below(pv)));
        }
      }
      MatrixFp t = random_invertible(p, 4, rng);
      CHECK(char_poly(t * m * mat_inv(t)) == char_poly(m));

      // Cayley-Hamilton: evaluate the characteristic polynomial at M
      Polynomial f = char_poly(m);
      MatrixFp acc(p, 4, 4);
      MatrixFp power = MatrixFp::identity(p, 4);
      for (int d = 0; d <= f.degree(); ++d) {
        if (f.coeff(d) != 0) {
          MatrixFp scaled(p, 4, 4);
          for (std::uint32_t r = 0; r < 4; ++r) {
            for (std::uint32_t c = 0; c < 4; ++c) {
              scaled.set(r, c, fp_mul(power(r, c), f.coeff(d), p));
            }
          }
          acc = acc + scaled;
        }
        if (d < f.degree()) power = power * m;
      }
      CHECK(acc == MatrixFp(p, 4, 4));
    }
  }
}

TEST_CASE("mat_order") {
  MatrixFp m = companion_matrix(Polynomial(p2, {1, 1, 0, 0, 1}));
  // repeated-multiplication oracle
  MatrixFp acc = m;
  std::uint64_t order = 1;
  while (acc != MatrixFp::identity(p2, 4)) {
    acc = acc * m;
    ++order;
  }
  CHECK(order == 15);
  CHECK(mat_order(m) == 15);

  MatrixFp g = companion_matrix(Polynomial(p2, {1, 1, 1, 1, 1}));
  CHECK(mat_order(g) == 5);

  CHECK_THROWS_AS(mat_order(MatrixFp::identity(p2, 2)), UnsupportedError);
}

TEST_CASE("mat_order divides the unit group order") {
  SplitMix64 rng(11);
  for (std::uint32_t pv : {2u, 3u, 5u}) {
    for (std::uint32_t n = 2; n <= 4; ++n) {
      Polynomial f = find_irreducible(Prime(pv), n, false, rng.next());
      std::uint64_t group = 1;
      for (std::uint32_t i = 0; i < n; ++i) group *= pv;
      CHECK((group - 1) % mat_order(companion_matrix(f)) == 0);
    }
  }
}

TEST_CASE("matrix wire format") {
  MatrixFp m = companion_matrix(Polynomial(p2, {1, 1, 0, 0, 1}));
  CHECK(m.to_string() == "2:4x4:0,0,0,1,1,0,0,1,0,1,0,0,0,0,1,0");
  CHECK(MatrixFp::parse(m.to_string()) == m);
  CHECK_THROWS_AS(MatrixFp::parse("2:2x2:0,1,1"), ParseError);      // too few
  CHECK_THROWS_AS(MatrixFp::parse("2:2x2:0,1,1,2"), ParseError);    // unreduced
  CHECK_THROWS_AS(MatrixFp::parse("6:2x2:0,1,1,0"), ParseError);    // not prime
  CHECK_THROWS_AS(MatrixFp::parse("2:2x2"), ParseError);
}

TEST_CASE("extension-field linear algebra") {
  auto field = ExtField::make(Polynomial(p2, {1, 1, 0, 0, 1}));
  MatrixExt id = MatrixExt::identity(field, 3);
  CHECK(id * id == id);

  // invert a lifted companion matrix and check the product
  MatrixExt m = lift(companion_matrix(Polynomial(p2, {1, 1, 0, 0, 1})), field);
  CHECK(m * mat_inv(m) == MatrixExt::identity(field, 4));

  std::vector<ExtFieldElement> b{field->gen(), field->one(), field->zero(),
                                 field->gen().pow(3)};
  auto x = gauss_solve(m, b);
  auto back = mat_vec(m, x);
  for (int i = 0; i < 4; ++i) CHECK(back[i] == b[i]);

  CHECK_THROWS_AS(mat_inv(MatrixExt(field, 2, 2)), SingularMatrixError);
}
