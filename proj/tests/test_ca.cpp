#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "lchca/ca.hpp"

using namespace lchca;

namespace {

const Prime p2{2};

Lchca max_length_ca() {
  return Lchca::from_matrix(companion_matrix(Polynomial(p2, {1, 1, 0, 0, 1})));
}

Lchca group_ca() {
  return Lchca::from_matrix(companion_matrix(Polynomial(p2, {1, 1, 1, 1, 1})));
}

}  // namespace

TEST_CASE("configuration strings") {
  CHECK(config_to_string(p2, {1, 1, 0, 0}) == "1100");
  CHECK(parse_configuration(p2, "1100") == Configuration{1, 1, 0, 0});
  CHECK(parse_configuration(p2, "1,1,0,0") == Configuration{1, 1, 0, 0});

  Prime p13(13);
  Configuration big{12, 0, 7};
  CHECK(config_to_string(p13, big) == "12,0,7");
  CHECK(parse_configuration(p13, "12,0,7") == big);
  CHECK_THROWS_AS(parse_configuration(p13, "1207"), ParseError);  // commas required

  CHECK_THROWS_AS(parse_configuration(p2, "1021"), ParseError);   // unreduced digit
  CHECK_THROWS_AS(parse_configuration(p2, "10a1"), ParseError);
  CHECK_THROWS_AS(parse_configuration(p2, ""), ParseError);
  CHECK_THROWS_AS(parse_configuration(p2, "110", 4), ParseError);  // wrong length
}

TEST_CASE("build_matrix") {
  SUBCASE("single cell") {
    RuleSpec spec{p2, 1, {0}, {{{0, 1}}}};
    MatrixFp m = build_matrix(spec);
    CHECK(m.rows() == 1);
    CHECK(m(0, 0) == 1);
  }

  SUBCASE("rule-90 style tridiagonal with null boundary") {
    RuleSpec spec{p2, 4, {-1, 0, 1}, {}};
    spec.weights.assign(4, {{-1, 1}, {0, 0}, {1, 1}});
    MatrixFp m = build_matrix(spec);
    for (std::uint32_t i = 0; i < 4; ++i) {
      for (std::uint32_t j = 0; j < 4; ++j) {
        const std::uint32_t expected = (j + 1 == i || j == i + 1) ? 1 : 0;
        CHECK(m(i, j) == expected);
      }
    }
  }

  SUBCASE("offset outside the declared neighborhood") {
    RuleSpec spec{p2, 2, {0}, {{{0, 1}}, {{1, 1}}}};
    CHECK_THROWS_AS(build_matrix(spec), DomainError);
  }

  SUBCASE("a 90/150 diagonal pattern realizes x^4 + x + 1") {
    // search all 16 diagonal patterns of the tridiagonal family
    const Polynomial target(p2, {1, 1, 0, 0, 1});
    int hits = 0;
    for (std::uint32_t mask = 0; mask < 16; ++mask) {
      RuleSpec spec{p2, 4, {-1, 0, 1}, {}};
      for (std::uint32_t i = 0; i < 4; ++i) {
        spec.weights.push_back({{-1, 1}, {0, (mask >> i) & 1}, {1, 1}});
      }
      if (char_poly(build_matrix(spec)) == target) ++hits;
    }
    CHECK(hits > 0);
  }
}

TEST_CASE("step") {
  Lchca ca = max_length_ca();
  CHECK(ca.step({0, 0, 0, 0}) == Configuration{0, 0, 0, 0});  // dead configuration
  // hand mat-vec: column 0 of the companion matrix is e1
  CHECK(ca.step({1, 0, 0, 0}) == Configuration{0, 1, 0, 0});
  CHECK_THROWS_AS(ca.step({1, 0}), DomainError);

  // step agrees with the dense matrix product on random states
  SplitMix64 rng(3);
  for (int i = 0; i < 50; ++i) {
    Configuration s(4);
    for (auto& d : s) d = static_cast<std::uint32_t>(rng.below(2));
    CHECK(ca.step(s) == mat_vec(ca.matrix(), s));
  }
}

TEST_CASE("step is linear") {
  Prime p5(5);
  Lchca ca = Lchca::from_matrix(companion_matrix(find_irreducible(p5, 4, false, 2)));
  SplitMix64 rng(4);
  for (int i = 0; i < 100; ++i) {
    Configuration a(4), b(4);
    for (auto& d : a) d = static_cast<std::uint32_t>(rng.below(5));
    for (auto& d : b) d = static_cast<std::uint32_t>(rng.below(5));
    const std::uint32_t c = static_cast<std::uint32_t>(rng.below(5));

    Configuration sum(4), scaled(4);
    for (int j = 0; j < 4; ++j) {
      sum[j] = fp_add(a[j], b[j], p5);
      scaled[j] = fp_mul(c, a[j], p5);
    }
    Configuration lhs = ca.step(sum);
    Configuration rhs_a = ca.step(a), rhs_b = ca.step(b);
    for (int j = 0; j < 4; ++j) CHECK(lhs[j] == fp_add(rhs_a[j], rhs_b[j], p5));

    Configuration lhs2 = ca.step(scaled);
    for (int j = 0; j < 4; ++j) CHECK(lhs2[j] == fp_mul(c, rhs_a[j], p5));
  }
}

TEST_CASE("run") {
  Lchca ca = max_length_ca();
  Configuration s{1, 0, 0, 0};
  CHECK(ca.run(s, 0) == s);

  // iterated-step oracle
  Configuration v = s;
  for (int i = 0; i < 4; ++i) v = ca.step(v);
  CHECK(v == Configuration{1, 1, 0, 0});
  CHECK(ca.run(s, 4) == v);
  CHECK(ca.run(s, 15) == s);
}

TEST_CASE("classify") {
  CHECK(max_length_ca().classification() == CaClass::hybrid_max_length);
  CHECK(group_ca().classification() == CaClass::hybrid_group);
  CHECK(classify(MatrixFp::identity(p2, 2)) == CaClass::uniform);
}

TEST_CASE("cycle_length") {
  Lchca ml = max_length_ca();
  CHECK_FALSE(ml.cycle_length({0, 0, 0, 0}).has_value());

  // iterate oracle: every nonzero state returns after exactly 15 steps
  for (std::uint32_t idx = 1; idx < 16; ++idx) {
    Configuration s{idx >> 3 & 1, idx >> 2 & 1, idx >> 1 & 1, idx & 1};
    Configuration v = s;
    std::uint64_t k = 0;
    do {
      v = ml.step(v);
      ++k;
    } while (v != s);
    CHECK(k == 15);
    CHECK(ml.cycle_length(s) == k);
  }

  CHECK(group_ca().cycle_length(Configuration{1, 0, 0, 0}) == 5);
  Lchca uniform = Lchca::from_matrix(MatrixFp::identity(p2, 2));
  CHECK_THROWS_AS(uniform.cycle_length({1, 0}), UnsupportedError);
}

TEST_CASE("enumerate_cycles") {
  auto check_partition = [](const Lchca& ca, std::size_t count, std::uint64_t length) {
    auto cycles = ca.enumerate_cycles();
    REQUIRE(cycles.size() == count);
    std::uint64_t total = 0;
    std::set<std::string> reps;
    for (const auto& c : cycles) {
      CHECK(c.length == length);
      total += c.length;
      reps.insert(config_to_string(ca.modulus(), c.representative));
      // representative actually lies on a cycle of that length
      CHECK(ca.run(c.representative, c.length) == c.representative);
    }
    CHECK(reps.size() == count);
    std::uint64_t states = 1;
    for (std::uint32_t i = 0; i < ca.cells(); ++i) states *= ca.modulus().value();
    CHECK(total == states - 1);
  };

  check_partition(max_length_ca(), 1, 15);
  check_partition(group_ca(), 3, 5);

  // p = 3 irreducible quadratic with a non-primitive root: x^2 + 1 has
  // order-4 roots, so 8 / 4 = 2 cycles
  Prime p3(3);
  Lchca quad = Lchca::from_matrix(companion_matrix(Polynomial(p3, {1, 0, 1})));
  CHECK(quad.classification() == CaClass::hybrid_group);
  CHECK(quad.order() == 4);
  check_partition(quad, 2, 4);

  Lchca uniform = Lchca::from_matrix(MatrixFp::identity(p2, 2));
  CHECK_THROWS_AS(uniform.enumerate_cycles(), UnsupportedError);

  // full enumeration is capped at p^n <= 2^24
  Lchca big = Lchca::from_matrix(companion_matrix(find_irreducible(p2, 25, false, 1)));
  CHECK_THROWS_AS(big.enumerate_cycles(), CapacityError);
}

TEST_CASE("exact uniformity: fixed powers permute the state space") {
  // the map s -> M^tau s is a bijection, so over all inputs the image
  // multiset equals the whole space exactly
  for (std::uint32_t n : {2u, 5u, 8u, 12u}) {
    Lchca ca = Lchca::from_matrix(companion_matrix(find_irreducible(p2, n, false, 7)));
    for (std::uint64_t tau : {std::uint64_t{1}, std::uint64_t{7}, std::uint64_t{123}}) {
      MatrixFp power = mat_pow(ca.matrix(), tau);
      std::vector<bool> seen(std::size_t{1} << n, false);
      for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
        Configuration s(n);
        for (std::uint32_t b = 0; b < n; ++b) s[b] = (idx >> b) & 1;
        Configuration t = mat_vec(power, s);
        std::uint64_t key = 0;
        for (std::uint32_t b = 0; b < n; ++b) key |= std::uint64_t{t[b]} << b;
        CHECK_FALSE(seen[key]);
        seen[key] = true;
      }
    }
  }
}

TEST_CASE("uniformity_report") {
  Lchca ca = Lchca::from_matrix(companion_matrix(find_irreducible(p2, 16, true, 0)));

  SUBCASE("zero samples give empty tables") {
    UniformityReport r = uniformity_report(ca, 0, 1);
    CHECK(r.samples == 0);
    for (std::uint32_t i = 0; i < 16; ++i) CHECK(r.cell_counts[i][1] == 0);
  }

  SUBCASE("statistical bounds at 10^4 samples") {
    UniformityReport r = uniformity_report(ca, 10000, 1);
    for (std::uint32_t i = 0; i < 16; ++i) {
      CHECK(r.cell_frequency(i, 1) == doctest::Approx(0.5).epsilon(0.04));
      CHECK(std::abs(r.cell_frequency(i, 1) - 0.5) <= 0.02);
    }
    CHECK(r.max_pair_deviation() <= 0.03);
  }

  SUBCASE("deterministic per seed, independent of the worker count") {
    UniformityReport a = uniformity_report(ca, 4000, 9, 1);
    UniformityReport b = uniformity_report(ca, 4000, 9, 3);
    CHECK(a.cell_counts == b.cell_counts);
    CHECK(a.pair_counts == b.pair_counts);
    UniformityReport c = uniformity_report(ca, 4000, 10, 1);
    CHECK(a.cell_counts != c.cell_counts);
  }

  SUBCASE("requires a maximum-length CA") {
    Lchca group = Lchca::from_matrix(companion_matrix(Polynomial(p2, {1, 1, 1, 1, 1})));
    CHECK_THROWS_AS(uniformity_report(group, 10, 0), UnsupportedError);
  }
}

TEST_CASE("return after a full period") {
  Lchca ca = max_length_ca();
  SplitMix64 rng(5);
  const std::uint64_t order = ca.order();
  for (int i = 0; i < 10; ++i) {
    Configuration s(4);
    do {
      for (auto& d : s) d = static_cast<std::uint32_t>(rng.below(2));
    } while (s == Configuration{0, 0, 0, 0});
    CHECK(ca.run(s, order) == s);
  }
}

TEST_CASE("spec file round trip") {
  Lchca ca = max_length_ca();
  std::ostringstream os;
  ca.save(os);
  std::istringstream is(os.str());
  Lchca back = Lchca::load(is);
  CHECK(back.matrix() == ca.matrix());
  CHECK(back.classification() == ca.classification());

  SUBCASE("tampered charpoly line is rejected") {
    std::string text = os.str();
    auto pos = text.find("charpoly 2:1,1,0,0,1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, std::string("charpoly 2:1,1,0,0,1").size(), "charpoly 2:1,1,1,1,1");
    std::istringstream bad(text);
    CHECK_THROWS_AS(Lchca::load(bad), ParseError);
  }

  SUBCASE("rule-form specs load") {
    std::istringstream rule(
        "lchca v1\n"
        "p 2\n"
        "n 4\n"
        "neighborhood -1,0,1\n"
        "weights 0 0=0,1=1\n"
        "weights 1 -1=1,0=0,1=1\n"
        "weights 2 -1=1,0=0,1=1\n"
        "weights 3 -1=1,0=0\n");
    Lchca from_rule = Lchca::load(rule);
    CHECK(from_rule.cells() == 4);
    for (std::uint32_t i = 0; i < 4; ++i) {
      for (std::uint32_t j = 0; j < 4; ++j) {
        const std::uint32_t expected = (j + 1 == i || j == i + 1) ? 1 : 0;
        CHECK(from_rule.matrix()(i, j) == expected);
      }
    }
  }

  SUBCASE("matrix and rule together are ambiguous") {
    std::istringstream both(
        "lchca v1\n"
        "p 2\n"
        "n 1\n"
        "matrix 2:1x1:1\n"
        "neighborhood 0\n"
        "weights 0 0=1\n");
    CHECK_THROWS_AS(Lchca::load(both), ParseError);
  }

  SUBCASE("unreduced weight digits are rejected") {
    std::istringstream bad(
        "lchca v1\n"
        "p 2\n"
        "n 2\n"
        "neighborhood 0\n"
        "weights 0 0=2\n"
        "weights 1 0=1\n");
    CHECK_THROWS_AS(Lchca::load(bad), ParseError);
  }

  SUBCASE("missing header is rejected") {
    std::istringstream bad("p 2\nn 2\nmatrix 2:2x2:1,0,0,1\n");
    CHECK_THROWS_AS(Lchca::load(bad), ParseError);
  }
}
