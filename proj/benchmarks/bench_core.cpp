#include <benchmark/benchmark.h>

#include "lchca/pow.hpp"
#include "lchca/reductions.hpp"

using namespace lchca;

namespace {

const Prime p2{2};

Polynomial primitive16() {
  static Polynomial f = find_irreducible(p2, 16, true, 0);
  return f;
}

void BM_PolyMulMod(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  Polynomial f = find_irreducible(p2, n, false, 1);
  SplitMix64 rng(2);
  std::vector<std::uint32_t> ac(n), bc(n);
  for (auto& d : ac) d = static_cast<std::uint32_t>(rng.below(2));
  for (auto& d : bc) d = static_cast<std::uint32_t>(rng.below(2));
  Polynomial a(p2, ac), b(p2, bc);
  for (auto _ : state) {
    benchmark::DoNotOptimize(poly_mul_mod(a, b, f));
  }
}
BENCHMARK(BM_PolyMulMod)->Arg(16)->Arg(64)->Arg(256);

void BM_ExtFieldMul(benchmark::State& state) {
  auto field = ExtField::make(primitive16());
  auto a = field->gen().pow(12345);
  auto b = field->gen().pow(54321);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a * b);
  }
}
BENCHMARK(BM_ExtFieldMul);

void BM_MatPow(benchmark::State& state) {
  MatrixFp m = companion_matrix(primitive16());
  const std::uint64_t e = 0x3fffffffffULL;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mat_pow(m, e));
  }
}
BENCHMARK(BM_MatPow);

void BM_CharPoly(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  SplitMix64 rng(5);
  MatrixFp m(p2, n, n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      m.set(i, j, static_cast<std::uint32_t>(rng.below(2)));
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(char_poly(m));
  }
}
BENCHMARK(BM_CharPoly)->Arg(16)->Arg(32)->Arg(64);

void BM_Dlog(benchmark::State& state) {
  auto field = ExtField::make(find_irreducible(p2, 20, true, 0));
  auto g = field->gen();
  auto a = g.pow(777777);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dlog(g, a));
  }
}
BENCHMARK(BM_Dlog);

// hybrid CA construction classifies the char poly, which needs the
// factorization of p^n - 1: that caps n at 48 for p = 2
void BM_CaStep(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  Lchca ca = Lchca::from_matrix(companion_matrix(find_irreducible(p2, n, false, 3)));
  Configuration s(n, 0);
  s[0] = 1;
  for (auto _ : state) {
    s = ca.step(s);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_CaStep)->Arg(16)->Arg(32)->Arg(48);

void BM_SddpProve(benchmark::State& state) {
  PowParams params = PowParams::standard(p2, 16, static_cast<std::uint32_t>(state.range(0)), 0);
  int counter = 0;
  for (auto _ : state) {
    PowChallenge c =
        make_challenge(std::string_view("bench-" + std::to_string(counter++)), params);
    benchmark::DoNotOptimize(prove(c));
  }
}
BENCHMARK(BM_SddpProve)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_PowVerify(benchmark::State& state) {
  PowParams params = PowParams::standard(p2, 16, 8, 0);
  PowChallenge c = make_challenge(std::string_view("bench-verify"), params);
  auto sol = prove(c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify(c, *sol));
  }
}
BENCHMARK(BM_PowVerify);

}  // namespace

BENCHMARK_MAIN();
