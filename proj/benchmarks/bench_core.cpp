#include <benchmark/benchmark.h>

#include "kmt/fields.hpp"

using namespace kmt;

namespace {

std::shared_ptr<const AffineAlgebra> aff(const char* t, int c) { return affine_algebra(make_realization({t, c, {}, {}, 0})); }

// realizations are cached, so time the validation sweep
void BM_Validate(benchmark::State& st) {
  const char* types[] = {"A2", "A3", "D3", "E6", "D4"};
  int i = static_cast<int>(st.range(0));
  auto R = make_realization({types[i - 1], i, {}, {}, 0});
  for (auto _ : st) benchmark::DoNotOptimize(validate_realization(*R));
}
BENCHMARK(BM_Validate)->DenseRange(1, 5)->Unit(benchmark::kMillisecond);

void BM_CyclotomicProduct(benchmark::State& st) {
  Cyc a = Cyc::root_of_unity(24, 5) + Cyc(Rational(3, 7));
  Cyc b = Cyc::root_of_unity(24, 11) - Cyc(Rational(2));
  for (auto _ : st) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_CyclotomicProduct);

void BM_CharacterTable(benchmark::State& st) {
  auto A = aff("A2", 1);
  auto lam = WeightLambda::fundamental(A->real(), 1);
  int D = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(character_table(A, lam, Window{D, D + 2}));
}
BENCHMARK(BM_CharacterTable)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_RSpace(benchmark::State& st) {
  auto A = aff("A2", 1);
  for (auto _ : st) {
    RSpace R(A, static_cast<int>(st.range(0)));
    benchmark::DoNotOptimize(R.dim());
  }
}
BENCHMARK(BM_RSpace)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Annihilation(benchmark::State& st) {
  auto A = aff("A2", 1);
  RSpace R(A, 1);
  auto lam = WeightLambda::fundamental(A->real(), 1);
  for (auto _ : st) {
    StandardModule L(A, lam);
    LoopOperators ops(R, L);
    benchmark::DoNotOptimize(annihilation_check(ops, Window{static_cast<int>(st.range(0)), -1}));
  }
}
BENCHMARK(BM_Annihilation)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Commutator(benchmark::State& st) {
  auto A = aff("A2", 1);
  RSpace R(A, 1);
  auto lam = WeightLambda::fundamental(A->real(), 1);
  for (auto _ : st) {
    PBWModule M(A, PBWModule::Kind::Verma, lam);
    LoopOperators ops(R, M);
    benchmark::DoNotOptimize(verify_commutator_26(ops, Window{2, 4}, 1));
  }
}
BENCHMARK(BM_Commutator)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
