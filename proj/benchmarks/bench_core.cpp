#include <benchmark/benchmark.h>

#include "treesym/classify.hpp"
#include "treesym/nielsen.hpp"
#include "treesym/permgroup.hpp"

using namespace treesym;

namespace {

const TreeParams k3{3};

void BM_haar_apply(benchmark::State& state) {
  const Aut g = random_stabilizer(k3, 42);
  const int depth = static_cast<int>(state.range(0));
  std::string w;
  for (int i = 0; i < depth; ++i) w.push_back(static_cast<char>(i % 2));
  const Vertex v = Vertex::from_letters(w);
  for (auto _ : state) benchmark::DoNotOptimize(g.apply(v));
}
BENCHMARK(BM_haar_apply)->Arg(4)->Arg(16)->Arg(64);

void BM_classify_product(benchmark::State& state) {
  const Aut g = compose(random_stabilizer(k3, 7), left_mult(k3, Vertex::parse("0121")));
  for (auto _ : state) benchmark::DoNotOptimize(classify(g));
}
BENCHMARK(BM_classify_product);

void BM_schottky_pair(benchmark::State& state) {
  const std::vector<Aut> tuple{left_mult(k3, Vertex::parse("0102")),
                               left_mult(k3, Vertex::parse("2101"))};
  for (auto _ : state) benchmark::DoNotOptimize(schottky_check(tuple));
}
BENCHMARK(BM_schottky_pair);

void BM_stabilizer_chain_ball(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const RootedShape shape = ball_shape(3, depth);
  std::vector<PPerm> gens;
  for (std::uint64_t seed = 0; seed < 4; ++seed)
    gens.push_back(uniform_rooted(shape, seed).leaf_permutation());
  for (auto _ : state) {
    PermGroup pg(static_cast<unsigned>(shape.leaf_count()));
    for (const PPerm& g : gens) pg.add_generator(g);
    benchmark::DoNotOptimize(pg.order());
  }
}
BENCHMARK(BM_stabilizer_chain_ball)->Arg(2)->Arg(3)->Arg(4);

void BM_density_probe(benchmark::State& state) {
  const GenTuple t{k3, {random_stabilizer(k3, 5), left_mult(k3, Vertex::parse("01"))}};
  for (auto _ : state)
    benchmark::DoNotOptimize(density_probe(t, Vertex(), 2, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_density_probe)->Arg(8)->Arg(16);

void BM_freeness_probe(benchmark::State& state) {
  const GenTuple t{k3, {left_mult(k3, Vertex::parse("01")), left_mult(k3, Vertex::parse("21"))}};
  for (auto _ : state)
    benchmark::DoNotOptimize(freeness_probe(t, static_cast<int>(state.range(0)), 6));
}
BENCHMARK(BM_freeness_probe)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
