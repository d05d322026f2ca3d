#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treesym/bigint.hpp"
#include "treesym/perm.hpp"
#include "treesym/rng.hpp"

namespace treesym {

// Finite spherically homogeneous rooted tree: every vertex at level l has
// degrees[l] children; vertices at level levels() are the leaves.
struct RootedShape {
  std::vector<int> degrees;

  RootedShape() = default;
  explicit RootedShape(std::vector<int> d);

  int levels() const { return static_cast<int>(degrees.size()); }
  std::uint64_t width(int level) const;  // number of vertices at a level
  std::uint64_t leaf_count() const { return width(levels()); }
  RootedShape subtree(int level) const;    // degrees[level:]
  RootedShape truncated(int level) const;  // degrees[:level]
  bool operator==(const RootedShape&) const = default;
};

// Vertex of a rooted shape: the digit tuple (s0, s1, ...) as raw bytes.
using RVertex = std::string;

std::uint64_t rvertex_index(const RootedShape& shape, const RVertex& v);
RVertex rvertex_at(const RootedShape& shape, int level, std::uint64_t index);
std::vector<RVertex> vertices_at_level(const RootedShape& shape, int level);

// Automorphism of a finite rooted tree, stored as its portrait: one local
// permutation per internal vertex, the unique elementary decomposition.
// Locals are applied top-down, each indexed by the already-permuted prefix:
//   apply(w)[l] = local(l, image prefix)[w[l]].
class RootedAut {
 public:
  RootedAut() = default;
  explicit RootedAut(RootedShape shape);  // identity

  const RootedShape& shape() const { return shape_; }

  const Perm& local(int level, std::uint64_t index) const;
  void set_local(int level, std::uint64_t index, Perm p);

  RVertex apply(const RVertex& v) const;
  bool is_identity() const;

  bool operator==(const RootedAut&) const = default;

  // Action on the leaves as one permutation; faithful since the portrait
  // decomposition is unique.
  std::vector<unsigned> leaf_permutation() const;

  // Mixed-radix rank over the Lehmer codes of all locals, level-major.
  // Only valid when aut_order(shape) fits in 64 bits.
  std::uint64_t portrait_rank() const;
  static RootedAut portrait_unrank(const RootedShape& shape, std::uint64_t rank);

 private:
  RootedShape shape_;
  std::vector<std::vector<Perm>> locals_;  // locals_[level][vertex index]
};

// An elementary automorphism: one nontrivial local at `at`.
RootedAut elementary(const RootedShape& shape, const RVertex& at, Perm p);

// compose(g, h) applies h first: compose(g, h).apply(v) == g.apply(h.apply(v)).
RootedAut compose(const RootedAut& g, const RootedAut& h);
RootedAut inverse(const RootedAut& g);
RootedAut rooted_power(const RootedAut& g, long long e);

// Haar-uniform draw: independent uniform local permutation at every internal
// vertex, deterministic in the seed.
RootedAut uniform_rooted(const RootedShape& shape, std::uint64_t seed);

// The state at v: the sub-portrait hanging below v, an automorphism of
// shape.subtree(|v|). For g fixing v this is the action of g on that subtree.
RootedAut state(const RootedAut& g, const RVertex& v);

// The first `level` levels as an automorphism of the truncated shape.
RootedAut truncate(const RootedAut& g, int level);

// Minimal m >= 1 such that g^m fixes u.
int orbit_period(const RootedAut& g, const RVertex& u);

// state(g^m, u) for m = orbit_period(g, u); the state-power operator.
RootedAut state_power(const RootedAut& g, const RVertex& u);

// Order of the full automorphism group: product of d_l! over internal
// vertices at each level l.
BigInt aut_order(const RootedShape& shape);

// aut_order as uint64, throws if it does not fit. For test-scale enumeration.
std::uint64_t aut_order_u64(const RootedShape& shape);

}  // namespace treesym
