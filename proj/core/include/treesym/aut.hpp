#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "treesym/perm.hpp"
#include "treesym/rooted.hpp"
#include "treesym/tree.hpp"

namespace treesym {

class Primitive;

// Automorphism of the k-regular tree: a composition word of primitives
// (left multiplications, finite portraits, lazily sampled Haar stabilizer
// elements) with exponents +-1 and a memoized vertex application.
//
// Exact equality of automorphisms is undecidable from this representation;
// use agree_to_depth. Copies share the primitives and the application cache,
// both of which are internally synchronized, so a value may be shared among
// concurrent readers. Results are a pure function of the construction seeds.
class Aut {
 public:
  Aut() = default;

  int k() const { return k_; }
  Vertex apply(const Vertex& v) const;
  std::size_t factor_count() const { return factors_.size(); }

  friend Aut compose(const Aut& g, const Aut& h);
  friend Aut inverse(const Aut& g);

  struct Factor {
    std::shared_ptr<const Primitive> prim;
    int exp;  // +1 or -1
  };
  const std::vector<Factor>& factors() const { return factors_; }

  // Construction from primitives; prefer the free functions below.
  Aut(int k, std::vector<Factor> factors);

 private:
  Vertex apply_uncached(const Vertex& v) const;

  int k_ = 3;
  std::vector<Factor> factors_;  // application order: factors_[0] acts first
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

Aut identity(const TreeParams& p);

// v -> reduce(w v); the canonical transporter t0 -> w. Hyperbolic for
// cyclically reduced w of length >= 2, an inversion for w of odd length that
// is not cyclically reduced, elliptic only for w empty.
Aut left_mult(const TreeParams& p, const Vertex& w);

// Automorphism determined by the image of t0 and local direction bijections
// on vertices of depth < portrait_depth; beyond the stored depth it extends
// by the order-preserving bijection compatible with the parent constraint.
// Locals are full permutations of {0..k-1} mapping directions at v to
// directions at the image of v; the direction toward the parent must map to
// the direction toward the image of the parent (checked, throws).
Aut finite_portrait(const TreeParams& p, const Vertex& base_image,
                    const std::map<Vertex, Perm>& locals, int portrait_depth);

// Haar-uniform element of the stabilizer of t0: every local child bijection
// is an independent uniform permutation, sampled on first use and memoized.
// The same seed always denotes the same automorphism.
Aut random_stabilizer(const TreeParams& p, std::uint64_t seed);

// Haar draw restricted to the slice {g : d(t0, g t0) <= radius}, normalized
// so vertex stabilizers have mass 1: a uniform vertex of ball(t0, radius)
// composed with an independent stabilizer draw.
Aut sample_slice(const TreeParams& p, int radius, std::uint64_t seed);

Aut compose(const Aut& g, const Aut& h);  // apply(compose(g,h), v) == g(h(v))
Aut inverse(const Aut& g);
Aut power(const Aut& g, long long e);
Aut conjugate(const Aut& by, const Aut& g);  // by * g * by^-1

inline Vertex apply(const Aut& g, const Vertex& v) { return g.apply(v); }

// True iff g and h agree on every vertex of ball(t0, depth).
bool agree_to_depth(const Aut& g, const Aut& h, int depth);

// True iff g preserves the bipartition, i.e. d(t0, g t0) is even. This is
// the index-2 type homomorphism.
bool type_preserving(const Aut& g);

// Rooted shape of the radius-n ball at any vertex: (k, k-1, ..., k-1).
RootedShape ball_shape(int k, int n);

// The permutation action of g on the rooted radius-n ball at s, as a
// portrait over ball_shape. Child directions are ordered by letter.
// Throws std::invalid_argument unless g fixes s.
RootedAut ball_action(const Aut& g, const Vertex& s, int n);

// Serialization of single-primitive automorphisms (see the format notes in
// the README). Round-trips are exact; a loaded Haar element replays its
// memoized cells.
std::string portrait_to_json(const Aut& g);
Aut portrait_from_json(const std::string& text);
std::string haar_to_json(const Aut& g);
Aut haar_from_json(const std::string& text);

}  // namespace treesym
