#pragma once

#include <map>
#include <vector>

#include "treesym/bigint.hpp"
#include "treesym/rooted.hpp"

namespace treesym {

// Point permutation on an arbitrary finite domain (images table).
using PPerm = std::vector<unsigned>;

PPerm pperm_identity(unsigned degree);
PPerm pperm_compose(const PPerm& a, const PPerm& b);  // x -> a[b[x]]
PPerm pperm_inverse(const PPerm& p);
bool pperm_is_identity(const PPerm& p);

// Permutation group given by generators, maintained as a stabilizer chain
// (base and strong generating set, deterministic Schreier-Sims). Exact order
// and membership at the degrees that arise from rooted-tree ball actions.
class PermGroup {
 public:
  explicit PermGroup(unsigned degree);

  unsigned degree() const { return degree_; }

  // No-op if the element is already contained.
  void add_generator(const PPerm& g);

  bool contains(const PPerm& g) const;
  BigInt order() const;
  std::size_t generator_count() const { return generators_.size(); }

 private:
  struct Level {
    unsigned base = 0;
    std::map<unsigned, PPerm> transversal;  // orbit point -> element mapping base there
    std::vector<PPerm> gens;                // strong generators fixing all earlier bases
  };

  void close_orbit(std::size_t level);
  void complete_level(std::size_t level);
  // Strips g through levels >= `level`; returns the residue and the level
  // where stripping stopped.
  std::pair<PPerm, std::size_t> strip(PPerm g, std::size_t level) const;

  unsigned degree_;
  std::vector<Level> levels_;
  std::vector<PPerm> generators_;  // as supplied, minus redundant ones
};

// Exact order of the group generated by rooted automorphisms, via their
// faithful leaf actions.
BigInt group_order(const std::vector<RootedAut>& gens);
bool generates_full(const std::vector<RootedAut>& gens, const RootedShape& shape);

}  // namespace treesym
