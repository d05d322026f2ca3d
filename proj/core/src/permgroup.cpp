#include "treesym/permgroup.hpp"

#include <numeric>
#include <stdexcept>

namespace treesym {

PPerm pperm_identity(unsigned degree) {
  PPerm p(degree);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

PPerm pperm_compose(const PPerm& a, const PPerm& b) {
  if (a.size() != b.size()) throw std::invalid_argument("permutation degree mismatch");
  PPerm c(a.size());
  for (std::size_t x = 0; x < b.size(); ++x) c[x] = a[b[x]];
  return c;
}

PPerm pperm_inverse(const PPerm& p) {
  PPerm q(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) q[p[x]] = static_cast<unsigned>(x);
  return q;
}

bool pperm_is_identity(const PPerm& p) {
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p[x] != x) return false;
  return true;
}

namespace {

unsigned first_moved(const PPerm& p) {
  for (unsigned x = 0; x < p.size(); ++x)
    if (p[x] != x) return x;
  throw std::logic_error("identity has no moved point");
}

}  // namespace

PermGroup::PermGroup(unsigned degree) : degree_(degree) {}

std::pair<PPerm, std::size_t> PermGroup::strip(PPerm g, std::size_t level) const {
  for (std::size_t i = level; i < levels_.size(); ++i) {
    const unsigned p = g[levels_[i].base];
    const auto it = levels_[i].transversal.find(p);
    if (it == levels_[i].transversal.end()) return {std::move(g), i};
    g = pperm_compose(pperm_inverse(it->second), g);
  }
  return {std::move(g), levels_.size()};
}

bool PermGroup::contains(const PPerm& g) const {
  if (g.size() != degree_) throw std::invalid_argument("permutation degree mismatch");
  auto [residue, level] = strip(g, 0);
  return level == levels_.size() && pperm_is_identity(residue);
}

// Invariant: the generator list of level i consists of exactly the strong
// generators fixing the bases of all shallower levels, so level lists are
// nested and the orbit of base_i under its own list is the full orbit in
// the stabilizer of the earlier bases.

void PermGroup::close_orbit(std::size_t level) {
  std::vector<unsigned> frontier;
  for (const auto& [pt, unused] : levels_[level].transversal) frontier.push_back(pt);
  for (std::size_t fi = 0; fi < frontier.size(); ++fi) {
    const unsigned pt = frontier[fi];
    for (std::size_t gi = 0; gi < levels_[level].gens.size(); ++gi) {
      const unsigned q = levels_[level].gens[gi][pt];
      if (!levels_[level].transversal.count(q)) {
        levels_[level].transversal.emplace(
            q, pperm_compose(levels_[level].gens[gi], levels_[level].transversal.at(pt)));
        frontier.push_back(q);
      }
    }
  }
}

void PermGroup::complete_level(std::size_t level) {
  close_orbit(level);
  std::vector<unsigned> pts;
  for (const auto& [pt, unused] : levels_[level].transversal) pts.push_back(pt);
  const std::size_t gen_count = levels_[level].gens.size();

  for (const unsigned pt : pts) {
    for (std::size_t gi = 0; gi < gen_count; ++gi) {
      // Copies, not references: deeper recursion may reallocate levels_.
      const PPerm s = levels_[level].gens[gi];
      const PPerm t = levels_[level].transversal.at(pt);
      const PPerm u =
          pperm_compose(pperm_inverse(levels_[level].transversal.at(s[pt])), pperm_compose(s, t));
      auto [res, at] = strip(u, level + 1);
      if (pperm_is_identity(res)) continue;
      if (at == levels_.size()) {
        Level fresh;
        fresh.base = first_moved(res);
        fresh.transversal.emplace(fresh.base, pperm_identity(degree_));
        levels_.push_back(std::move(fresh));
      }
      // The residue fixes every base above `at`, so it is a strong generator
      // for all levels in between.
      for (std::size_t lev = level + 1; lev <= at; ++lev) levels_[lev].gens.push_back(res);
      for (std::size_t lev = at + 1; lev-- > level + 1;) complete_level(lev);
    }
  }
}

void PermGroup::add_generator(const PPerm& g) {
  if (g.size() != degree_) throw std::invalid_argument("permutation degree mismatch");
  if (pperm_is_identity(g) || contains(g)) return;
  generators_.push_back(g);

  std::size_t d = 0;
  while (d < levels_.size() && g[levels_[d].base] == levels_[d].base) ++d;
  if (d == levels_.size()) {
    Level fresh;
    fresh.base = first_moved(g);
    fresh.transversal.emplace(fresh.base, pperm_identity(degree_));
    levels_.push_back(std::move(fresh));
  }
  for (std::size_t lev = 0; lev <= d; ++lev) levels_[lev].gens.push_back(g);
  for (std::size_t lev = d + 1; lev-- > 0;) complete_level(lev);
}

BigInt PermGroup::order() const {
  BigInt n = 1;
  for (const Level& lvl : levels_) n *= BigInt(lvl.transversal.size());
  return n;
}

BigInt group_order(const std::vector<RootedAut>& gens) {
  if (gens.empty()) return 1;
  const RootedShape& shape = gens.front().shape();
  PermGroup pg(static_cast<unsigned>(shape.leaf_count()));
  for (const RootedAut& g : gens) {
    if (g.shape() != shape) throw std::invalid_argument("generators over different shapes");
    pg.add_generator(g.leaf_permutation());
  }
  return pg.order();
}

bool generates_full(const std::vector<RootedAut>& gens, const RootedShape& shape) {
  for (const RootedAut& g : gens)
    if (g.shape() != shape) throw std::invalid_argument("generators over different shapes");
  return group_order(gens) == aut_order(shape);
}

}  // namespace treesym
