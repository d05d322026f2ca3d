#include "treesym/rooted.hpp"

#include <stdexcept>

namespace treesym {

RootedShape::RootedShape(std::vector<int> d) : degrees(std::move(d)) {
  if (degrees.empty()) throw std::invalid_argument("rooted shape needs at least one level");
  for (int deg : degrees)
    if (deg < 1 || deg > 20) throw std::invalid_argument("rooted shape degree out of range");
}

std::uint64_t RootedShape::width(int level) const {
  if (level < 0 || level > levels()) throw std::invalid_argument("level out of range");
  std::uint64_t w = 1;
  for (int l = 0; l < level; ++l) w *= static_cast<std::uint64_t>(degrees[l]);
  return w;
}

RootedShape RootedShape::subtree(int level) const {
  if (level <= 0 || level >= levels()) throw std::invalid_argument("subtree level out of range");
  return RootedShape(std::vector<int>(degrees.begin() + level, degrees.end()));
}

RootedShape RootedShape::truncated(int level) const {
  if (level <= 0 || level > levels()) throw std::invalid_argument("truncation level out of range");
  return RootedShape(std::vector<int>(degrees.begin(), degrees.begin() + level));
}

std::uint64_t rvertex_index(const RootedShape& shape, const RVertex& v) {
  if (static_cast<int>(v.size()) > shape.levels())
    throw std::invalid_argument("rooted vertex deeper than shape");
  std::uint64_t idx = 0;
  for (std::size_t l = 0; l < v.size(); ++l) {
    const int d = shape.degrees[l];
    const auto digit = static_cast<std::uint8_t>(v[l]);
    if (digit >= d) throw std::invalid_argument("rooted vertex digit out of range");
    idx = idx * static_cast<std::uint64_t>(d) + digit;
  }
  return idx;
}

RVertex rvertex_at(const RootedShape& shape, int level, std::uint64_t index) {
  RVertex v(static_cast<std::size_t>(level), '\0');
  for (int l = level - 1; l >= 0; --l) {
    const auto d = static_cast<std::uint64_t>(shape.degrees[l]);
    v[static_cast<std::size_t>(l)] = static_cast<char>(index % d);
    index /= d;
  }
  if (index != 0) throw std::invalid_argument("rooted vertex index out of range");
  return v;
}

std::vector<RVertex> vertices_at_level(const RootedShape& shape, int level) {
  const std::uint64_t w = shape.width(level);
  std::vector<RVertex> out;
  out.reserve(w);
  for (std::uint64_t i = 0; i < w; ++i) out.push_back(rvertex_at(shape, level, i));
  return out;
}

RootedAut::RootedAut(RootedShape shape) : shape_(std::move(shape)) {
  locals_.resize(static_cast<std::size_t>(shape_.levels()));
  for (int l = 0; l < shape_.levels(); ++l)
    locals_[static_cast<std::size_t>(l)]
        .assign(shape_.width(l), perm_identity(shape_.degrees[static_cast<std::size_t>(l)]));
}

const Perm& RootedAut::local(int level, std::uint64_t index) const {
  return locals_.at(static_cast<std::size_t>(level)).at(index);
}

void RootedAut::set_local(int level, std::uint64_t index, Perm p) {
  auto& slot = locals_.at(static_cast<std::size_t>(level)).at(index);
  if (p.size() != slot.size() || !perm_is_valid(p))
    throw std::invalid_argument("local permutation has wrong degree");
  slot = std::move(p);
}

RVertex RootedAut::apply(const RVertex& v) const {
  if (static_cast<int>(v.size()) > shape_.levels())
    throw std::invalid_argument("rooted vertex deeper than shape");
  RVertex out;
  out.reserve(v.size());
  std::uint64_t prefix_idx = 0;  // index of the image prefix at the current level
  for (std::size_t l = 0; l < v.size(); ++l) {
    const Perm& sigma = locals_[l][prefix_idx];
    const auto digit = static_cast<std::uint8_t>(v[l]);
    if (digit >= sigma.size()) throw std::invalid_argument("rooted vertex digit out of range");
    const std::uint8_t image = sigma[digit];
    out.push_back(static_cast<char>(image));
    prefix_idx = prefix_idx * sigma.size() + image;
  }
  return out;
}

bool RootedAut::is_identity() const {
  for (const auto& level : locals_)
    for (const Perm& p : level)
      if (!perm_is_identity(p)) return false;
  return true;
}

std::vector<unsigned> RootedAut::leaf_permutation() const {
  const std::uint64_t n = shape_.leaf_count();
  std::vector<unsigned> img(n);
  const int L = shape_.levels();
  for (std::uint64_t i = 0; i < n; ++i)
    img[i] = static_cast<unsigned>(rvertex_index(shape_, apply(rvertex_at(shape_, L, i))));
  return img;
}

std::uint64_t RootedAut::portrait_rank() const {
  std::uint64_t rank = 0;
  for (int l = 0; l < shape_.levels(); ++l) {
    const std::uint64_t f = factorial(shape_.degrees[static_cast<std::size_t>(l)]);
    for (const Perm& p : locals_[static_cast<std::size_t>(l)]) rank = rank * f + perm_rank(p);
  }
  return rank;
}

RootedAut RootedAut::portrait_unrank(const RootedShape& shape, std::uint64_t rank) {
  RootedAut g(shape);
  // Peel digits from the least significant end, which is the last local.
  for (int l = shape.levels() - 1; l >= 0; --l) {
    const int d = shape.degrees[static_cast<std::size_t>(l)];
    const std::uint64_t f = factorial(d);
    for (std::uint64_t i = shape.width(l); i-- > 0;) {
      g.set_local(l, i, perm_unrank(d, rank % f));
      rank /= f;
    }
  }
  if (rank != 0) throw std::invalid_argument("portrait rank out of range");
  return g;
}

RootedAut elementary(const RootedShape& shape, const RVertex& at, Perm p) {
  RootedAut g(shape);
  const int level = static_cast<int>(at.size());
  if (level >= shape.levels()) throw std::invalid_argument("elementary vertex must be internal");
  g.set_local(level, rvertex_index(shape, at), std::move(p));
  return g;
}

RootedAut compose(const RootedAut& g, const RootedAut& h) {
  if (g.shape() != h.shape()) throw std::invalid_argument("rooted shape mismatch");
  const RootedShape& shape = g.shape();
  RootedAut c(shape);
  for (int l = 0; l < shape.levels(); ++l) {
    const std::uint64_t w = shape.width(l);
    for (std::uint64_t qi = 0; qi < w; ++qi) {
      // q runs over h-image prefixes; the composite local at the g-image of q
      // is g's local there following h's local at q.
      const RVertex q = rvertex_at(shape, l, qi);
      const std::uint64_t pi = rvertex_index(shape, g.apply(q));
      c.set_local(l, pi, perm_compose(g.local(l, pi), h.local(l, qi)));
    }
  }
  return c;
}

RootedAut inverse(const RootedAut& g) {
  const RootedShape& shape = g.shape();
  RootedAut inv(shape);
  for (int l = 0; l < shape.levels(); ++l) {
    const std::uint64_t w = shape.width(l);
    for (std::uint64_t qi = 0; qi < w; ++qi) {
      const RVertex q = rvertex_at(shape, l, qi);
      const std::uint64_t pi = rvertex_index(shape, g.apply(q));
      inv.set_local(l, qi, perm_inverse(g.local(l, pi)));
    }
  }
  return inv;
}

RootedAut rooted_power(const RootedAut& g, long long e) {
  RootedAut base = e < 0 ? inverse(g) : g;
  unsigned long long n = e < 0 ? static_cast<unsigned long long>(-e)
                               : static_cast<unsigned long long>(e);
  RootedAut acc(g.shape());
  while (n > 0) {
    if (n & 1ULL) acc = compose(acc, base);
    base = compose(base, base);
    n >>= 1;
  }
  return acc;
}

RootedAut uniform_rooted(const RootedShape& shape, std::uint64_t seed) {
  Rng rng = Rng(seed).stream("uniform_rooted");
  RootedAut g(shape);
  for (int l = 0; l < shape.levels(); ++l) {
    const std::uint64_t w = shape.width(l);
    for (std::uint64_t i = 0; i < w; ++i)
      g.set_local(l, i, perm_random(rng, shape.degrees[static_cast<std::size_t>(l)]));
  }
  return g;
}

RootedAut state(const RootedAut& g, const RVertex& v) {
  const RootedShape& shape = g.shape();
  const int lv = static_cast<int>(v.size());
  if (lv == 0) return g;
  if (lv >= shape.levels()) throw std::invalid_argument("state vertex must be internal");
  const RootedShape sub = shape.subtree(lv);
  RootedAut s(sub);
  for (int l = 0; l < sub.levels(); ++l) {
    const std::uint64_t w = sub.width(l);
    for (std::uint64_t i = 0; i < w; ++i) {
      const RVertex rel = rvertex_at(sub, l, i);
      s.set_local(l, i, g.local(lv + l, rvertex_index(shape, v + rel)));
    }
  }
  return s;
}

RootedAut truncate(const RootedAut& g, int level) {
  const RootedShape head = g.shape().truncated(level);
  RootedAut t(head);
  for (int l = 0; l < level; ++l) {
    const std::uint64_t w = head.width(l);
    for (std::uint64_t i = 0; i < w; ++i) t.set_local(l, i, g.local(l, i));
  }
  return t;
}

int orbit_period(const RootedAut& g, const RVertex& u) {
  rvertex_index(g.shape(), u);  // validates
  RVertex cur = g.apply(u);
  int m = 1;
  const std::uint64_t bound = g.shape().width(static_cast<int>(u.size()));
  while (cur != u) {
    cur = g.apply(cur);
    ++m;
    if (static_cast<std::uint64_t>(m) > bound)
      throw std::logic_error("orbit period exceeded the level width");
  }
  return m;
}

RootedAut state_power(const RootedAut& g, const RVertex& u) {
  const int m = orbit_period(g, u);
  return state(rooted_power(g, m), u);
}

BigInt aut_order(const RootedShape& shape) {
  BigInt order = 1;
  for (int l = 0; l < shape.levels(); ++l) {
    const BigInt f = factorial(shape.degrees[static_cast<std::size_t>(l)]);
    const std::uint64_t w = shape.width(l);
    for (std::uint64_t i = 0; i < w; ++i) order *= f;
  }
  return order;
}

std::uint64_t aut_order_u64(const RootedShape& shape) {
  const BigInt order = aut_order(shape);
  if (order > BigInt(~std::uint64_t{0})) throw std::overflow_error("aut_order exceeds 64 bits");
  return static_cast<std::uint64_t>(order);
}

}  // namespace treesym
