#include "treesym/aut.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace treesym {

namespace {

// Unique permutation of {0..k-1} sending src to dst and order-preserving on
// the remaining letters. The canonical extension beyond a portrait's depth.
Perm forced_order_preserving(int k, int src, int dst) {
  Perm p(static_cast<std::size_t>(k));
  p[static_cast<std::size_t>(src)] = static_cast<std::uint8_t>(dst);
  int j = 0;
  for (int x = 0; x < k; ++x) {
    if (x == src) continue;
    if (j == dst) ++j;
    p[static_cast<std::size_t>(x)] = static_cast<std::uint8_t>(j++);
  }
  return p;
}

// Permutation sending src to dst with the remaining letters matched in
// ascending order and then shuffled by tau (a permutation of k-1 points).
// With tau uniform this is uniform over all bijections respecting src->dst.
Perm forced_shuffled(int k, int src, int dst, const Perm& tau) {
  std::vector<std::uint8_t> srcs, dsts;
  srcs.reserve(static_cast<std::size_t>(k - 1));
  dsts.reserve(static_cast<std::size_t>(k - 1));
  for (int x = 0; x < k; ++x) {
    if (x != src) srcs.push_back(static_cast<std::uint8_t>(x));
    if (x != dst) dsts.push_back(static_cast<std::uint8_t>(x));
  }
  Perm p(static_cast<std::size_t>(k));
  p[static_cast<std::size_t>(src)] = static_cast<std::uint8_t>(dst);
  for (std::size_t i = 0; i < srcs.size(); ++i) p[srcs[i]] = dsts[tau[i]];
  return p;
}

std::uint8_t step_letter(const Vertex& from, const Vertex& to) {
  return to.depth() > from.depth() ? to.last() : from.last();
}

}  // namespace

// One factor of an automorphism word. LeftMult acts by exact free-product
// arithmetic; Portrait and Haar act by walking the prefix chain of the
// argument and translating each direction through a local bijection. The
// local at a vertex v is constrained on the parent direction: last(v) must
// map to the direction from the image of v back to the image of its parent.
class Primitive {
 public:
  enum class Kind { LeftMult, Portrait, Haar };

  Kind kind;
  int k;

  // LeftMult
  std::string word;  // raw letters, reduced

  // Portrait
  Vertex base_image;
  int depth = 0;
  std::map<Vertex, Perm> locals;

  // Haar
  std::uint64_t seed = 0;
  Rng haar_root;
  mutable std::unordered_map<Vertex, Perm, VertexHash> memo;
  mutable std::mutex memo_mu;

  Vertex fwd(const Vertex& v) const {
    if (kind == Kind::LeftMult) return Vertex::from_letters(reduce_concat(word, v.raw()));
    Vertex img = kind == Kind::Haar ? Vertex() : base_image;
    Vertex cur;
    int prev_y = -1;
    for (int i = 0; i < v.depth(); ++i) {
      const Perm sigma = local_at(cur, prev_y);
      const std::uint8_t y = sigma[v.letter(i)];
      img = img.step(y);
      cur = cur.step(v.letter(i));
      prev_y = y;
    }
    return img;
  }

  Vertex bwd(const Vertex& v) const {
    if (kind == Kind::LeftMult) return Vertex::from_letters(reduce_concat(reversed(word), v.raw()));
    const Vertex base = kind == Kind::Haar ? Vertex() : base_image;
    const std::vector<Vertex> image_path = path(base, v);
    Vertex cur;
    int prev_y = -1;
    for (std::size_t i = 1; i < image_path.size(); ++i) {
      const std::uint8_t y = step_letter(image_path[i - 1], image_path[i]);
      const Perm sigma = local_at(cur, prev_y);
      const auto it = std::find(sigma.begin(), sigma.end(), y);
      cur = cur.step(static_cast<std::uint8_t>(it - sigma.begin()));
      prev_y = y;
    }
    return cur;
  }

  // Full direction bijection at `prefix` during a walk that entered through
  // image direction prev_y (-1 at the root, where no constraint applies).
  Perm local_at(const Vertex& prefix, int prev_y) const {
    if (kind == Kind::Portrait) {
      const auto it = locals.find(prefix);
      if (it != locals.end()) return it->second;
      if (prefix.is_root()) return perm_identity(k);
      return forced_order_preserving(k, prefix.last(), prev_y);
    }
    // Haar: the root local is a uniform k-permutation; elsewhere a uniform
    // bijection of the k-1 child directions grafted onto the forced parent
    // entry. Cells are pure functions of (seed, prefix).
    const Perm cell = haar_cell(prefix);
    if (prefix.is_root()) return cell;
    return forced_shuffled(k, prefix.last(), prev_y, cell);
  }

  Perm haar_cell(const Vertex& prefix) const {
    {
      std::lock_guard<std::mutex> lock(memo_mu);
      const auto it = memo.find(prefix);
      if (it != memo.end()) return it->second;
    }
    Rng cell_rng = haar_root.stream(prefix.raw());
    Perm p = perm_random(cell_rng, prefix.is_root() ? k : k - 1);
    std::lock_guard<std::mutex> lock(memo_mu);
    return memo.emplace(prefix, std::move(p)).first->second;
  }
};

struct Aut::Cache {
  std::mutex mu;
  std::unordered_map<Vertex, Vertex, VertexHash> map;
};

Aut::Aut(int k, std::vector<Factor> factors)
    : k_(k), factors_(std::move(factors)), cache_(std::make_shared<Cache>()) {}

Vertex Aut::apply_uncached(const Vertex& v) const {
  Vertex cur = v;
  for (const Factor& f : factors_) cur = f.exp > 0 ? f.prim->fwd(cur) : f.prim->bwd(cur);
  return cur;
}

Vertex Aut::apply(const Vertex& v) const {
  if (factors_.empty()) return v;
  if (v.max_letter() >= k_) throw std::invalid_argument("vertex letter out of range for k");
  // Word arithmetic is cheaper than the cache it would fill.
  if (factors_.size() == 1 && factors_[0].prim->kind == Primitive::Kind::LeftMult)
    return apply_uncached(v);
  if (!cache_) return apply_uncached(v);
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    const auto it = cache_->map.find(v);
    if (it != cache_->map.end()) return it->second;
  }
  Vertex out = apply_uncached(v);
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (cache_->map.size() < (1u << 21)) cache_->map.emplace(v, out);
  return out;
}

Aut identity(const TreeParams& p) {
  validate_params(p);
  return Aut(p.k, {});
}

Aut left_mult(const TreeParams& p, const Vertex& w) {
  validate_params(p);
  if (w.max_letter() >= p.k) throw std::invalid_argument("word letter out of range for k");
  if (w.is_root()) return identity(p);
  auto prim = std::make_shared<Primitive>();
  prim->kind = Primitive::Kind::LeftMult;
  prim->k = p.k;
  prim->word = w.raw();
  return Aut(p.k, {{std::move(prim), +1}});
}

Aut finite_portrait(const TreeParams& p, const Vertex& base_image,
                    const std::map<Vertex, Perm>& locals, int portrait_depth) {
  validate_params(p);
  if (base_image.max_letter() >= p.k)
    throw std::invalid_argument("base image letter out of range for k");
  if (portrait_depth < 0) throw std::invalid_argument("portrait depth must be nonnegative");
  auto prim = std::make_shared<Primitive>();
  prim->kind = Primitive::Kind::Portrait;
  prim->k = p.k;
  prim->base_image = base_image;
  prim->depth = portrait_depth;
  prim->locals = locals;
  for (const auto& [v, sigma] : locals) {
    if (v.depth() >= portrait_depth)
      throw std::invalid_argument("portrait local deeper than the declared depth");
    if (v.max_letter() >= p.k) throw std::invalid_argument("portrait vertex out of range for k");
    if (sigma.size() != static_cast<std::size_t>(p.k) || !perm_is_valid(sigma))
      throw std::invalid_argument("portrait local is not a permutation of the k directions");
  }
  // Parent constraint: walk to each stored vertex and compare the forced
  // entry against the stored one.
  for (const auto& [v, sigma] : locals) {
    if (v.is_root()) continue;
    Vertex cur;
    int prev_y = -1;
    for (int i = 0; i < v.depth(); ++i) {
      prev_y = prim->local_at(cur, prev_y)[v.letter(i)];
      cur = cur.step(v.letter(i));
    }
    if (sigma[v.last()] != prev_y)
      throw std::invalid_argument("portrait local violates the parent direction constraint at " +
                                  v.str());
  }
  return Aut(p.k, {{std::move(prim), +1}});
}

Aut random_stabilizer(const TreeParams& p, std::uint64_t seed) {
  validate_params(p);
  auto prim = std::make_shared<Primitive>();
  prim->kind = Primitive::Kind::Haar;
  prim->k = p.k;
  prim->seed = seed;
  prim->haar_root = Rng(seed).stream("haar");
  return Aut(p.k, {{std::move(prim), +1}});
}

Aut sample_slice(const TreeParams& p, int radius, std::uint64_t seed) {
  validate_params(p);
  if (radius < 0) throw std::invalid_argument("slice radius must be nonnegative");
  Rng rng = Rng(seed).stream("sample_slice");
  const std::vector<Vertex> b = ball(Vertex(), radius, p);
  const Vertex v = b[rng.below(b.size())];
  const Aut stab = random_stabilizer(p, rng.next());
  return compose(left_mult(p, v), stab);
}

Aut compose(const Aut& g, const Aut& h) {
  if (g.k_ != h.k_) throw std::invalid_argument("cannot compose automorphisms of different trees");
  std::vector<Aut::Factor> factors = h.factors_;
  factors.insert(factors.end(), g.factors_.begin(), g.factors_.end());
  return Aut(g.k_, std::move(factors));
}

Aut inverse(const Aut& g) {
  std::vector<Aut::Factor> factors(g.factors_.rbegin(), g.factors_.rend());
  for (Aut::Factor& f : factors) f.exp = -f.exp;
  return Aut(g.k_, std::move(factors));
}

Aut power(const Aut& g, long long e) {
  const Aut base = e < 0 ? inverse(g) : g;
  Aut acc(g.k(), {});
  for (long long i = std::llabs(e); i > 0; --i) acc = compose(acc, base);
  return acc;
}

Aut conjugate(const Aut& by, const Aut& g) { return compose(compose(by, g), inverse(by)); }

bool agree_to_depth(const Aut& g, const Aut& h, int depth) {
  if (g.k() != h.k()) throw std::invalid_argument("degree mismatch");
  for (const Vertex& v : ball(Vertex(), depth, TreeParams{g.k()}))
    if (g.apply(v) != h.apply(v)) return false;
  return true;
}

bool type_preserving(const Aut& g) { return g.apply(Vertex()).depth() % 2 == 0; }

RootedShape ball_shape(int k, int n) {
  std::vector<int> degrees(static_cast<std::size_t>(n), k - 1);
  if (n >= 1) degrees[0] = k;
  return RootedShape(std::move(degrees));
}

namespace {

int digit_of_letter(int letter, int back) {
  if (back < 0) return letter;
  return letter < back ? letter : letter - 1;
}

int letter_of_digit(int digit, int back) {
  if (back < 0) return digit;
  return digit < back ? digit : digit + 1;
}

}  // namespace

RootedAut ball_action(const Aut& g, const Vertex& s, int n) {
  if (n < 1) throw std::invalid_argument("ball action radius must be at least 1");
  if (g.apply(s) != s) throw std::invalid_argument("ball action requires a fixed vertex");
  const int k = g.k();
  const RootedShape shape = ball_shape(k, n);
  RootedAut act(shape);

  struct Node {
    Vertex tv;
    int back;  // letter toward the ball root, -1 at s
  };
  std::vector<Node> level{{s, -1}};
  std::unordered_map<Vertex, std::uint64_t, VertexHash> index{{s, 0}};

  for (int l = 0; l < n; ++l) {
    const int d = shape.degrees[static_cast<std::size_t>(l)];
    std::vector<Node> next(level.size() * static_cast<std::size_t>(d));
    std::unordered_map<Vertex, std::uint64_t, VertexHash> next_index;
    for (std::uint64_t i = 0; i < level.size(); ++i) {
      for (int digit = 0; digit < d; ++digit) {
        const int letter = letter_of_digit(digit, level[i].back);
        Node child{level[i].tv.step(static_cast<std::uint8_t>(letter)), letter};
        const std::uint64_t ci = i * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(digit);
        next_index.emplace(child.tv, ci);
        next[ci] = std::move(child);
      }
    }
    // Local permutations for this level, indexed by the image vertex.
    for (std::uint64_t i = 0; i < level.size(); ++i) {
      const Vertex img = g.apply(level[i].tv);
      const auto img_it = index.find(img);
      if (img_it == index.end())
        throw std::logic_error("image of a ball vertex left the ball");
      const Node& img_node = level[img_it->second];
      Perm sigma(static_cast<std::size_t>(d));
      for (int digit = 0; digit < d; ++digit) {
        const int letter = letter_of_digit(digit, level[i].back);
        const Vertex child = level[i].tv.step(static_cast<std::uint8_t>(letter));
        const Vertex child_img = g.apply(child);
        const int img_letter = step_letter(img_node.tv, child_img);
        sigma[static_cast<std::size_t>(digit)] =
            static_cast<std::uint8_t>(digit_of_letter(img_letter, img_node.back));
      }
      if (!perm_is_valid(sigma)) throw std::logic_error("ball action local is not a permutation");
      act.set_local(l, img_it->second, std::move(sigma));
    }
    level = std::move(next);
    index = std::move(next_index);
  }
  return act;
}

// --- serialization ---------------------------------------------------------

using nlohmann::json;

namespace {

const Primitive& single_primitive(const Aut& g, Primitive::Kind kind, const char* what) {
  if (g.factors().size() != 1 || g.factors()[0].exp != 1 ||
      g.factors()[0].prim->kind != kind)
    throw std::invalid_argument(std::string("expected a single ") + what + " primitive");
  return *g.factors()[0].prim;
}

json perm_to_json(const Perm& p) {
  json a = json::array();
  for (std::uint8_t x : p) a.push_back(static_cast<int>(x));
  return a;
}

Perm perm_from_json(const json& a) {
  Perm p;
  for (const auto& x : a) p.push_back(static_cast<std::uint8_t>(x.get<int>()));
  if (!perm_is_valid(p)) throw std::invalid_argument("serialized local is not a permutation");
  return p;
}

}  // namespace

std::string portrait_to_json(const Aut& g) {
  const Primitive& prim = single_primitive(g, Primitive::Kind::Portrait, "portrait");
  json j;
  j["type"] = "portrait";
  j["k"] = prim.k;
  j["base_image"] = prim.base_image.str();
  j["depth"] = prim.depth;
  json locals = json::object();
  for (const auto& [v, sigma] : prim.locals) locals[v.str()] = perm_to_json(sigma);
  j["locals"] = std::move(locals);
  return j.dump();
}

Aut portrait_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("type").get<std::string>() != "portrait")
    throw std::invalid_argument("not a portrait document");
  const TreeParams p{j.at("k").get<int>()};
  std::map<Vertex, Perm> locals;
  for (const auto& [key, value] : j.at("locals").items())
    locals.emplace(Vertex::parse(key), perm_from_json(value));
  return finite_portrait(p, Vertex::parse(j.at("base_image").get<std::string>()), locals,
                         j.at("depth").get<int>());
}

std::string haar_to_json(const Aut& g) {
  const Primitive& prim = single_primitive(g, Primitive::Kind::Haar, "haar");
  json j;
  j["type"] = "haar";
  j["k"] = prim.k;
  j["seed"] = prim.seed;
  std::map<Vertex, Perm> sorted;
  {
    std::lock_guard<std::mutex> lock(prim.memo_mu);
    sorted.insert(prim.memo.begin(), prim.memo.end());
  }
  json memo = json::object();
  for (const auto& [v, cell] : sorted) memo[v.str()] = perm_to_json(cell);
  j["memo"] = std::move(memo);
  return j.dump();
}

Aut haar_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("type").get<std::string>() != "haar") throw std::invalid_argument("not a haar document");
  const TreeParams p{j.at("k").get<int>()};
  Aut g = random_stabilizer(p, j.at("seed").get<std::uint64_t>());
  const Primitive& prim = *g.factors()[0].prim;
  // Memo cells are pure functions of the seed; replay and verify each one.
  for (const auto& [key, value] : j.at("memo").items()) {
    const Vertex v = Vertex::parse(key);
    if (prim.haar_cell(v) != perm_from_json(value))
      throw std::invalid_argument("haar memo inconsistent with its seed at vertex '" + key + "'");
  }
  return g;
}

}  // namespace treesym
