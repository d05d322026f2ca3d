#include "treesym/tree.hpp"

#include <algorithm>
#include <queue>
#include <unordered_set>

namespace treesym {

void validate_params(const TreeParams& p) {
  if (p.k < 3) throw std::invalid_argument("tree degree k must be at least 3");
  if (p.k > 10)
    throw std::invalid_argument("tree degree k must be at most 10 (digit-string vertex encoding)");
}

static bool is_reduced(std::string_view w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == w[i - 1]) return false;
  return true;
}

Vertex Vertex::from_letters(std::string letters) {
  if (!is_reduced(letters)) throw std::invalid_argument("word is not reduced");
  return Vertex(std::move(letters));
}

Vertex Vertex::parse(std::string_view digits) {
  std::string w;
  w.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '9') throw std::invalid_argument("vertex string must be decimal digits");
    w.push_back(static_cast<char>(c - '0'));
  }
  return from_letters(std::move(w));
}

std::string Vertex::str() const {
  std::string s;
  s.reserve(w_.size());
  for (char c : w_) s.push_back(static_cast<char>('0' + c));
  return s;
}

Vertex Vertex::parent() const {
  if (w_.empty()) throw std::invalid_argument("the base vertex has no parent");
  return Vertex(w_.substr(0, w_.size() - 1));
}

Vertex Vertex::step(std::uint8_t x) const {
  if (!w_.empty() && static_cast<std::uint8_t>(w_.back()) == x)
    return Vertex(w_.substr(0, w_.size() - 1));
  std::string w = w_;
  w.push_back(static_cast<char>(x));
  return Vertex(std::move(w));
}

bool Vertex::adjacent(const Vertex& o) const { return distance(*this, o) == 1; }

std::uint8_t Vertex::max_letter() const {
  std::uint8_t m = 0;
  for (char c : w_) m = std::max(m, static_cast<std::uint8_t>(c));
  return m;
}

std::size_t VertexHash::operator()(const Vertex& v) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (unsigned char c : v.raw()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Edge::Edge(Vertex x, Vertex y) {
  if (!x.adjacent(y)) throw std::invalid_argument("edge endpoints must be adjacent");
  if (y < x) std::swap(x, y);
  a = std::move(x);
  b = std::move(y);
}

std::vector<Vertex> neighbors(const Vertex& v, const TreeParams& p) {
  validate_params(p);
  if (v.max_letter() >= p.k) throw std::invalid_argument("vertex letter out of range for k");
  std::vector<Vertex> out;
  out.reserve(p.k);
  for (int x = 0; x < p.k; ++x) out.push_back(v.step(static_cast<std::uint8_t>(x)));
  return out;
}

static int common_prefix(const std::string& a, const std::string& b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return static_cast<int>(i);
}

int distance(const Vertex& u, const Vertex& v) {
  const int c = common_prefix(u.raw(), v.raw());
  return u.depth() + v.depth() - 2 * c;
}

std::vector<Vertex> path(const Vertex& u, const Vertex& v) {
  const int c = common_prefix(u.raw(), v.raw());
  std::vector<Vertex> out;
  out.reserve(static_cast<std::size_t>(u.depth() + v.depth() - 2 * c + 1));
  Vertex cur = u;
  for (int i = u.depth(); i > c; --i) {
    out.push_back(cur);
    cur = cur.parent();
  }
  out.push_back(cur);  // the meeting point
  for (int i = c; i < v.depth(); ++i) {
    cur = cur.step(v.letter(i));
    out.push_back(cur);
  }
  return out;
}

bool in_shadow(const Vertex& x, const Vertex& y, const Vertex& t) {
  if (!x.adjacent(y)) throw std::invalid_argument("in_shadow requires adjacent x, y");
  return distance(x, t) == 1 + distance(y, t);
}

std::vector<Vertex> ball(const Vertex& t, int radius, const TreeParams& p) {
  validate_params(p);
  if (radius < 0) throw std::invalid_argument("ball radius must be nonnegative");
  std::vector<Vertex> out{t};
  std::unordered_set<Vertex, VertexHash> seen{t};
  std::size_t frontier_begin = 0;
  for (int r = 0; r < radius; ++r) {
    const std::size_t frontier_end = out.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (const Vertex& n : neighbors(out[i], p)) {
        if (seen.insert(n).second) out.push_back(n);
      }
    }
    frontier_begin = frontier_end;
  }
  return out;
}

std::uint64_t ball_size(int k, int radius) {
  std::uint64_t total = 1, shell = static_cast<std::uint64_t>(k);
  for (int r = 1; r <= radius; ++r) {
    total += shell;
    shell *= static_cast<std::uint64_t>(k - 1);
  }
  return total;
}

Parity parity(const Vertex& v) {
  return v.depth() % 2 == 0 ? Parity::Even : Parity::Odd;
}

std::string reduce_word(std::string_view w) {
  std::string out;
  out.reserve(w.size());
  for (char c : w) {
    if (!out.empty() && out.back() == c)
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

std::string reduce_concat(std::string_view a, std::string_view b) {
  std::string out(a);
  out.reserve(a.size() + b.size());
  for (char c : b) {
    if (!out.empty() && out.back() == c)
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

std::string reversed(std::string_view w) { return std::string(w.rbegin(), w.rend()); }

}  // namespace treesym
