#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treesym {

struct TreeParams {
  int k = 3;  // vertex degree of the regular tree
};

// Throws std::invalid_argument unless 3 <= k <= 10. The upper bound comes
// from the digit-string vertex encoding used by every serialized interface.
void validate_params(const TreeParams& p);

// A vertex of the k-regular tree, encoded as a reduced word over the letters
// {0..k-1}: no letter appears twice in a row. The empty word is the base
// vertex t0. This is the Cayley graph of the free product of k involutions,
// so left multiplication by a reduced word is itself a tree automorphism.
//
// Stepping by letter x appends x, unless the word already ends in x, in
// which case that letter cancels. Each vertex therefore has exactly k
// neighbours, one per letter.
class Vertex {
 public:
  Vertex() = default;

  // Letters as raw byte values. Throws if the word is not reduced.
  static Vertex from_letters(std::string letters);
  // Parses a digit string such as "012". Throws on junk or non-reduced input.
  static Vertex parse(std::string_view digits);

  std::string str() const;  // digit string; empty for t0
  int depth() const { return static_cast<int>(w_.size()); }
  bool is_root() const { return w_.empty(); }
  std::uint8_t letter(int i) const { return static_cast<std::uint8_t>(w_[i]); }
  std::uint8_t last() const { return static_cast<std::uint8_t>(w_.back()); }
  Vertex parent() const;           // throws at the root
  Vertex step(std::uint8_t x) const;  // append-or-cancel
  bool adjacent(const Vertex& o) const;
  std::uint8_t max_letter() const;  // 0 for the root

  const std::string& raw() const { return w_; }
  auto operator<=>(const Vertex&) const = default;

 private:
  explicit Vertex(std::string w) : w_(std::move(w)) {}
  std::string w_;  // reduced, raw letter values
};

struct VertexHash {
  std::size_t operator()(const Vertex& v) const noexcept;
};

// Unordered pair of adjacent vertices, normalized so that a < b.
struct Edge {
  Vertex a, b;
  Edge(Vertex x, Vertex y);  // throws if x, y are not adjacent
  bool operator==(const Edge&) const = default;
};

std::vector<Vertex> neighbors(const Vertex& v, const TreeParams& p);

// Graph distance: |u| + |v| - 2 * (longest common prefix).
int distance(const Vertex& u, const Vertex& v);

// The unique simple path from u to v, inclusive.
std::vector<Vertex> path(const Vertex& u, const Vertex& v);

// True iff t lies in the shadow of the directed edge x -> y, i.e. the path
// from x to t passes through y. Requires x, y adjacent.
bool in_shadow(const Vertex& x, const Vertex& y, const Vertex& t);

std::vector<Vertex> ball(const Vertex& t, int radius, const TreeParams& p);

// |ball| in closed form: 1 + k ((k-1)^r - 1) / (k-2).
std::uint64_t ball_size(int k, int radius);

enum class Parity : std::uint8_t { Even = 0, Odd = 1 };
Parity parity(const Vertex& v);

// Free-product reduction. Both inputs reduced; cancellation only telescopes
// across the junction.
std::string reduce_concat(std::string_view a, std::string_view b);
// Full stack reduction of an arbitrary letter sequence.
std::string reduce_word(std::string_view w);
std::string reversed(std::string_view w);

}  // namespace treesym
