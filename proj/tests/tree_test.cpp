#include <doctest.h>

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "treesym/rng.hpp"
#include "treesym/tree.hpp"

using namespace treesym;

namespace {

const TreeParams k3{3};

Vertex V(const char* s) { return Vertex::parse(s); }

// Independent oracle: BFS over the adjacency relation.
int bfs_distance(const Vertex& u, const Vertex& v, const TreeParams& p) {
  if (u == v) return 0;
  std::map<Vertex, int> dist{{u, 0}};
  std::queue<Vertex> q;
  q.push(u);
  while (!q.empty()) {
    const Vertex x = q.front();
    q.pop();
    for (const Vertex& y : neighbors(x, p)) {
      if (dist.count(y)) continue;
      dist[y] = dist[x] + 1;
      if (y == v) return dist[y];
      q.push(y);
    }
  }
  return -1;
}

Vertex random_reduced(Rng& rng, int max_depth, int k) {
  const int len = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_depth + 1)));
  std::string w;
  for (int i = 0; i < len; ++i) {
    std::uint8_t c;
    do {
      c = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(k)));
    } while (!w.empty() && static_cast<std::uint8_t>(w.back()) == c);
    w.push_back(static_cast<char>(c));
  }
  return Vertex::from_letters(w);
}

}  // namespace

TEST_CASE("vertex parsing enforces reduced words") {
  CHECK(V("").is_root());
  CHECK(V("012").depth() == 3);
  CHECK_THROWS_AS(Vertex::parse("00"), std::invalid_argument);
  CHECK_THROWS_AS(Vertex::parse("0x"), std::invalid_argument);
}

TEST_CASE("neighbors: append or cancel") {
  const auto at = [&](const char* s) {
    auto ns = neighbors(V(s), k3);
    std::set<Vertex> out(ns.begin(), ns.end());
    return out;
  };
  CHECK(at("") == std::set<Vertex>{V("0"), V("1"), V("2")});
  CHECK(at("01") == std::set<Vertex>{V("010"), V("012"), V("0")});
  CHECK(at("0") == std::set<Vertex>{V(""), V("01"), V("02")});
}

TEST_CASE("neighbor relation is symmetric") {
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const Vertex u = random_reduced(rng, 6, 3);
    for (const Vertex& v : neighbors(u, k3)) {
      const auto back = neighbors(v, k3);
      CHECK(std::count(back.begin(), back.end(), u) == 1);
    }
  }
}

TEST_CASE("distance examples and BFS oracle") {
  CHECK(distance(V("01"), V("02")) == 2);
  CHECK(distance(V("012"), V("012")) == 0);
  CHECK(distance(V(""), V("012")) == 3);
  Rng rng(12);
  for (int rep = 0; rep < 60; ++rep) {
    const Vertex u = random_reduced(rng, 4, 3);
    const Vertex v = random_reduced(rng, 4, 3);
    CHECK(distance(u, v) == bfs_distance(u, v, k3));
  }
}

TEST_CASE("path endpoints, length, reversal") {
  const auto p = path(V("01"), V("02"));
  CHECK(p == std::vector<Vertex>{V("01"), V("0"), V("02")});
  CHECK(path(V("2"), V("2")) == std::vector<Vertex>{V("2")});
  CHECK(path(V(""), V("01")) == std::vector<Vertex>{V(""), V("0"), V("01")});

  Rng rng(13);
  for (int rep = 0; rep < 40; ++rep) {
    const Vertex u = random_reduced(rng, 5, 3);
    const Vertex v = random_reduced(rng, 5, 3);
    auto fwd = path(u, v);
    auto bwd = path(v, u);
    std::reverse(bwd.begin(), bwd.end());
    CHECK(fwd == bwd);
    CHECK(static_cast<int>(fwd.size()) == distance(u, v) + 1);
    for (std::size_t i = 1; i < fwd.size(); ++i) CHECK(fwd[i].adjacent(fwd[i - 1]));
    CHECK(std::set<Vertex>(fwd.begin(), fwd.end()).size() == fwd.size());
  }
}

TEST_CASE("shadow membership") {
  CHECK(in_shadow(V(""), V("0"), V("012")));
  CHECK_FALSE(in_shadow(V(""), V("0"), V("1")));
  CHECK(in_shadow(V(""), V("0"), V("0")));
  CHECK_THROWS_AS(in_shadow(V(""), V("01"), V("0")), std::invalid_argument);

  // Equivalent characterization through the path.
  for (const Vertex& t : ball(V(""), 6, k3)) {
    const auto p = path(V(""), t);
    const bool on_path = std::count(p.begin(), p.end(), V("0")) > 0;
    CHECK(in_shadow(V(""), V("0"), t) == on_path);
  }
}

TEST_CASE("ball sizes match the closed form") {
  CHECK(ball(V(""), 0, k3).size() == 1);
  CHECK(ball(V(""), 1, k3).size() == 4);
  CHECK(ball(V(""), 2, k3).size() == 10);
  for (int k = 3; k <= 5; ++k) {
    const TreeParams p{k};
    for (int r = 0; r <= 8; ++r) {
      if (ball_size(k, r) > 200000) break;
      CHECK(ball(V(""), r, p).size() == ball_size(k, r));
    }
  }
}

TEST_CASE("parity alternates along edges") {
  CHECK(parity(V("")) == Parity::Even);
  CHECK(parity(V("0")) == Parity::Odd);
  CHECK(parity(V("01")) == Parity::Even);
  Rng rng(14);
  for (int rep = 0; rep < 30; ++rep) {
    const Vertex u = random_reduced(rng, 6, 3);
    for (const Vertex& v : neighbors(u, k3)) CHECK(parity(u) != parity(v));
  }
}

TEST_CASE("word reduction") {
  CHECK(reduce_concat("01", "1") == "0");
  CHECK(reduce_concat("0", "0").empty());
  CHECK(reduce_word(std::string{'\0', '\0', '\1'}) == std::string{'\1'});
}

TEST_CASE("params validation") {
  CHECK_THROWS_AS(validate_params(TreeParams{2}), std::invalid_argument);
  CHECK_THROWS_AS(validate_params(TreeParams{11}), std::invalid_argument);
  CHECK_NOTHROW(validate_params(TreeParams{10}));
}
