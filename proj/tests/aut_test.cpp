#include <doctest.h>

#include <set>

#include "treesym/aut.hpp"
#include "treesym/permgroup.hpp"
#include "treesym/rng.hpp"
#include "treesym/stats.hpp"

using namespace treesym;

namespace {

const TreeParams k3{3};

Vertex V(const char* s) { return Vertex::parse(s); }

Aut random_aut(Rng& rng, const TreeParams& p, int max_factors = 4, int max_word = 3) {
  const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_factors)));
  Aut g = identity(p);
  for (int i = 0; i < n; ++i) {
    Aut f = identity(p);
    switch (rng.below(3)) {
      case 0: {
        std::string w;
        const int len = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_word)));
        for (int j = 0; j < len; ++j) {
          std::uint8_t c;
          do {
            c = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(p.k)));
          } while (!w.empty() && static_cast<std::uint8_t>(w.back()) == c);
          w.push_back(static_cast<char>(c));
        }
        f = left_mult(p, Vertex::from_letters(w));
        break;
      }
      case 1:
        f = random_stabilizer(p, rng.next());
        break;
      default: {
        std::map<Vertex, Perm> locals;
        Rng lr(rng.next());
        locals.emplace(Vertex(), perm_random(lr, p.k));
        f = finite_portrait(p, Vertex(), locals, 1);
        break;
      }
    }
    g = rng.below(2) ? compose(g, f) : compose(g, inverse(f));
  }
  return g;
}

}  // namespace

TEST_CASE("identity and basic left multiplication") {
  const Aut id = identity(k3);
  CHECK(id.apply(V("")) == V(""));
  CHECK(id.apply(V("012")) == V("012"));

  const Aut g = left_mult(k3, V("01"));
  CHECK(g.apply(V("")) == V("01"));
  CHECK(g.apply(V("1")) == V("0"));
  CHECK(left_mult(k3, V("0")).apply(V("0")) == V(""));
  CHECK_THROWS_AS(left_mult(k3, Vertex::parse("4")), std::invalid_argument);
}

TEST_CASE("compose, inverse, group axioms") {
  CHECK(agree_to_depth(compose(left_mult(k3, V("0")), left_mult(k3, V("0"))), identity(k3), 6));
  CHECK(agree_to_depth(compose(left_mult(k3, V("0")), left_mult(k3, V("1"))),
                       left_mult(k3, V("01")), 6));
  Rng rng(7);
  for (int rep = 0; rep < 25; ++rep) {
    const Aut g = random_aut(rng, k3);
    CHECK(inverse(g).apply(g.apply(V("012"))) == V("012"));
    CHECK(agree_to_depth(compose(g, inverse(g)), identity(k3), 5));
  }
}

TEST_CASE("left_mult is a homomorphism from the free product") {
  Rng rng(8);
  for (int rep = 0; rep < 30; ++rep) {
    std::string w1, w2;
    for (int j = 0; j < 4; ++j) {
      std::uint8_t c;
      do {
        c = static_cast<std::uint8_t>(rng.below(3));
      } while (!w1.empty() && static_cast<std::uint8_t>(w1.back()) == c);
      w1.push_back(static_cast<char>(c));
      do {
        c = static_cast<std::uint8_t>(rng.below(3));
      } while (!w2.empty() && static_cast<std::uint8_t>(w2.back()) == c);
      w2.push_back(static_cast<char>(c));
    }
    const Aut a = left_mult(k3, Vertex::from_letters(w1));
    const Aut b = left_mult(k3, Vertex::from_letters(w2));
    const Aut ab = left_mult(k3, Vertex::from_letters(reduce_concat(w1, w2)));
    CHECK(agree_to_depth(compose(a, b), ab, 6));
  }
}

TEST_CASE("automorphisms preserve distances") {
  Rng rng(9);
  const auto b5 = ball(V(""), 5, k3);
  for (int rep = 0; rep < 8; ++rep) {
    const Aut g = random_aut(rng, k3);
    for (std::size_t i = 0; i < b5.size(); i += 7)
      for (std::size_t j = i; j < b5.size(); j += 11)
        CHECK(distance(g.apply(b5[i]), g.apply(b5[j])) == distance(b5[i], b5[j]));
  }
}

TEST_CASE("finite portraits") {
  // Root local swapping 1 and 2 fixes t0 and the whole shadow behind 0.
  std::map<Vertex, Perm> locals{{Vertex(), Perm{0, 2, 1}}};
  const Aut g = finite_portrait(k3, Vertex(), locals, 1);
  CHECK(g.apply(V("")) == V(""));
  for (const Vertex& t : ball(V(""), 5, k3)) {
    if (t.is_root()) continue;
    if (in_shadow(V(""), V("0"), t))
      CHECK(g.apply(t) == t);
    else
      CHECK(g.apply(t) != t);
  }

  // Empty locals with the base at t0 is the identity.
  CHECK(agree_to_depth(finite_portrait(k3, Vertex(), {}, 0), identity(k3), 5));

  // Base image "0" with default locals acts as left multiplication by 0.
  CHECK(agree_to_depth(finite_portrait(k3, V("0"), {}, 0), left_mult(k3, V("0")), 3));
}

TEST_CASE("portrait locals must honor the parent constraint") {
  // Root fixes letter 0, so the local at "0" must send its parent letter 0
  // to 0; a local sending 0 elsewhere is inconsistent.
  std::map<Vertex, Perm> bad{{Vertex(), Perm{0, 1, 2}}, {V("0"), Perm{1, 0, 2}}};
  CHECK_THROWS_AS(finite_portrait(k3, Vertex(), bad, 2), std::invalid_argument);
  std::map<Vertex, Perm> good{{Vertex(), Perm{0, 1, 2}}, {V("0"), Perm{0, 2, 1}}};
  CHECK_NOTHROW(finite_portrait(k3, Vertex(), good, 2));
  // Locals deeper than the declared depth are rejected.
  CHECK_THROWS_AS(finite_portrait(k3, Vertex(), good, 1), std::invalid_argument);
}

TEST_CASE("random stabilizer fixes t0, is deterministic and order independent") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Aut g = random_stabilizer(k3, seed);
    CHECK(g.apply(V("")) == V(""));
  }
  CHECK(agree_to_depth(random_stabilizer(k3, 5), random_stabilizer(k3, 5), 8));

  // Forcing deep cells first must not change shallow values.
  const Aut a = random_stabilizer(k3, 77);
  const Aut b = random_stabilizer(k3, 77);
  const Vertex deep = V("0102010201");
  const Vertex img_deep_first = a.apply(deep);
  for (const Vertex& v : ball(V(""), 4, k3)) CHECK(a.apply(v) == b.apply(v));
  CHECK(b.apply(deep) == img_deep_first);
}

TEST_CASE("random stabilizer root local is uniform over S3") {
  std::vector<std::uint64_t> counts(6, 0);
  for (std::uint64_t seed = 0; seed < 30000; ++seed) {
    const Aut g = random_stabilizer(k3, seed);
    Perm root(3);
    for (int x = 0; x < 3; ++x)
      root[static_cast<std::size_t>(x)] = g.apply(Vertex().step(static_cast<std::uint8_t>(x))).last();
    ++counts[perm_rank(root)];
  }
  CHECK(chi_square_uniform(counts).p > 0.001);
}

TEST_CASE("sample_slice stays in its slice and spreads uniformly") {
  std::map<Vertex, std::uint64_t> counts;
  const auto b2 = ball(V(""), 2, k3);
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    const Aut g = sample_slice(k3, 2, seed);
    const Vertex image = g.apply(V(""));
    CHECK(distance(V(""), image) <= 2);
    ++counts[image];
  }
  std::vector<std::uint64_t> cells;
  for (const Vertex& v : b2) cells.push_back(counts[v]);
  CHECK(cells.size() == 10);
  CHECK(chi_square_uniform(cells).p > 0.001);
  CHECK(sample_slice(k3, 0, 3).apply(V("")) == V(""));
}

TEST_CASE("type parity") {
  CHECK(type_preserving(left_mult(k3, V("01"))));
  CHECK_FALSE(type_preserving(left_mult(k3, V("0"))));
  CHECK(type_preserving(random_stabilizer(k3, 4)));
  Rng rng(10);
  for (int rep = 0; rep < 20; ++rep) {
    const Aut g = random_aut(rng, k3), h = random_aut(rng, k3);
    const int dg = distance(V(""), g.apply(V("")));
    const int dh = distance(V(""), h.apply(V("")));
    const int dgh = distance(V(""), compose(g, h).apply(V("")));
    CHECK(dgh % 2 == (dg + dh) % 2);
  }
}

TEST_CASE("agree_to_depth separates at the right depth") {
  CHECK(agree_to_depth(identity(k3), identity(k3), 8));
  CHECK_FALSE(agree_to_depth(identity(k3), left_mult(k3, V("0")), 0));
  CHECK_FALSE(agree_to_depth(left_mult(k3, V("010101")), identity(k3), 2));
}

TEST_CASE("ball actions") {
  CHECK(ball_shape(3, 2) == RootedShape({3, 2}));
  CHECK(ball_action(identity(k3), V(""), 2).is_identity());

  // A root swap of letters 1 and 2 becomes the transposition of child
  // digits 1 and 2 at the ball root.
  std::map<Vertex, Perm> locals{{Vertex(), Perm{0, 2, 1}}};
  const RootedAut act = ball_action(finite_portrait(k3, Vertex(), locals, 1), V(""), 1);
  CHECK(act.local(0, 0) == Perm{0, 2, 1});

  CHECK_THROWS_AS(ball_action(left_mult(k3, V("01")), V(""), 1), std::invalid_argument);

  // The ball action respects composition and is faithful on the ball.
  Rng rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    const Aut a = random_stabilizer(k3, rng.next());
    const Aut b = random_stabilizer(k3, rng.next());
    const RootedAut joint = ball_action(compose(a, b), V(""), 2);
    const RootedAut split = compose(ball_action(a, V(""), 2), ball_action(b, V(""), 2));
    CHECK(joint == split);
  }

  // Ball action at a non-base vertex.
  const Aut s = random_stabilizer(k3, 123);
  const Vertex fixed = V("");
  const RootedAut at_root = ball_action(s, fixed, 2);
  CHECK(at_root.shape() == ball_shape(3, 2));
}

TEST_CASE("ball actions of stabilizers are uniform over the order-48 ball group") {
  const RootedShape shape = ball_shape(3, 2);
  CHECK(aut_order_u64(shape) == 48);
  std::vector<std::uint64_t> counts(48, 0);
  for (std::uint64_t seed = 0; seed < 48000; ++seed)
    ++counts[ball_action(random_stabilizer(k3, seed), V(""), 2).portrait_rank()];
  CHECK(chi_square_uniform(counts).p > 0.001);
}

TEST_CASE("portrait and haar serialization round-trip") {
  std::map<Vertex, Perm> locals{{Vertex(), Perm{2, 0, 1}}};
  const Aut g = finite_portrait(k3, V("1"), locals, 1);
  const Aut g2 = portrait_from_json(portrait_to_json(g));
  CHECK(agree_to_depth(g, g2, 5));

  Aut h = random_stabilizer(k3, 99);
  h.apply(V("0102"));  // force a few cells into the memo
  const std::string doc = haar_to_json(h);
  const Aut h2 = haar_from_json(doc);
  // Loading replays exactly the memoized cells, so the dump is bit-identical.
  CHECK(haar_to_json(h2) == doc);
  CHECK(agree_to_depth(h, h2, 6));

  // A tampered memo is rejected.
  std::string bad = doc;
  const auto pos = bad.find("[");
  bad.replace(pos, 2, "[9");
  CHECK_THROWS(haar_from_json(bad));
}
