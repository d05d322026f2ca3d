#include <doctest.h>

#include <json.hpp>

#include "treesym/serialize.hpp"

using namespace treesym;
using nlohmann::json;

namespace {
const TreeParams k3{3};
Vertex V(const char* s) { return Vertex::parse(s); }
}  // namespace

TEST_CASE("classification documents") {
  const json hyp = json::parse(classification_to_json(classify(left_mult(k3, V("01")))));
  CHECK(hyp.at("kind") == "hyperbolic");
  CHECK(hyp.at("l") == 2);
  CHECK(hyp.at("anchor") == "");

  const json inv = json::parse(classification_to_json(classify(left_mult(k3, V("0")))));
  CHECK(inv.at("kind") == "inversion");
  CHECK(inv.at("edge") == json::array({"", "0"}));

  const json ell = json::parse(classification_to_json(classify(random_stabilizer(k3, 5)))) ;
  CHECK(ell.at("kind") == "elliptic");
  CHECK(ell.at("witness") == "");
}

TEST_CASE("rooted documents round-trip") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RootedAut g = uniform_rooted(RootedShape({3, 2, 2}), seed);
    CHECK(rooted_from_json(rooted_to_json(g)) == g);
  }
  const json j = json::parse(rooted_to_json(uniform_rooted(RootedShape({2, 2}), 1)));
  CHECK(j.at("degrees") == json::array({2, 2}));
  CHECK(j.at("locals").size() == 2);
}

TEST_CASE("verdict documents carry certificates") {
  const Verdict compact =
      trichotomy(GenTuple{k3, {random_stabilizer(k3, 1), random_stabilizer(k3, 2)}});
  const json jc = json::parse(verdict_to_json(compact));
  CHECK(jc.at("verdict") == "COMPACT");
  CHECK(jc.at("witness").at("vertex") == "");

  const Verdict free =
      trichotomy(GenTuple{k3, {left_mult(k3, V("01")), left_mult(k3, V("21"))}});
  const json jf = json::parse(verdict_to_json(free));
  CHECK(jf.at("verdict") == "DISCRETE_FREE");
  CHECK(jf.at("certificate").contains("translation_lengths"));

  const Verdict dense =
      trichotomy(GenTuple{k3, {random_stabilizer(k3, 3), left_mult(k3, V("01"))}});
  const json jd = json::parse(verdict_to_json(dense));
  CHECK(jd.at("verdict") == "DENSE_TO_DEPTH");
  CHECK(jd.at("certificate").at("target") == "Aut0");
  CHECK(jd.at("certificate").at("depth") == 2);
  // Witness words are space-separated signed indices.
  for (const auto& w : jd.at("certificate").at("stabilizer_words"))
    CHECK_NOTHROW(word_parse(w.get<std::string>()));
}
