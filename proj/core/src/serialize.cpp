#include "treesym/serialize.hpp"

#include <json.hpp>

namespace treesym {

using nlohmann::json;

std::string classification_to_json(const Classification& c) {
  json j;
  if (const auto* e = std::get_if<Elliptic>(&c)) {
    j["kind"] = "elliptic";
    j["witness"] = e->witness.str();
  } else if (const auto* inv = std::get_if<Inversion>(&c)) {
    j["kind"] = "inversion";
    j["edge"] = json::array({inv->edge.a.str(), inv->edge.b.str()});
  } else {
    const auto& h = std::get<Hyperbolic>(c);
    j["kind"] = "hyperbolic";
    j["l"] = h.length;
    j["anchor"] = h.anchor.str();
  }
  return j.dump();
}

std::string rooted_to_json(const RootedAut& g) {
  json j;
  j["degrees"] = g.shape().degrees;
  json levels = json::array();
  for (int l = 0; l < g.shape().levels(); ++l) {
    json row = json::array();
    for (std::uint64_t i = 0; i < g.shape().width(l); ++i) {
      json perm = json::array();
      for (std::uint8_t x : g.local(l, i)) perm.push_back(static_cast<int>(x));
      row.push_back(std::move(perm));
    }
    levels.push_back(std::move(row));
  }
  j["locals"] = std::move(levels);
  return j.dump();
}

RootedAut rooted_from_json(const std::string& text) {
  const json j = json::parse(text);
  RootedShape shape(j.at("degrees").get<std::vector<int>>());
  RootedAut g(shape);
  const json& levels = j.at("locals");
  if (levels.size() != static_cast<std::size_t>(shape.levels()))
    throw std::invalid_argument("rooted document level count mismatch");
  for (int l = 0; l < shape.levels(); ++l) {
    const json& row = levels.at(static_cast<std::size_t>(l));
    if (row.size() != shape.width(l))
      throw std::invalid_argument("rooted document width mismatch");
    for (std::uint64_t i = 0; i < shape.width(l); ++i) {
      Perm p;
      for (const auto& x : row.at(i)) p.push_back(static_cast<std::uint8_t>(x.get<int>()));
      g.set_local(l, i, std::move(p));
    }
  }
  return g;
}

namespace {

json witness_json(const std::variant<Vertex, Edge>& w) {
  if (const auto* v = std::get_if<Vertex>(&w)) return json{{"vertex", v->str()}};
  const auto& e = std::get<Edge>(w);
  return json{{"edge", json::array({e.a.str(), e.b.str()})}};
}

json words_json(const std::vector<Word>& ws) {
  json a = json::array();
  for (const Word& w : ws) a.push_back(word_str(w));
  return a;
}

}  // namespace

std::string verdict_to_json(const Verdict& v) {
  json j;
  j["verdict"] = verdict_kind(v);
  if (const auto* c = std::get_if<VerdictCompact>(&v)) {
    j["witness"] = witness_json(c->witness);
  } else if (const auto* df = std::get_if<VerdictDiscreteFree>(&v)) {
    json moves = json::array();
    for (const NielsenMove& m : df->moves) moves.push_back(move_str(m));
    j["certificate"] = {
        {"moves", std::move(moves)},
        {"translation_lengths", df->schottky.lengths},
        {"projection_spans", df->schottky.spans},
    };
  } else if (const auto* de = std::get_if<VerdictDense>(&v)) {
    json moves = json::array();
    for (const NielsenMove& m : de->moves) moves.push_back(move_str(m));
    j["certificate"] = {
        {"at", de->certificate.at.str()},
        {"depth", de->certificate.depth},
        {"target", de->certificate.target == DensityTarget::AutFull ? "Aut" : "Aut0"},
        {"stabilizer_words", words_json(de->certificate.stabilizer_words)},
        {"hyperbolic_word", word_str(de->certificate.hyperbolic_word)},
        {"moves", std::move(moves)},
    };
    if (de->certificate.odd_word) j["certificate"]["odd_word"] = word_str(*de->certificate.odd_word);
  } else {
    j["reason"] = std::get<VerdictUndecided>(v).reason;
  }
  return j.dump();
}

}  // namespace treesym
