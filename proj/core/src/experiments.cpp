#include "treesym/experiments.hpp"

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "treesym/stats.hpp"

namespace treesym {

using nlohmann::json;

std::uint64_t trial_seed(const ExpConfig& cfg, std::uint64_t trial) {
  return Rng(cfg.seed).stream("trial").stream(trial).next();
}

std::string ExperimentReport::csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out.push_back(',');
    out += columns[i];
  }
  out.push_back('\n');
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      out += row[i];
    }
    out.push_back('\n');
  }
  return out;
}

namespace {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string fmt_u64(std::uint64_t x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%" PRIu64, x);
  return buf;
}

std::string shape_str(const RootedShape& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.degrees.size(); ++i) {
    if (i) s.push_back('.');
    s += std::to_string(shape.degrees[i]);
  }
  s.push_back(')');
  return s;
}

std::string rvertex_str(const RVertex& v) {
  if (v.empty()) return "root";
  std::string s;
  for (char c : v) s.push_back(static_cast<char>('0' + c));
  return s;
}

json config_json(const ExpConfig& cfg) {
  return json{{"k", cfg.k},
              {"seed", cfg.seed},
              {"samples", cfg.samples},
              {"trials", cfg.trials},
              {"depth", cfg.depth},
              {"jobs", cfg.jobs},
              {"reduce_budget", cfg.trichotomy.reduce_budget},
              {"word_budget_start", cfg.trichotomy.word_budget_start},
              {"word_budget_max", cfg.trichotomy.word_budget_max},
              {"dfs_cap", cfg.trichotomy.dfs_cap},
              {"conjugate_cap", cfg.trichotomy.conjugate_cap},
              {"window_max_periods", cfg.trichotomy.window.max_periods}};
}

std::string summary_str(const std::string& name, const ExpConfig& cfg, json counts,
                        json statistics, bool pass) {
  const json j{{"name", name},
               {"config", config_json(cfg)},
               {"counts", std::move(counts)},
               {"statistics", std::move(statistics)},
               {"pass", pass}};
  return j.dump();
}

void parallel_trials(int total, int jobs, const std::function<void(int)>& run) {
  if (jobs <= 1 || total <= 1) {
    for (int i = 0; i < total; ++i) run(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  const int count = std::min(jobs, total);
  workers.reserve(static_cast<std::size_t>(count));
  for (int w = 0; w < count; ++w) {
    workers.emplace_back([&] {
      for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1)) run(i);
    });
  }
  for (std::thread& th : workers) th.join();
}

// Sampler with a deliberate defect, used as the negative control for the
// uniformity harness: each local stays at the identity half of the time.
RootedAut biased_rooted(const RootedShape& shape, std::uint64_t seed) {
  Rng rng = Rng(seed).stream("biased_rooted");
  RootedAut g(shape);
  for (int l = 0; l < shape.levels(); ++l) {
    for (std::uint64_t i = 0; i < shape.width(l); ++i) {
      if (rng.below(2) == 0) continue;
      g.set_local(l, i, perm_random(rng, shape.degrees[static_cast<std::size_t>(l)]));
    }
  }
  return g;
}

}  // namespace

// --- uniformity (state powers of Haar draws are uniform) ---------------------

ExperimentReport exp_uniformity(const ExpConfig& cfg) {
  ExperimentReport rep;
  rep.name = "uniformity";
  rep.columns = {"case", "shape", "vertex", "cells", "n", "statistic", "dof", "p", "pass"};

  struct Case {
    std::string kind;
    RootedShape shape;
    RVertex u;  // ignored for "draw"
    bool biased = false;
  };
  const std::vector<Case> cases = {
      {"draw", RootedShape({2, 2}), {}, false},
      {"state_power", RootedShape({2, 2}), RVertex{0}, false},
      {"state_power", RootedShape({3, 2}), RVertex{0}, false},
      {"state_power", RootedShape({3, 2}), RVertex{1}, false},
      {"state_power", RootedShape({3, 2}), RVertex{2}, false},
      {"state_power", RootedShape({3, 2, 2}), RVertex{0}, false},
      {"state_power_biased", RootedShape({2, 2}), RVertex{0}, true},
  };

  bool all_pass = true;
  json stats = json::array();
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const Case& c = cases[ci];
    const std::uint64_t cells = c.kind == "draw"
                                    ? aut_order_u64(c.shape)
                                    : aut_order_u64(c.shape.subtree(static_cast<int>(c.u.size())));
    std::vector<std::uint64_t> counts(cells, 0);
    Rng seeds = Rng(cfg.seed).stream("uniformity").stream(ci);
    for (std::uint64_t i = 0; i < cfg.samples; ++i) {
      const std::uint64_t s = seeds.next();
      const RootedAut a = c.biased ? biased_rooted(c.shape, s) : uniform_rooted(c.shape, s);
      const std::uint64_t cell =
          c.kind == "draw" ? a.portrait_rank() : state_power(a, c.u).portrait_rank();
      ++counts[cell];
    }
    const ChiSquareResult r = chi_square_uniform(counts);
    const bool ok = c.biased ? r.p < 1e-6 : r.p > 0.01;
    all_pass = all_pass && ok;
    rep.rows.push_back({c.kind, shape_str(c.shape), rvertex_str(c.u), fmt_u64(cells),
                        fmt_u64(r.n), fmt_double(r.statistic), fmt_double(r.dof),
                        fmt_double(r.p), ok ? "1" : "0"});
    stats.push_back({{"case", c.kind},
                     {"shape", shape_str(c.shape)},
                     {"vertex", rvertex_str(c.u)},
                     {"statistic", r.statistic},
                     {"p", r.p},
                     {"pass", ok}});
  }
  rep.pass = all_pass;
  rep.summary_json = summary_str(
      rep.name, cfg, json{{"cases", cases.size()}, {"samples", cfg.samples}}, stats, all_pass);
  return rep;
}

// --- independence of truncated state powers along a descending chain ---------

ExperimentReport exp_independence(const ExpConfig& cfg) {
  ExperimentReport rep;
  rep.name = "independence";
  rep.columns = {"case", "u1", "u2", "n", "statistic", "dof", "p", "pass"};

  const RootedShape shape({2, 2, 2, 2, 2});
  struct Case {
    std::string kind;
    RVertex u1, u2;  // u2 empty means the per-draw same-orbit control
  };
  const std::vector<Case> cases = {
      {"gap2", RVertex{0}, RVertex{0, 0, 0}},
      {"gap2", RVertex{1}, RVertex{1, 0, 0}},
      {"gap2", RVertex{0}, RVertex{0, 1, 1}},
      {"same_orbit_control", RVertex{0}, {}},
  };

  bool all_pass = true;
  json stats = json::array();
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const Case& c = cases[ci];
    const bool control = c.u2.empty();
    std::vector<std::vector<std::uint64_t>> table(8, std::vector<std::uint64_t>(8, 0));
    Rng seeds = Rng(cfg.seed).stream("independence").stream(ci);
    for (std::uint64_t i = 0; i < cfg.samples; ++i) {
      const RootedAut a = uniform_rooted(shape, seeds.next());
      const RVertex u2 = control ? a.apply(c.u1) : c.u2;
      const std::uint64_t r1 = truncate(state_power(a, c.u1), 2).portrait_rank();
      const std::uint64_t r2 = truncate(state_power(a, u2), 2).portrait_rank();
      ++table[r1][r2];
    }
    const ChiSquareResult r = chi_square_independence(table);
    const bool ok = control ? r.p < 1e-6 : r.p > 0.01;
    all_pass = all_pass && ok;
    rep.rows.push_back({c.kind, rvertex_str(c.u1), control ? "orbit" : rvertex_str(c.u2),
                        fmt_u64(r.n), fmt_double(r.statistic), fmt_double(r.dof),
                        fmt_double(r.p), ok ? "1" : "0"});
    stats.push_back({{"case", c.kind}, {"statistic", r.statistic}, {"p", r.p}, {"pass", ok}});
  }
  rep.pass = all_pass;
  rep.summary_json = summary_str(
      rep.name, cfg, json{{"cases", cases.size()}, {"samples", cfg.samples}}, stats, all_pass);
  return rep;
}

// --- two sibling subtree stabilizers generate everything ---------------------

namespace {

// Pointwise stabilizer of the subtree hanging under the given root child, as
// an explicit generator list: root permutations fixing that child together
// with all elementary automorphisms outside the child's subtree.
std::vector<RootedAut> sibling_stabilizer_gens(const RootedShape& shape, int child) {
  std::vector<RootedAut> gens;
  const int d0 = shape.degrees.front();
  for (int a = 0; a < d0; ++a) {
    for (int b = a + 1; b < d0; ++b) {
      if (a == child || b == child) continue;
      Perm p = perm_identity(d0);
      std::swap(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(b)]);
      gens.push_back(elementary(shape, RVertex{}, std::move(p)));
    }
  }
  for (int l = 1; l < shape.levels(); ++l) {
    const int d = shape.degrees[static_cast<std::size_t>(l)];
    for (const RVertex& v : vertices_at_level(shape, l)) {
      if (v.front() == static_cast<char>(child)) continue;
      for (int a = 0; a + 1 < d; ++a) {
        Perm p = perm_identity(d);
        std::swap(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(a + 1)]);
        gens.push_back(elementary(shape, v, std::move(p)));
      }
    }
  }
  return gens;
}

}  // namespace

ExperimentReport exp_techno(const ExpConfig& cfg) {
  ExperimentReport rep;
  rep.name = "techno";
  rep.columns = {"case", "shape", "order", "full_order", "generates_full", "pass"};

  struct Case {
    std::string kind;
    RootedShape shape;
    bool expect_full;
  };
  const std::vector<Case> cases = {
      {"root_degree_3", RootedShape({3, 2}), true},
      {"root_degree_3", RootedShape({3, 2, 2}), true},
      {"root_degree_2_control", RootedShape({2, 2}), false},
  };

  bool all_pass = true;
  json stats = json::array();
  for (const Case& c : cases) {
    std::vector<RootedAut> gens = sibling_stabilizer_gens(c.shape, 0);
    const std::vector<RootedAut> other = sibling_stabilizer_gens(c.shape, 1);
    gens.insert(gens.end(), other.begin(), other.end());
    const BigInt order = group_order(gens);
    const BigInt full = aut_order(c.shape);
    const bool is_full = order == full;
    const bool ok = is_full == c.expect_full;
    all_pass = all_pass && ok;
    rep.rows.push_back({c.kind, shape_str(c.shape), order.str(), full.str(),
                        is_full ? "1" : "0", ok ? "1" : "0"});
    stats.push_back({{"case", c.kind},
                     {"shape", shape_str(c.shape)},
                     {"order", order.str()},
                     {"full_order", full.str()},
                     {"pass", ok}});
  }
  rep.pass = all_pass;
  rep.summary_json = summary_str(rep.name, cfg, json{{"cases", cases.size()}}, stats, all_pass);
  return rep;
}

// --- dense point construction: axis conjugates of a stabilizer draw ----------

namespace {

struct ConjugateScan {
  int first_hit_id = 0;  // 1-based position in the conjugate stream, 0 if unfound
  int first_hit_swap = 0;
  int hits_id = 0;
  int hits_swap = 0;
  int conjugates = 0;
  BigInt assembled_order = 0;
};

// Conjugates b^t a^m b^-t for t = 1..cap on both sides of the axis, with m
// the orbit period of b^-t(s) under a. Every one fixes s; its direction
// action at s fixes the axis direction it was pulled along, and the
// remaining two directions carry an independent uniform local, realizing
// the order-2 window group {identity, swap}.
ConjugateScan scan_conjugates(const Aut& a, const Aut& b, const Vertex& s, int cap, int depth) {
  ConjugateScan out;
  const RootedShape shape = ball_shape(b.k(), depth);
  PermGroup group(static_cast<unsigned>(shape.leaf_count()));
  int stream_pos = 0;
  for (int t = 1; t <= cap; ++t) {
    for (const int sign : {+1, -1}) {
      const Aut bpow = power(b, sign * t);
      const Vertex u = inverse(bpow).apply(s);
      Vertex cur = a.apply(u);
      int m = 1;
      while (cur != u && m <= 512) {
        cur = a.apply(cur);
        ++m;
      }
      if (cur != u) continue;
      const Aut c = compose(bpow, compose(power(a, m), inverse(bpow)));
      if (c.apply(s) != s) throw std::logic_error("axis conjugate failed to fix s");
      ++out.conjugates;
      ++stream_pos;
      group.add_generator(ball_action(c, s, depth).leaf_permutation());
      const Perm& sigma = ball_action(c, s, 1).local(0, 0);
      if (perm_is_identity(sigma)) {
        ++out.hits_id;
        if (!out.first_hit_id) out.first_hit_id = stream_pos;
      } else if (sigma[0] == 0 || sigma[1] == 1 || sigma[2] == 2) {
        // fixes one direction, swaps the other two
        ++out.hits_swap;
        if (!out.first_hit_swap) out.first_hit_swap = stream_pos;
      }
    }
  }
  out.assembled_order = group.order();
  return out;
}

}  // namespace

ExperimentReport exp_densepoint(const ExpConfig& cfg) {
  ExperimentReport rep;
  rep.name = "densepoint";
  rep.columns = {"case",           "trial",   "seed",      "conjugates",
                 "first_hit_id",   "first_hit_swap", "hits_id", "hits_swap",
                 "assembled_order", "full_order",     "pass"};

  const TreeParams params{3};
  const Aut b = left_mult(params, Vertex::parse("01"));
  const Vertex s;  // the anchor of the axis of b
  const int depth = 2;
  const BigInt full = aut_order(ball_shape(3, depth));
  const int cap = 24;
  const int trials = std::min(cfg.trials, 10);

  bool all_pass = true;
  int total_hits_swap = 0, total_conjugates = 0;
  double mean_first_swap = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t seed = trial_seed(cfg, static_cast<std::uint64_t>(trial));
    const Aut a = random_stabilizer(params, seed);
    const ConjugateScan sc = scan_conjugates(a, b, s, cap, depth);
    const bool ok = sc.first_hit_id > 0 && sc.first_hit_swap > 0 && sc.assembled_order == full;
    all_pass = all_pass && ok;
    total_hits_swap += sc.hits_swap;
    total_conjugates += sc.conjugates;
    mean_first_swap += sc.first_hit_swap;
    rep.rows.push_back({"trial", std::to_string(trial), fmt_u64(seed),
                        std::to_string(sc.conjugates), std::to_string(sc.first_hit_id),
                        std::to_string(sc.first_hit_swap), std::to_string(sc.hits_id),
                        std::to_string(sc.hits_swap), sc.assembled_order.str(), full.str(),
                        ok ? "1" : "0"});
  }
  mean_first_swap /= trials;

  // Degenerate control: with the identity in place of the Haar draw every
  // conjugate is trivial, so the swap target is never realized.
  const ConjugateScan control = scan_conjugates(identity(params), b, s, cap, depth);
  const bool control_ok = control.first_hit_swap == 0 && control.assembled_order == 1;
  all_pass = all_pass && control_ok;
  rep.rows.push_back({"identity_control", "-1", "0", std::to_string(control.conjugates),
                      std::to_string(control.first_hit_id), "0",
                      std::to_string(control.hits_id), "0", control.assembled_order.str(),
                      full.str(), control_ok ? "1" : "0"});

  rep.pass = all_pass;
  rep.summary_json = summary_str(
      rep.name, cfg, json{{"trials", trials}, {"conjugate_cap", 2 * cap}},
      json{{"mean_first_hit_swap", mean_first_swap},
           {"swap_hit_rate",
            total_conjugates ? double(total_hits_swap) / total_conjugates : 0.0},
           {"control_pass", control_ok}},
      all_pass);
  return rep;
}

// --- trichotomy Monte Carlo over three sampling slices ------------------------

namespace {

Vertex random_cyclically_reduced(Rng& rng, int k, int len) {
  while (true) {
    std::string w;
    for (int i = 0; i < len; ++i) {
      std::uint8_t c;
      do {
        c = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(k)));
      } while (!w.empty() && static_cast<std::uint8_t>(w.back()) == c);
      w.push_back(static_cast<char>(c));
    }
    if (w.front() != w.back()) return Vertex::from_letters(w);
  }
}

// Long translation lengths with spread axes: conjugated translations whose
// words start and end with the same letter, pushing the axis away from t0.
Aut schottky_slice_entry(Rng& rng, const TreeParams& params) {
  while (true) {
    const Vertex core = random_cyclically_reduced(rng, params.k, 8);
    std::string c;
    for (int i = 0; i < 3; ++i) {
      std::uint8_t x;
      do {
        x = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(params.k)));
      } while (!c.empty() && static_cast<std::uint8_t>(c.back()) == x);
      c.push_back(static_cast<char>(x));
    }
    if (static_cast<std::uint8_t>(c.back()) == core.letter(0)) continue;
    if (static_cast<std::uint8_t>(c.back()) == core.last()) continue;
    const std::string word = reduce_concat(reduce_concat(c, core.raw()), reversed(c));
    if (word.size() != c.size() * 2 + core.raw().size()) continue;
    return left_mult(params, Vertex::from_letters(word));
  }
}

GenTuple slice_tuple(const std::string& slice, const TreeParams& params, std::uint64_t seed) {
  Rng rng = Rng(seed).stream("slice");
  if (slice == "stabilizer")
    return GenTuple{params, {random_stabilizer(params, rng.next()),
                             random_stabilizer(params, rng.next())}};
  if (slice == "schottky")
    return GenTuple{params,
                    {schottky_slice_entry(rng, params), schottky_slice_entry(rng, params)}};
  // mixed: a Haar stabilizer together with the canonical translation
  return GenTuple{
      params, {random_stabilizer(params, rng.next()), left_mult(params, Vertex::parse("01"))}};
}

TrichotomyConfig doubled(const TrichotomyConfig& cfg) {
  TrichotomyConfig d = cfg;
  d.reduce_budget *= 2;
  d.word_budget_max *= 2;
  d.window.max_periods *= 2;
  return d;
}

std::string verdict_detail(const Verdict& v) {
  if (const auto* de = std::get_if<VerdictDense>(&v))
    return std::string("DENSE_TO_DEPTH(") + std::to_string(de->certificate.depth) + ";" +
           (de->certificate.target == DensityTarget::AutFull ? "Aut" : "Aut0") + ")";
  return verdict_kind(v);
}

}  // namespace

ExperimentReport exp_trichotomy_montecarlo(const ExpConfig& cfg) {
  ExperimentReport rep;
  rep.name = "trichotomy";
  rep.columns = {"slice", "trial", "seed", "verdict", "verdict_doubled", "stable_kind"};

  const TreeParams params{cfg.k};
  const std::vector<std::string> slices = {"stabilizer", "schottky", "mixed"};
  TrichotomyConfig tri = cfg.trichotomy;
  tri.density_depth = cfg.depth;

  struct Trial {
    std::vector<std::string> row;
    std::string slice, kind, detail;
    bool stable = false;
  };
  std::vector<Trial> trials(static_cast<std::size_t>(cfg.trials) * slices.size());

  parallel_trials(static_cast<int>(trials.size()), cfg.jobs, [&](int idx) {
    const std::string& slice = slices[static_cast<std::size_t>(idx / cfg.trials)];
    const int trial = idx % cfg.trials;
    const std::uint64_t seed = trial_seed(cfg, static_cast<std::uint64_t>(idx));
    const GenTuple t = slice_tuple(slice, params, seed);
    const Verdict v = trichotomy(t, tri);
    const Verdict v2 = trichotomy(t, doubled(tri));
    const bool stable = !verdict_decisive(v) || std::string(verdict_kind(v)) == verdict_kind(v2);
    Trial& out = trials[static_cast<std::size_t>(idx)];
    out.slice = slice;
    out.kind = verdict_kind(v);
    out.detail = verdict_detail(v);
    out.stable = stable;
    out.row = {slice,          std::to_string(trial),  fmt_u64(seed),
               verdict_detail(v), verdict_detail(v2), stable ? "1" : "0"};
  });

  std::map<std::string, std::map<std::string, int>> counts;
  bool all_stable = true;
  int mixed_aut0 = 0;
  for (const Trial& t : trials) {
    ++counts[t.slice][t.kind];
    all_stable = all_stable && t.stable;
    if (t.slice == "mixed" && t.detail.find("Aut0") != std::string::npos) ++mixed_aut0;
    rep.rows.push_back(t.row);
  }

  const int n = cfg.trials;
  const auto count = [&](const std::string& slice, const std::string& kind) {
    const auto it = counts.find(slice);
    if (it == counts.end()) return 0;
    const auto jt = it->second.find(kind);
    return jt == it->second.end() ? 0 : jt->second;
  };
  const bool stabilizer_ok = count("stabilizer", "COMPACT") == n;
  const bool schottky_ok = count("schottky", "DISCRETE_FREE") * 10 >= n * 9;
  const bool mixed_dense_ok = count("mixed", "DENSE_TO_DEPTH") * 10 >= n * 8;
  const bool mixed_clean =
      count("mixed", "COMPACT") == 0 && count("mixed", "DISCRETE_FREE") == 0;
  rep.pass = stabilizer_ok && schottky_ok && mixed_dense_ok && mixed_clean && all_stable;

  json jcounts;
  for (const auto& [slice, m] : counts) {
    json inner;
    for (const auto& [kind, c] : m) inner[kind] = c;
    jcounts[slice] = std::move(inner);
  }
  rep.summary_json = summary_str(
      rep.name, cfg, jcounts,
      json{{"stabilizer_all_compact", stabilizer_ok},
           {"schottky_discrete_free_at_90pct", schottky_ok},
           {"mixed_dense_at_80pct", mixed_dense_ok},
           {"mixed_never_compact_or_free", mixed_clean},
           {"mixed_dense_target_aut0", mixed_aut0},
           {"all_verdicts_stable_under_doubled_budgets", all_stable}},
      rep.pass);
  return rep;
}

// --- failure of the trichotomy on a product of two trees ---------------------

namespace {

// A pair of automorphisms, one per factor tree, acting diagonally.
struct PairAut {
  Aut t, u;
};

PairAut pair_compose(const PairAut& a, const PairAut& b) {
  return {compose(a.t, b.t), compose(a.u, b.u)};
}
PairAut pair_inverse(const PairAut& a) { return {inverse(a.t), inverse(a.u)}; }

struct ProductChecks {
  bool not_compact = false;
  bool not_discrete = false;
  bool not_open = false;
  bool decisive = false;  // the first coordinate's quotient image is full
  std::string discrete_pair;
  std::string open_orders;
};

ProductChecks product_checks(const std::vector<PairAut>& gens, int depth, int word_len,
                             int probe_depth) {
  ProductChecks out;
  const int n = static_cast<int>(gens.size());
  const TreeParams pt{gens[0].t.k()}, pu{gens[0].u.k()};
  std::vector<PairAut> inv;
  for (const PairAut& g : gens) inv.push_back(pair_inverse(g));
  const auto letter = [&](int l) -> const PairAut& {
    return l > 0 ? gens[static_cast<std::size_t>(l - 1)] : inv[static_cast<std::size_t>(-l - 1)];
  };

  // Not compact: a short word whose first coordinate is hyperbolic.
  {
    std::vector<PairAut> stack{{identity(pt), identity(pu)}};
    enumerate_words(
        n, 3,
        [&](int l, int) {
          stack.push_back(pair_compose(letter(l), stack.back()));
          if (!is_elliptic_like(classify(stack.back().t))) {
            out.not_compact = true;
            return WordVisit::Stop;
          }
          return WordVisit::Descend;
        },
        [&] { stack.pop_back(); });
  }

  // Not discrete: two distinct words agreeing on both balls whose quotient
  // is nontrivial somewhere deeper (pigeonhole on the finite joint image).
  const std::vector<Vertex> ball_t = ball(Vertex(), depth, pt);
  const std::vector<Vertex> ball_u = ball(Vertex(), depth, pu);
  {
    std::unordered_map<std::string, Word> seen;
    std::vector<std::vector<Vertex>> images_t{ball_t}, images_u{ball_u};
    Word word;
    enumerate_words(
        n, word_len,
        [&](int l, int) {
          const PairAut& g = letter(l);
          std::vector<Vertex> nt(ball_t.size()), nu(ball_u.size());
          std::string key;
          for (std::size_t i = 0; i < ball_t.size(); ++i) {
            nt[i] = g.t.apply(images_t.back()[i]);
            key += nt[i].str();
            key.push_back('|');
          }
          key.push_back('/');
          for (std::size_t i = 0; i < ball_u.size(); ++i) {
            nu[i] = g.u.apply(images_u.back()[i]);
            key += nu[i].str();
            key.push_back('|');
          }
          images_t.push_back(std::move(nt));
          images_u.push_back(std::move(nu));
          word.push_back(l);
          if (!out.not_discrete) {
            const auto it = seen.find(key);
            if (it == seen.end()) {
              seen.emplace(std::move(key), word);
            } else {
              // gamma = word * other^-1 acts trivially on both balls; verify
              // it is nontrivial as an element by probing deeper.
              const Word gamma = word_concat(word, word_inverse(it->second));
              if (!gamma.empty()) {
                PairAut g2{identity(pt), identity(pu)};
                for (int gl : gamma) g2 = pair_compose(letter(gl), g2);
                for (const Vertex& v : ball(Vertex(), probe_depth, pt)) {
                  if (g2.t.apply(v) != v) {
                    out.not_discrete = true;
                    break;
                  }
                }
                if (!out.not_discrete) {
                  for (const Vertex& v : ball(Vertex(), probe_depth, pu)) {
                    if (g2.u.apply(v) != v) {
                      out.not_discrete = true;
                      break;
                    }
                  }
                }
                if (out.not_discrete)
                  out.discrete_pair = word_str(it->second) + " ~ " + word_str(word);
              }
            }
          }
          return WordVisit::Descend;
        },
        [&] {
          images_t.pop_back();
          images_u.pop_back();
          word.pop_back();
        });
  }

  // Not open to this depth: among words fixing both base vertices, the joint
  // ball image stays below the full product while the first coordinate's
  // image is full.
  {
    const RootedShape shape_t = ball_shape(pt.k, depth);
    const RootedShape shape_u = ball_shape(pu.k, depth);
    const unsigned deg_t = static_cast<unsigned>(shape_t.leaf_count());
    const unsigned deg_u = static_cast<unsigned>(shape_u.leaf_count());
    PermGroup joint(deg_t + deg_u);
    PermGroup first(deg_t);
    std::vector<Vertex> img_t{Vertex()}, img_u{Vertex()};
    Word word;
    enumerate_words(
        n, word_len,
        [&](int l, int) {
          const PairAut& g = letter(l);
          img_t.push_back(g.t.apply(img_t.back()));
          img_u.push_back(g.u.apply(img_u.back()));
          word.push_back(l);
          if (img_t.back().is_root() && img_u.back().is_root()) {
            PairAut w{identity(pt), identity(pu)};
            for (int wl : word) w = pair_compose(letter(wl), w);
            const PPerm at = ball_action(w.t, Vertex(), depth).leaf_permutation();
            const PPerm au = ball_action(w.u, Vertex(), depth).leaf_permutation();
            PPerm glued(deg_t + deg_u);
            for (unsigned i = 0; i < deg_t; ++i) glued[i] = at[i];
            for (unsigned i = 0; i < deg_u; ++i) glued[deg_t + i] = deg_t + au[i];
            joint.add_generator(glued);
            first.add_generator(at);
          }
          return WordVisit::Descend;
        },
        [&] {
          img_t.pop_back();
          img_u.pop_back();
          word.pop_back();
        });
    const BigInt full_t = aut_order(shape_t);
    const BigInt full_u = aut_order(shape_u);
    out.decisive = first.order() == full_t;
    out.not_open = out.decisive && joint.order() < full_t * full_u;
    out.open_orders = joint.order().str() + "/" + (full_t * full_u).str();
  }
  return out;
}

}  // namespace

ExperimentReport exp_product_trees(const ExpConfig& cfg) {
  ExperimentReport rep;
  rep.name = "product_trees";
  rep.columns = {"case",     "trial",    "seed",         "not_compact", "not_discrete",
                 "not_open", "decisive", "joint_orders", "collision",   "pass"};

  const TreeParams params{cfg.k};
  const int trials = std::min(cfg.trials, 20);
  bool all_pass = true;
  int decisive_count = 0;

  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t seed = trial_seed(cfg, static_cast<std::uint64_t>(trial));
    Rng rng = Rng(seed).stream("product");
    // First coordinates from the mixed slice; second coordinates powers of a
    // single stabilizer draw, whose closure is a small procyclic group.
    const Aut cu = random_stabilizer(params, rng.next());
    const std::vector<PairAut> gens = {
        {random_stabilizer(params, rng.next()), cu},
        {left_mult(params, Vertex::parse("01")), inverse(cu)},
    };
    const ProductChecks pc = product_checks(gens, cfg.depth, 8, 6);
    const bool ok = !pc.decisive || (pc.not_compact && pc.not_discrete && pc.not_open);
    all_pass = all_pass && ok;
    decisive_count += pc.decisive ? 1 : 0;
    rep.rows.push_back({"trial", std::to_string(trial), fmt_u64(seed),
                        pc.not_compact ? "1" : "0", pc.not_discrete ? "1" : "0",
                        pc.not_open ? "1" : "0", pc.decisive ? "1" : "0", pc.open_orders,
                        pc.discrete_pair, ok ? "1" : "0"});
  }

  // Control: a mixed second coordinate makes the joint depth-1 image full,
  // so the openness check must fail.
  int control_open_failures = 0;
  const int control_trials = 5;
  for (int trial = 0; trial < control_trials; ++trial) {
    const std::uint64_t seed = trial_seed(cfg, static_cast<std::uint64_t>(1000 + trial));
    Rng rng = Rng(seed).stream("product_control");
    const std::vector<PairAut> gens = {
        {random_stabilizer(params, rng.next()), random_stabilizer(params, rng.next())},
        {left_mult(params, Vertex::parse("01")), left_mult(params, Vertex::parse("01"))},
    };
    const ProductChecks pc = product_checks(gens, 1, 8, 6);
    if (pc.decisive && !pc.not_open) ++control_open_failures;
    rep.rows.push_back({"open_control", std::to_string(trial), fmt_u64(seed),
                        pc.not_compact ? "1" : "0", pc.not_discrete ? "1" : "0",
                        pc.not_open ? "1" : "0", pc.decisive ? "1" : "0", pc.open_orders,
                        pc.discrete_pair, pc.not_open ? "0" : "1"});
  }
  const bool control_open_ok = control_open_failures * 10 >= control_trials * 8;
  all_pass = all_pass && control_open_ok;

  // Control: a Schottky first coordinate leaves no nontrivial element close
  // to the identity, so the discreteness check must fail.
  bool control_discrete_ok;
  {
    Rng rng = Rng(trial_seed(cfg, 2000)).stream("product_control2");
    const Aut cu = random_stabilizer(params, rng.next());
    const std::vector<PairAut> gens = {
        {left_mult(params, Vertex::parse("0102")), cu},
        {left_mult(params, Vertex::parse("2101")), inverse(cu)},
    };
    const ProductChecks pc = product_checks(gens, cfg.depth, 8, 6);
    control_discrete_ok = !pc.not_discrete;
    rep.rows.push_back({"discrete_control", "0", "0", pc.not_compact ? "1" : "0",
                        pc.not_discrete ? "1" : "0", pc.not_open ? "1" : "0",
                        pc.decisive ? "1" : "0", pc.open_orders, pc.discrete_pair,
                        control_discrete_ok ? "1" : "0"});
  }
  all_pass = all_pass && control_discrete_ok;

  rep.pass = all_pass;
  rep.summary_json =
      summary_str(rep.name, cfg, json{{"trials", trials}, {"decisive", decisive_count}},
                  json{{"control_open_failures", control_open_failures},
                       {"control_open_ok", control_open_ok},
                       {"control_discrete_ok", control_discrete_ok}},
                  all_pass);
  return rep;
}

// --- pointwise stabilizers of finite sets are nontrivial ----------------------

namespace {

struct WitnessSearch {
  bool found = false;
  Word witness;
  Vertex moved;
};

// Streams stabilizer words of t0 (radix enumeration, axis conjugates, then
// pairwise quotients of everything collected) and reports the first one that
// fixes `fixed` pointwise while moving a vertex of `probe`.
WitnessSearch find_pointwise_witness(const GenTuple& t, const std::vector<Vertex>& fixed,
                                     const std::vector<Vertex>& probe, int radix_len,
                                     int conj_cap, int max_len) {
  WitnessSearch out;
  std::vector<Aut> inv;
  for (const Aut& a : t.entries) inv.push_back(inverse(a));
  const auto letter = [&](int l) -> const Aut& {
    return l > 0 ? t.entries[static_cast<std::size_t>(l - 1)]
                 : inv[static_cast<std::size_t>(-l - 1)];
  };
  std::vector<std::pair<Word, Aut>> collected;

  const auto consider = [&](const Word& w, const Aut& g) {
    if (out.found) return;
    collected.emplace_back(w, g);
    for (const Vertex& v : fixed)
      if (g.apply(v) != v) return;
    for (const Vertex& v : probe) {
      if (g.apply(v) != v) {
        out.found = true;
        out.witness = w;
        out.moved = v;
        return;
      }
    }
  };

  {
    Word word;
    std::vector<Vertex> img{Vertex()};
    enumerate_words(
        static_cast<int>(t.size()), radix_len,
        [&](int l, int) {
          word.push_back(l);
          img.push_back(letter(l).apply(img.back()));
          if (img.back().is_root()) {
            consider(word, word_aut(t.entries, word));
            if (out.found) return WordVisit::Stop;
          }
          return WordVisit::Descend;
        },
        [&] {
          word.pop_back();
          img.pop_back();
        });
    if (out.found) return out;
  }

  std::vector<int> hyp, ell;
  for (int i = 0; i < static_cast<int>(t.size()); ++i)
    (is_elliptic_like(classify(t.entries[static_cast<std::size_t>(i)])) ? ell : hyp).push_back(i);
  for (int shift = 1; shift <= conj_cap && !out.found; ++shift) {
    for (const int bi : hyp) {
      for (const int sign : {+1, -1}) {
        const Aut bpow = power(t.entries[static_cast<std::size_t>(bi)], sign * shift);
        for (const int ai : ell) {
          const Aut& a = t.entries[static_cast<std::size_t>(ai)];
          const int m_cap = max_len - 2 * shift;
          if (m_cap < 1) continue;
          const Vertex u = inverse(bpow).apply(Vertex());
          Vertex cur = a.apply(u);
          int m = 1;
          while (cur != u && m <= m_cap) {
            cur = a.apply(cur);
            ++m;
          }
          if (cur != u) continue;
          Word w;
          for (int r = 0; r < shift; ++r) w.push_back(-sign * (bi + 1));
          for (int r = 0; r < m; ++r) w.push_back(ai + 1);
          for (int r = 0; r < shift; ++r) w.push_back(sign * (bi + 1));
          consider(w, compose(bpow, compose(power(a, m), inverse(bpow))));
          if (out.found) return out;
        }
      }
    }
  }

  // Quotients of collected stabilizer words: by the pigeonhole on the finite
  // ball group, some pair agrees on any fixed ball and their quotient fixes
  // it pointwise.
  const std::size_t base = collected.size();
  for (std::size_t i = 0; i < base && !out.found; ++i) {
    for (std::size_t j = 0; j < base && !out.found; ++j) {
      if (i == j) continue;
      const Word w = word_concat(collected[i].first, word_inverse(collected[j].first));
      if (w.empty() || static_cast<int>(w.size()) > max_len) continue;
      consider(w, compose(inverse(collected[j].second), collected[i].second));
    }
  }
  return out;
}

}  // namespace

ExperimentReport exp_stabilizer_nontrivial(const ExpConfig& cfg) {
  ExperimentReport rep;
  rep.name = "stabilizer";
  rep.columns = {"case", "fixed_set", "found", "witness", "witness_len", "moved"};

  const TreeParams params{cfg.k};
  const GenTuple dense{params, {random_stabilizer(params, trial_seed(cfg, 0)),
                                left_mult(params, Vertex::parse("01"))}};
  const DensityResult dr = density_probe(dense, Vertex(), cfg.depth,
                                         cfg.trichotomy.word_budget_max, cfg.trichotomy);

  const std::vector<Vertex> probe = ball(Vertex(), 4, params);
  struct Case {
    std::string name;
    std::vector<Vertex> fixed;
  };
  const std::vector<Case> cases = {
      {"t0", {Vertex()}},
      {"ball1", ball(Vertex(), 1, params)},
      {"ball2", ball(Vertex(), 2, params)},
  };

  bool all_pass = dr.certified;
  for (const Case& c : cases) {
    const WitnessSearch ws = find_pointwise_witness(dense, c.fixed, probe, 10, 24, 40);
    all_pass = all_pass && ws.found;
    // Re-check the reported witness from scratch.
    if (ws.found) {
      const Aut g = word_aut(dense.entries, ws.witness);
      for (const Vertex& v : c.fixed)
        if (g.apply(v) != v) throw std::logic_error("stabilizer witness fails its fixed set");
      if (g.apply(ws.moved) == ws.moved)
        throw std::logic_error("stabilizer witness fails to move its vertex");
    }
    rep.rows.push_back({"dense", c.name, ws.found ? "1" : "0", word_str(ws.witness),
                        std::to_string(ws.witness.size()), ws.found ? ws.moved.str() : ""});
  }

  // Schottky control: the vertex stabilizer is trivial, so even the weakest
  // case has no witness.
  const GenTuple schottky{params, {left_mult(params, Vertex::parse("01")),
                                   left_mult(params, Vertex::parse("21"))}};
  const WitnessSearch control = find_pointwise_witness(schottky, {Vertex()}, probe, 8, 8, 16);
  all_pass = all_pass && !control.found;
  rep.rows.push_back({"schottky_control", "t0", control.found ? "1" : "0",
                      word_str(control.witness), std::to_string(control.witness.size()), ""});

  rep.pass = all_pass;
  rep.summary_json = summary_str(
      rep.name, cfg, json{{"cases", cases.size()}},
      json{{"density_certified", dr.certified}, {"control_found", control.found}}, all_pass);
  return rep;
}

// --- registry ----------------------------------------------------------------

const std::map<std::string, ExperimentFn>& experiment_registry() {
  static const std::map<std::string, ExperimentFn> reg = {
      {"uniformity", exp_uniformity},
      {"independence", exp_independence},
      {"techno", exp_techno},
      {"densepoint", exp_densepoint},
      {"trichotomy", exp_trichotomy_montecarlo},
      {"product_trees", exp_product_trees},
      {"stabilizer", exp_stabilizer_nontrivial},
  };
  return reg;
}

void write_report(const ExperimentReport& report, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream csv(out_dir + "/" + report.name + ".csv", std::ios::binary);
    csv << report.csv();
  }
  {
    std::ofstream js(out_dir + "/" + report.name + ".json", std::ios::binary);
    js << report.summary_json << "\n";
  }
}

}  // namespace treesym

