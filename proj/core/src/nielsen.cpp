#include "treesym/nielsen.hpp"

#include <algorithm>
#include <array>
#include <tuple>

namespace treesym {

std::string move_str(const NielsenMove& m) {
  if (const auto* r = std::get_if<MoveR>(&m))
    return "R " + std::to_string(r->i) + " " + std::to_string(r->j) + (r->sign > 0 ? " +" : " -");
  if (const auto* l = std::get_if<MoveL>(&m))
    return "L " + std::to_string(l->i) + " " + std::to_string(l->j) + (l->sign > 0 ? " +" : " -");
  const auto& s = std::get<MoveSwap>(m);
  return "Swap " + std::to_string(s.i) + " " + std::to_string(s.j);
}

namespace {

void check_indices(const GenTuple& t, int i, int j) {
  const int n = static_cast<int>(t.size());
  if (i < 1 || i > n || j < 1 || j > n || i == j)
    throw std::invalid_argument("Nielsen move indices out of range");
}

}  // namespace

GenTuple apply_move(const GenTuple& t, const NielsenMove& m) {
  GenTuple out = t;
  if (const auto* r = std::get_if<MoveR>(&m)) {
    check_indices(t, r->i, r->j);
    const Aut& aj = t.entries[static_cast<std::size_t>(r->j - 1)];
    Aut& ai = out.entries[static_cast<std::size_t>(r->i - 1)];
    ai = compose(ai, r->sign > 0 ? aj : inverse(aj));
  } else if (const auto* l = std::get_if<MoveL>(&m)) {
    check_indices(t, l->i, l->j);
    const Aut& aj = t.entries[static_cast<std::size_t>(l->j - 1)];
    Aut& ai = out.entries[static_cast<std::size_t>(l->i - 1)];
    ai = compose(l->sign > 0 ? aj : inverse(aj), ai);
  } else {
    const auto& s = std::get<MoveSwap>(m);
    check_indices(t, s.i, s.j);
    std::swap(out.entries[static_cast<std::size_t>(s.i - 1)],
              out.entries[static_cast<std::size_t>(s.j - 1)]);
  }
  return out;
}

NielsenMove move_inverse(const NielsenMove& m) {
  if (const auto* r = std::get_if<MoveR>(&m)) return MoveR{r->i, r->j, -r->sign};
  if (const auto* l = std::get_if<MoveL>(&m)) return MoveL{l->i, l->j, -l->sign};
  return m;  // swaps are involutions
}

// --- reduce ------------------------------------------------------------------

namespace {

struct TupleKey {
  int non_elliptic;
  long long translation_sum;
  long long displacement_sum;

  auto tie() const { return std::tie(non_elliptic, translation_sum, displacement_sum); }
  bool operator<(const TupleKey& o) const { return tie() < o.tie(); }
};

TupleKey tuple_key(const GenTuple& t, int classify_steps) {
  TupleKey k{0, 0, 0};
  const Vertex t0;
  for (const Aut& a : t.entries) {
    const Classification c = classify(a, classify_steps);
    if (!is_elliptic_like(c)) {
      ++k.non_elliptic;
      k.translation_sum += translation_length(c);
    }
    k.displacement_sum += displacement(a, t0);
  }
  return k;
}

int first_elliptic_like(const GenTuple& t, int classify_steps) {
  for (std::size_t i = 0; i < t.size(); ++i)
    if (is_elliptic_like(classify(t.entries[i], classify_steps))) return static_cast<int>(i) + 1;
  return 0;
}

}  // namespace

ReduceResult reduce(const GenTuple& t, int budget, const TrichotomyConfig& cfg) {
  if (t.entries.empty()) throw std::invalid_argument("empty tuple");
  GenTuple cur = t;
  std::vector<NielsenMove> moves;
  TupleKey cur_key = tuple_key(cur, cfg.classify_steps);

  while (true) {
    if (const int idx = first_elliptic_like(cur, cfg.classify_steps))
      return ReduceEllipticized{cur, idx, moves};
    const SchottkyReport rep = schottky_check(cur.entries, cfg.window);
    if (rep.status == SchottkyStatus::Satisfied) return ReduceSchottky{cur, moves, rep};
    if (static_cast<int>(moves.size()) >= budget) return ReduceExhausted{cur, moves};

    std::optional<NielsenMove> best_move;
    std::optional<TupleKey> best_key;
    GenTuple best_tuple;
    const int n = static_cast<int>(cur.size());
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        for (int sign : {+1, -1}) {
          for (int kind : {0, 1}) {
            const NielsenMove m =
                kind == 0 ? NielsenMove(MoveR{i, j, sign}) : NielsenMove(MoveL{i, j, sign});
            GenTuple cand = apply_move(cur, m);
            const TupleKey k = tuple_key(cand, cfg.classify_steps);
            if (k < cur_key && (!best_key || k < *best_key)) {
              best_key = k;
              best_move = m;
              best_tuple = std::move(cand);
            }
          }
        }
      }
    }
    if (!best_move) return ReduceExhausted{cur, moves};
    cur = std::move(best_tuple);
    cur_key = *best_key;
    moves.push_back(*best_move);
  }
}

// --- precompactness ----------------------------------------------------------

PrecompactResult precompact_check(const GenTuple& t, const TrichotomyConfig& cfg) {
  if (t.entries.empty()) throw std::invalid_argument("empty tuple");
  const Vertex t0;
  const int n = static_cast<int>(t.size());
  for (int i = 0; i < n; ++i)
    if (!is_elliptic_like(classify(t.entries[static_cast<std::size_t>(i)], cfg.classify_steps)))
      return PrecompactNo{Word{i + 1}};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Aut prod = compose(t.entries[static_cast<std::size_t>(i)],
                               t.entries[static_cast<std::size_t>(j)]);
      if (!is_elliptic_like(classify(prod, cfg.classify_steps)))
        return PrecompactNo{Word{j + 1, i + 1}};
    }
  }
  // Elliptic-like fixed sets are convex subtrees; pairwise products being
  // elliptic-like forces pairwise common fixed points, and convex subtrees
  // of a tree have the Helly property, so a common vertex or geometric edge
  // exists. Its distance from t0 is at most the largest displacement.
  int rmax = 2;
  for (const Aut& a : t.entries) rmax = std::max(rmax, displacement(a, t0));
  rmax = std::min(rmax + 1, cfg.witness_ball_cap);
  for (int r = 0; r <= rmax; r = r == 0 ? 1 : r * 2) {
    const std::vector<Vertex> B = ball(t0, std::min(r, rmax), t.params);
    for (const Vertex& v : B) {
      bool fixed = true;
      for (const Aut& a : t.entries)
        if (a.apply(v) != v) {
          fixed = false;
          break;
        }
      if (fixed) return PrecompactYes{v};
    }
    for (const Vertex& v : B) {
      for (int x = 0; x < t.params.k; ++x) {
        const Vertex w = v.step(static_cast<std::uint8_t>(x));
        if (w < v) continue;  // each geometric edge once
        bool preserved = true;
        for (const Aut& a : t.entries) {
          const Vertex av = a.apply(v), aw = a.apply(w);
          if (!((av == v && aw == w) || (av == w && aw == v))) {
            preserved = false;
            break;
          }
        }
        if (preserved) return PrecompactYes{Edge(v, w)};
      }
    }
    if (r >= rmax) break;
  }
  throw std::logic_error("precompact tuple without a witness in the search radius");
}

// --- density probe -----------------------------------------------------------

namespace {

struct LetterTable {
  std::vector<Aut> fwd, bwd;
  const Aut& of(int letter) const {
    const std::size_t i = static_cast<std::size_t>(std::abs(letter)) - 1;
    return letter > 0 ? fwd[i] : bwd[i];
  }
};

LetterTable make_letters(const GenTuple& t) {
  LetterTable lt;
  lt.fwd = t.entries;
  lt.bwd.reserve(t.size());
  for (const Aut& a : t.entries) lt.bwd.push_back(inverse(a));
  return lt;
}

// First hyperbolic element among reduced words of length <= 3, radix order.
std::optional<Word> short_hyperbolic_word(const GenTuple& t, const LetterTable& lt,
                                          int classify_steps) {
  std::optional<Word> found;
  Word word;
  std::vector<Aut> stack{identity(t.params)};
  enumerate_words(
      static_cast<int>(t.size()), 3,
      [&](int letter, int) {
        word.push_back(letter);
        stack.push_back(compose(lt.of(letter), stack.back()));
        if (!is_elliptic_like(classify(stack.back(), classify_steps))) {
          found = word;
          return WordVisit::Stop;
        }
        return WordVisit::Descend;
      },
      [&] {
        word.pop_back();
        stack.pop_back();
      });
  return found;
}

}  // namespace

DensityResult density_probe(const GenTuple& t, const Vertex& s, int depth, int word_budget,
                            const TrichotomyConfig& cfg) {
  if (t.entries.empty()) throw std::invalid_argument("empty tuple");
  if (depth < 1) throw std::invalid_argument("density depth must be at least 1");
  if (word_budget < 1) throw std::invalid_argument("word budget must be at least 1");

  const int n = static_cast<int>(t.size());
  const LetterTable lt = make_letters(t);
  const RootedShape shape = ball_shape(t.params.k, depth);
  const BigInt full = aut_order(shape);

  DensityCertificate cert;
  cert.at = s;
  cert.depth = depth;

  // A word has odd displacement parity iff it uses an odd number of
  // non-type-preserving letters, so entries decide the reachable target.
  for (int i = 0; i < n; ++i) {
    if (!type_preserving(t.entries[static_cast<std::size_t>(i)])) {
      cert.odd_word = Word{i + 1};
      break;
    }
  }
  cert.target = cert.odd_word ? DensityTarget::AutFull : DensityTarget::Aut0;

  if (auto hw = short_hyperbolic_word(t, lt, cfg.classify_steps)) {
    cert.hyperbolic_word = *hw;
  } else {
    return DensityResult{false, std::nullopt,
                         "no hyperbolic word among reduced words of length <= 3"};
  }

  PermGroup group(static_cast<unsigned>(shape.leaf_count()));
  std::vector<std::pair<Word, Aut>> collected;
  bool generated = false;

  const auto consider = [&](const Word& w, const Aut& g) {
    if (generated) return;
    const PPerm lp = ball_action(g, s, depth).leaf_permutation();
    if (!group.contains(lp)) {
      group.add_generator(lp);
      collected.emplace_back(w, g);
      cert.stabilizer_words.push_back(w);
      generated = group.order() == full;
    }
  };

  // Stage 1 per budget step: exhaustive radix enumeration of short words.
  int dfs_done = 0;
  const auto run_dfs = [&](int up_to) {
    Word word;
    std::vector<Vertex> img{s};
    for (int len = dfs_done + 1; len <= up_to; ++len) {
      if (generated) break;
      enumerate_words_of_length(
          n, len,
          [&](int letter, int d) {
            word.push_back(letter);
            img.push_back(lt.of(letter).apply(img.back()));
            if (d == len && img.back() == s) {
              consider(word, word_aut(t.entries, word));
              if (generated) return WordVisit::Stop;
            }
            return WordVisit::Descend;
          },
          [&] {
            word.pop_back();
            img.pop_back();
          });
    }
    dfs_done = std::max(dfs_done, up_to);
  };

  // Stage 2: conjugates b^t a^m b^-t along hyperbolic axes. With m the orbit
  // period of b^-t(s) under a these always fix s, and their ball actions
  // sweep independent states of a. Re-scanned per budget step since the
  // admissible period grows with the length budget; duplicates are cheap.
  const auto run_conjugates = [&](int budget) {
    std::vector<int> hyp, others;
    for (int i = 0; i < n; ++i) {
      if (is_elliptic_like(classify(t.entries[static_cast<std::size_t>(i)], cfg.classify_steps)))
        others.push_back(i);
      else
        hyp.push_back(i);
    }
    if (others.empty()) return;
    for (int shift = 1; shift <= cfg.conjugate_cap && !generated; ++shift) {
      for (const int bi : hyp) {
        for (const int sign : {+1, -1}) {
          const int tt = sign * shift;
          if (2 * shift + 1 > budget) continue;
          const Aut& b = t.entries[static_cast<std::size_t>(bi)];
          const Aut bpow = power(b, tt);
          for (const int ai : others) {
            const Aut& a = t.entries[static_cast<std::size_t>(ai)];
            // Orbit period of b^-t(s) under a, capped by the length budget.
            const Vertex u = inverse(bpow).apply(s);
            Vertex cur = a.apply(u);
            int m = 1;
            const int m_cap = budget - 2 * shift;
            while (cur != u && m <= m_cap) {
              cur = a.apply(cur);
              ++m;
            }
            if (cur != u) continue;
            Word w;
            for (int r = 0; r < shift; ++r) w.push_back(-sign * (bi + 1));
            for (int r = 0; r < m; ++r) w.push_back(ai + 1);
            for (int r = 0; r < shift; ++r) w.push_back(sign * (bi + 1));
            const Aut c = compose(bpow, compose(power(a, m), inverse(bpow)));
            if (c.apply(s) != s) throw std::logic_error("axis conjugate failed to fix s");
            consider(w, c);
            if (generated) return;
          }
        }
      }
    }
  };

  // Stage 3: pairwise products of everything collected so far.
  const auto run_products = [&](int budget) {
    const std::size_t base = collected.size();
    for (std::size_t i = 0; i < base && !generated; ++i) {
      for (std::size_t j = 0; j < base && !generated; ++j) {
        if (i == j) continue;
        const Word w = word_concat(collected[i].first, collected[j].first);
        if (w.empty() || static_cast<int>(w.size()) > budget) continue;
        consider(w, compose(collected[j].second, collected[i].second));
      }
    }
  };

  for (int budget = std::min(cfg.word_budget_start, word_budget); !generated;
       budget = std::min(budget * 2, word_budget)) {
    run_dfs(std::min(budget, cfg.dfs_cap));
    if (!generated) run_conjugates(budget);
    if (!generated) run_products(budget);
    if (budget >= word_budget) break;
  }

  if (!generated) {
    return DensityResult{
        false, std::nullopt,
        "stabilizer words within budget generate a proper subgroup of the ball group (order " +
            group.order().str() + " of " + full.str() + ")"};
  }
  return DensityResult{true, cert, ""};
}

// --- freeness ----------------------------------------------------------------

FreenessResult freeness_probe(const GenTuple& t, int max_len, int depth) {
  if (t.entries.empty()) throw std::invalid_argument("empty tuple");
  const LetterTable lt = make_letters(t);
  const std::vector<Vertex> base = ball(Vertex(), depth, t.params);
  std::vector<std::vector<Vertex>> img{base};
  FreenessResult out;
  Word word;
  enumerate_words(
      static_cast<int>(t.size()), max_len,
      [&](int letter, int) {
        const Aut& g = lt.of(letter);
        const std::vector<Vertex>& top = img.back();
        std::vector<Vertex> next(top.size());
        bool all_fixed = true;
        for (std::size_t i = 0; i < top.size(); ++i) {
          next[i] = g.apply(top[i]);
          all_fixed = all_fixed && next[i] == base[i];
        }
        img.push_back(std::move(next));
        word.push_back(letter);
        if (all_fixed) {
          out.relation_found = true;
          out.relation = word;
          return WordVisit::Stop;
        }
        return WordVisit::Descend;
      },
      [&] {
        img.pop_back();
        word.pop_back();
      });
  return out;
}

// --- trichotomy --------------------------------------------------------------

const char* verdict_kind(const Verdict& v) {
  if (std::holds_alternative<VerdictCompact>(v)) return "COMPACT";
  if (std::holds_alternative<VerdictDiscreteFree>(v)) return "DISCRETE_FREE";
  if (std::holds_alternative<VerdictDense>(v)) return "DENSE_TO_DEPTH";
  return "UNDECIDED";
}

bool verdict_decisive(const Verdict& v) { return !std::holds_alternative<VerdictUndecided>(v); }

Verdict trichotomy(const GenTuple& t, const TrichotomyConfig& cfg) {
  if (t.entries.empty()) return VerdictUndecided{"empty tuple"};
  validate_params(t.params);

  const PrecompactResult pc = precompact_check(t, cfg);
  if (const auto* yes = std::get_if<PrecompactYes>(&pc)) return VerdictCompact{yes->witness};

  GenTuple working = t;
  std::vector<NielsenMove> moves;

  const auto classify_all = [&](const GenTuple& tt) {
    std::vector<Classification> cs;
    cs.reserve(tt.size());
    for (const Aut& a : tt.entries) cs.push_back(classify(a, cfg.classify_steps));
    return cs;
  };

  {
    std::vector<Classification> cs = classify_all(working);
    const bool all_hyp =
        std::none_of(cs.begin(), cs.end(), [](const Classification& c) { return is_elliptic_like(c); });
    if (all_hyp) {
      ReduceResult rr = reduce(working, cfg.reduce_budget, cfg);
      if (auto* sch = std::get_if<ReduceSchottky>(&rr))
        return VerdictDiscreteFree{sch->moves, sch->report};
      if (auto* ell = std::get_if<ReduceEllipticized>(&rr)) {
        working = std::move(ell->tuple);
        moves = std::move(ell->moves);
      } else {
        return VerdictUndecided{
            "all-hyperbolic tuple: reduction budget exhausted without a Schottky certificate"};
      }
    }
  }

  // Ensure the tuple is mixed: if every entry is elliptic-like, the group is
  // still not precompact, so some pairwise product is hyperbolic and one
  // right multiplication makes that entry hyperbolic.
  {
    std::vector<Classification> cs = classify_all(working);
    const bool any_hyp =
        std::any_of(cs.begin(), cs.end(), [](const Classification& c) { return !is_elliptic_like(c); });
    if (!any_hyp) {
      const PrecompactResult pcw = precompact_check(working, cfg);
      const auto* no = std::get_if<PrecompactNo>(&pcw);
      if (!no)
        return VerdictUndecided{"tuple became precompact under moves; inconsistent state"};
      if (no->witness.size() == 2) {
        const NielsenMove m = MoveR{no->witness[1], no->witness[0], +1};
        working = apply_move(working, m);
        moves.push_back(m);
      }
    }
  }

  std::optional<Vertex> anchor;
  for (const Aut& a : working.entries) {
    const Classification c = classify(a, cfg.classify_steps);
    if (const auto* h = std::get_if<Hyperbolic>(&c)) {
      anchor = h->anchor;
      break;
    }
  }
  if (!anchor) return VerdictUndecided{"no hyperbolic entry after mixing moves"};

  DensityResult dr = density_probe(working, *anchor, cfg.density_depth, cfg.word_budget_max, cfg);
  if (dr.certified) return VerdictDense{*dr.certificate, moves};
  return VerdictUndecided{dr.reason};
}

}  // namespace treesym
