#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "treesym/classify.hpp"
#include "treesym/permgroup.hpp"
#include "treesym/words.hpp"

namespace treesym {

// An ordered generating tuple. Nielsen moves never change the generated
// subgroup, only the tuple.
struct GenTuple {
  TreeParams params;
  std::vector<Aut> entries;

  std::size_t size() const { return entries.size(); }
};

struct MoveR {
  int i, j;  // 1-based, i != j
  int sign;  // entry i <- entry_i * entry_j^sign
};
struct MoveL {
  int i, j;
  int sign;  // entry i <- entry_j^sign * entry_i
};
struct MoveSwap {
  int i, j;
};
using NielsenMove = std::variant<MoveR, MoveL, MoveSwap>;

std::string move_str(const NielsenMove& m);  // "R 1 2 +", "L 2 1 -", "Swap 1 2"
GenTuple apply_move(const GenTuple& t, const NielsenMove& m);
NielsenMove move_inverse(const NielsenMove& m);

// Bounded greedy Nielsen reduction. Descends on the key
//   (#entries not elliptic-like, sum of translation lengths,
//    sum of displacements at t0)
// trying every single R/L move per step. Stops as soon as some entry is
// elliptic-like, or the tuple satisfies the Schottky condition, or no move
// improves the key, or the budget runs out.
struct ReduceEllipticized {
  GenTuple tuple;
  int index;  // 1-based elliptic-like entry
  std::vector<NielsenMove> moves;
};
struct ReduceSchottky {
  GenTuple tuple;
  std::vector<NielsenMove> moves;
  SchottkyReport report;
};
struct ReduceExhausted {
  GenTuple tuple;
  std::vector<NielsenMove> moves;
};
using ReduceResult = std::variant<ReduceEllipticized, ReduceSchottky, ReduceExhausted>;

struct TrichotomyConfig {
  int reduce_budget = 500;
  WindowPolicy window;
  int density_depth = 2;      // ball depth of the density certificate
  int word_budget_start = 8;  // doubled up to word_budget_max
  int word_budget_max = 64;
  int dfs_cap = 12;           // exhaustive radix enumeration cap
  int conjugate_cap = 48;     // conjugate family shift cap
  int classify_steps = 1 << 14;
  int witness_ball_cap = 64;  // precompact witness search radius cap
};

ReduceResult reduce(const GenTuple& t, int budget, const TrichotomyConfig& cfg = {});

// Precompactness is decidable for a finite tuple: the group is precompact
// iff every entry and every pairwise product is elliptic-like (fixed sets of
// elliptic-like elements are convex and pairwise intersecting families of
// convex subtrees have a common point). YES carries a common fixed vertex or
// geometric edge; NO carries a hyperbolic witness word.
struct PrecompactYes {
  std::variant<Vertex, Edge> witness;
};
struct PrecompactNo {
  Word witness;  // hyperbolic entry or pairwise product
};
using PrecompactResult = std::variant<PrecompactYes, PrecompactNo>;

PrecompactResult precompact_check(const GenTuple& t, const TrichotomyConfig& cfg = {});

// Certificate that the closure of the subgroup acts on the radius-`depth`
// rooted ball at s as its full automorphism group, plus a hyperbolic word.
// target records which closure the evidence is consistent with: the full
// automorphism group when an odd-displacement word exists, otherwise the
// type-preserving subgroup.
enum class DensityTarget { Aut0, AutFull };

struct DensityCertificate {
  Vertex at;
  int depth = 0;
  DensityTarget target = DensityTarget::Aut0;
  std::vector<Word> stabilizer_words;
  Word hyperbolic_word;
  std::optional<Word> odd_word;
};
struct DensityResult {
  bool certified = false;
  std::optional<DensityCertificate> certificate;
  std::string reason;  // set when not certified
};

// Searches words of length <= word_budget fixing s: exhaustive radix
// enumeration up to cfg.dfs_cap, then the axis conjugate family
// b^t a^m b^-t and products of collected stabilizer words up to the length
// budget. Certification is sound; NOT certified only reports that the
// budget ran out.
DensityResult density_probe(const GenTuple& t, const Vertex& s, int depth, int word_budget,
                            const TrichotomyConfig& cfg = {});

struct FreenessResult {
  bool relation_found = false;
  Word relation;
};

// Looks for a nontrivial reduced word of length <= max_len acting as the
// identity on ball(t0, depth). Evidence only: NO_RELATION_FOUND does not
// prove freeness.
FreenessResult freeness_probe(const GenTuple& t, int max_len, int depth);

struct VerdictCompact {
  std::variant<Vertex, Edge> witness;
};
struct VerdictDiscreteFree {
  std::vector<NielsenMove> moves;
  SchottkyReport schottky;
};
struct VerdictDense {
  DensityCertificate certificate;
  std::vector<NielsenMove> moves;
};
struct VerdictUndecided {
  std::string reason;
};
using Verdict = std::variant<VerdictCompact, VerdictDiscreteFree, VerdictDense, VerdictUndecided>;

const char* verdict_kind(const Verdict& v);
bool verdict_decisive(const Verdict& v);

// The trichotomy pipeline: precompact test, then Schottky reduction for
// all-hyperbolic tuples, then a density probe on a mixed tuple obtained by
// Nielsen moves. Budget exhaustion yields UNDECIDED, never a guess.
Verdict trichotomy(const GenTuple& t, const TrichotomyConfig& cfg = {});

}  // namespace treesym
