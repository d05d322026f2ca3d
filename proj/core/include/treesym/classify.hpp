#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "treesym/aut.hpp"

namespace treesym {

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct NotHyperbolic : std::invalid_argument {
  explicit NotHyperbolic(const std::string& what) : std::invalid_argument(what) {}
};

struct Elliptic {
  Vertex witness;  // fixed vertex
};
struct Inversion {
  Edge edge;  // the swapped geometric edge
};
struct Hyperbolic {
  int length;     // minimal translation length
  Vertex anchor;  // a vertex on the axis
};
using Classification = std::variant<Elliptic, Inversion, Hyperbolic>;

int displacement(const Aut& g, const Vertex& x);

// Displacement descent from t0: move to a strictly better neighbour while
// one exists, ties broken by the lexicographically least word. At the
// minimum x: zero displacement means elliptic; otherwise hyperbolic exactly
// when d(x, g^2 x) = 2 d(x, g x), else the middle edge of [x, gx] is the
// swapped edge of an inversion. Descent is monotone, so it terminates within
// the initial displacement; smaller max_steps throws BudgetExceeded.
Classification classify(const Aut& g, int max_steps = 1 << 14);

bool is_elliptic_like(const Classification& c);  // elliptic or inversion
int translation_length(const Classification& c);  // 0 unless hyperbolic

// A finite window of a hyperbolic axis: the orbit under g of the geodesic
// from the anchor to its image, covering g^i(anchor) for i in [-N, N].
// Consumers must treat the window edges as unknown territory.
struct AxisWindow {
  int length;                    // translation length of the owner
  int periods;                   // half-width N
  std::vector<Vertex> vertices;  // ordered geodesic, 2*N*length + 1 vertices
  int anchor_index;
};
AxisWindow axis_window(const Aut& g, int periods);  // throws NotHyperbolic

std::vector<Vertex> fixed_set_in_ball(const Aut& g, const Vertex& t, int radius);

// Projection of the axis of `other` onto the axis of `target`, computed on
// finite windows, doubled until the minimizing segment clears one full
// period on every window edge (then stable), or the cap is reached (then
// stable is false and the segment is only a lower bound).
struct ProjectionResult {
  std::vector<Vertex> segment;  // minimizing vertices on the target window
  int lo = 0, hi = 0;           // segment range in anchor-relative axis positions
  int distance = 0;             // d(window of target, window of other)
  bool stable = false;
};
struct WindowPolicy {
  int initial_periods = 2;
  int max_periods = 64;
};
ProjectionResult project_axes(const Aut& target, const Aut& other, const WindowPolicy& = {});

enum class SchottkyStatus { Satisfied, Violated, Inconclusive };

struct SchottkyReport {
  SchottkyStatus status = SchottkyStatus::Inconclusive;
  std::vector<int> lengths;  // translation length per entry (0 if not hyperbolic)
  std::vector<int> spans;    // per entry, the geodesic span of the projection union
  std::string detail;
};

// Schottky condition for a tuple of automorphisms: every entry hyperbolic
// and, for each i, the projections of all other axes onto axis i fit inside
// a geodesic of length at most l(i) - 1. Violation is reported only when
// provable on the computed windows; unstable projections at the window cap
// yield Inconclusive.
SchottkyReport schottky_check(const std::vector<Aut>& tuple, const WindowPolicy& = {});

}  // namespace treesym
