#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "visfactor/geometry.hpp"
#include "visfactor/rng.hpp"
#include "visfactor/scene.hpp"

namespace visfactor::closure {

using geom::GridPoint;
using geom::LatticeEdge;
using EdgeList = std::vector<LatticeEdge>;

/// Edge subset of an m x n admissible lattice (kept sorted, no duplicates).
struct PatternGraph {
  int rows = 0;
  int cols = 0;
  EdgeList edges;

  bool has(const LatticeEdge& e) const;
  friend bool operator==(const PatternGraph&, const PatternGraph&) = default;
};

/// Connected pattern: randomized DFS spanning tree plus extra edges up to a
/// Normal(rho*E, (rho_std*E)^2) target clipped to [N-1, E].
PatternGraph gen_cf2(int rows, int cols, double rho, double rho_std, SeededRng& rng);

/// Bounding rectangle first, then uniform extra edges up to a target clipped
/// to [0, E]. rho = 0 is accepted and yields the bare rectangle.
PatternGraph gen_cf1(int rows, int cols, double rho, double rho_std, SeededRng& rng);

bool is_connected(const PatternGraph& g);

/// Shifts the edges so the smallest row and column are 0, then sorts.
EdgeList normalize(EdgeList edges);

/// Translation-only containment of the model edges in the pattern.
bool contains_model(const EdgeList& model, const PatternGraph& pattern);

/// Connected subgraph of 3..6 (or [min_edges, max_edges]) pattern edges grown
/// by a randomized edge BFS from a random seed edge; normalized.
EdgeList extract_model(const PatternGraph& pattern, int min_edges, int max_edges, SeededRng& rng);

/// Adds the model's edges to the pattern at a random translation that fits.
void plant_model(PatternGraph& pattern, const EdgeList& model, SeededRng& rng);

struct WalkPath {
  GridPoint start;
  std::vector<GridPoint> visited;  // visited.front() == start

  std::vector<geom::Segment> segments() const;
  GridPoint end() const { return visited.back(); }
  friend bool operator==(const WalkPath&, const WalkPath&) = default;
};

/// Candidate next nodes from the walk's end: unvisited nodes whose segment
/// neither overlaps an earlier segment collinearly, nor passes through a
/// visited node, nor ends on an earlier segment.
std::vector<GridPoint> walk_candidates(int rows, int cols, const WalkPath& walk);

/// One attempt at a walk of exactly `steps` segments; empty on a dead end.
std::optional<WalkPath> grow_walk(int rows, int cols, GridPoint start, int steps, SeededRng& rng);

struct Cf3Item {
  int rows = 0;
  int cols = 0;
  WalkPath walk;
  GridPoint answer;  // 1-based (row, col)
};

/// Throws GenerationFailed after 1000 restarts.
Cf3Item gen_cf3(int rows, int cols, int min_steps, int max_steps, SeededRng& rng);
/// Applies the stored (drow, dcol) moves to the stored 0-based start and
/// returns the 1-based end point.
GridPoint replay_answer(const GridPoint& start, const std::vector<GridPoint>& moves);
bool walk_valid(int rows, int cols, const WalkPath& walk);

/// CF1: one pattern and five candidate shapes, exactly one hidden in it.
struct Cf1Question {
  PatternGraph pattern;
  std::vector<EdgeList> models;
  int correct = 0;
};
Cf1Question gen_cf1_question(int rows, int cols, double rho, double rho_std, SeededRng& rng);

/// CF2: one model and five patterns, each independently containing it or not.
struct Cf2Question {
  EdgeList model;
  std::vector<PatternGraph> patterns;
  std::vector<bool> truths;
};
Cf2Question gen_cf2_question(int rows, int cols, double rho, double rho_std, SeededRng& rng);

/// Pattern drawn on a fixed unit spacing so a model rendered with the same
/// `unit` has exactly the same size.
double pattern_unit(int rows, int cols);
Scene pattern_scene(const PatternGraph& g, double unit);
Scene model_scene(const EdgeList& model, double unit);
Scene cf3_shape_scene(const Cf3Item& item);
Scene cf3_grid_scene(const Cf3Item& item);

nlohmann::json edges_to_json(const EdgeList& edges);
EdgeList edges_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PatternGraph& g);
PatternGraph pattern_from_json(const nlohmann::json& j);

}  // namespace visfactor::closure
