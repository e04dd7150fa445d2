#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "visfactor/rational.hpp"
#include "visfactor/rng.hpp"
#include "visfactor/scene.hpp"

namespace visfactor::formboard {

/// Random convex lattice polygon inside [0, n]^2 with area at least n^2 / 3.
RPolygon gen_target(int n, SeededRng& rng);

/// Allowed cut directions: vertical, horizontal and slopes +-1, +-2, +-3.
const std::vector<RPoint>& cut_directions();

struct Piece {
  RPolygon shape;     // as displayed: rotated, then shifted to the origin
  RPolygon original;  // where the fragment sits in the target frame
  int rotation = 0;   // quarter turns applied to `original` for display
  bool in_solution = false;
};

struct Vz1Item {
  int grid = 0;
  RPolygon target;
  std::vector<Piece> pieces;  // five, display order
  std::vector<int> solution;  // indices into pieces

  std::vector<bool> truths() const;
};

struct Vz1Params {
  int grid = 5;
  int min_solution = 3;
  int max_solution = 5;
  Rational min_area{1, 2};
};

/// Throws GenerationFailed after 100 restarts.
Vz1Item gen_vz1(const Vz1Params& p, SeededRng& rng);

/// Counter-clockwise quarter turns about the origin.
RPolygon rotate_quarter(const RPolygon& poly, int k);
/// Translates so the smallest x and y are 0.
RPolygon to_origin(const RPolygon& poly);

/// True when the closed convex polygons share interior points.
bool interiors_overlap(const RPolygon& a, const RPolygon& b);

struct Placement {
  int rotation = 0;
  RPoint offset;
  RPolygon placed;
};

/// Exact cover of a convex target by convex pieces using quarter-turn
/// rotations and translations (no reflections). Returns one placement per
/// piece, or nullopt when none exists.
std::optional<std::vector<Placement>> verify_tiling(const std::vector<RPolygon>& pieces, const RPolygon& target);

/// Subsets (bitmasks over pieces) whose area sum equals the target area.
std::vector<unsigned> area_matching_subsets(const std::vector<RPolygon>& pieces, const RPolygon& target);

Scene target_scene(const Vz1Item& item);
Scene pieces_scene(const Vz1Item& item);

nlohmann::json polygon_to_json(const RPolygon& p);
RPolygon polygon_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Vz1Item& item);
Vz1Item vz1_from_json(const nlohmann::json& j);

}  // namespace visfactor::formboard
