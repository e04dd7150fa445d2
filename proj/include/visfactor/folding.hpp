#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "visfactor/geometry.hpp"
#include "visfactor/rational.hpp"
#include "visfactor/rng.hpp"
#include "visfactor/scene.hpp"

namespace visfactor::folding {

using geom::FoldAxis;

/// A convex piece of paper in current coordinates. `moved_at` lists the folds
/// that reflected it, oldest first; undoing them in reverse maps the piece
/// back onto the flat sheet.
struct Layer {
  RPolygon poly;
  std::vector<int> moved_at;
};

struct FoldRecord {
  FoldAxis axis;
  int stationary = 1;             // sign of axis_side kept in place
  std::vector<int> moved_holes;   // indices into FoldState::holes
};

struct FoldState {
  std::vector<Layer> layers;
  std::vector<RSegment> creases;
  std::vector<RPoint> holes;
  std::vector<FoldRecord> history;

  /// Unit square, one layer.
  static FoldState flat();

  /// Boundary of the union of all layers, counter-clockwise.
  RPolygon outline() const;
  Rational area() const;  // summed over layers
  /// Maps a point of layer `i` back to the flat sheet.
  RPoint to_flat(std::size_t i, const RPoint& p) const;
};

/// Boundary of a union of convex polygons; the largest loop when several exist.
RPolygon union_outline(const std::vector<RPolygon>& polys);

/// Reflects the half not containing the outline centroid onto the other one.
/// Throws InvalidArgument when the axis does not cut the sheet.
FoldState fold(const FoldState& state, const FoldAxis& axis);
/// Reverts the last fold.
FoldState unfold(const FoldState& state);
/// Replays a list of axes from the flat sheet.
FoldState replay(const std::vector<FoldAxis>& axes);

/// Number of layers with `p` strictly inside; throws InvalidArgument when p is
/// outside the sheet or on any layer edge or crease.
int layers_at(const FoldState& state, const RPoint& p);

/// Every flat-sheet position pierced by punching through the folded sheet.
std::vector<RPoint> punch_and_unfold(const FoldState& state, const std::vector<RPoint>& punches);

/// Forward image of a flat point under the recorded folds.
RPoint refold(const FoldState& state, RPoint p);

enum class Corruption { none, displaced, added, dropped };
std::string to_string(Corruption c);

struct Vz2Candidate {
  std::vector<RPoint> holes;  // sorted
  Corruption corruption = Corruption::none;
  bool truth() const { return corruption == Corruption::none; }
};

struct Vz2Item {
  std::vector<FoldAxis> axes;
  std::vector<RPoint> punches;
  std::vector<RPoint> flat_holes;  // sorted
  std::vector<Vz2Candidate> candidates;

  FoldState state() const { return replay(axes); }
  std::vector<bool> truths() const;
};

struct Vz2Params {
  int min_folds = 1;
  int max_folds = 3;
  int min_punches = 1;
  int max_punches = 2;
  int candidates = 5;  // one true, the rest corrupted
};

/// Random sheet-cutting axis with offset on the 1/8 grid.
FoldAxis random_axis(const FoldState& state, SeededRng& rng);
/// Punch sites: centers of the 1/8 grid cells strictly inside a layer and on no edge.
std::vector<RPoint> punch_sites(const FoldState& state);
/// Corrupts a true hole set: displacement first, then add or drop.
Vz2Candidate corrupt(const std::vector<RPoint>& truth, SeededRng& rng);

Vz2Item gen_vz2(const Vz2Params& p, SeededRng& rng);

/// One panel per fold step, left to right; the last one shows the punches.
Scene sequence_scene(const Vz2Item& item);
/// Flat sheet with the candidate's holes.
Scene candidate_scene(const Vz2Candidate& c);

nlohmann::json axis_to_json(const FoldAxis& a);
FoldAxis axis_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Vz2Item& item);
Vz2Item vz2_from_json(const nlohmann::json& j);

}  // namespace visfactor::folding
