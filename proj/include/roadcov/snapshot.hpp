#pragma once

#include <cstddef>
#include <vector>

#include "roadcov/params.hpp"
#include "roadcov/point_processes.hpp"

namespace roadcov {

struct UavNode {
  Point3 position;
  LinkState state = LinkState::nlos;  // link state towards the typical user
  double fading = 1.0;                // unit-mean power gain for that state
};

struct ApNode {
  Point3 position;
  double fading = 1.0;
};

/// A road with its access points split by layer.
struct Road {
  Line line;
  std::vector<std::vector<ApNode>> layers;
};

/// One realized spatial state around a typical user at the origin.
struct NetworkSnapshot {
  std::vector<UavNode> uavs;
  std::vector<Road> roads;  // the typical road is the last entry
  double window_radius = 0.0;

  const Road& typical_road() const { return roads.back(); }

  /// Copy keeping only nodes within the given horizontal radius.
  NetworkSnapshot restricted_to(double radius) const;
};

/// Identifies a serving node. UAVs use road = -1, layer = -1.
struct NodeId {
  int road = -1;
  int layer = -1;
  std::size_t index = 0;

  friend bool operator==(const NodeId&, const NodeId&) = default;
};

}  // namespace roadcov
