#pragma once

#include <string>
#include <vector>

#include "monitor/kernel.hpp"

namespace monitor {

/// Open path from the robot's position through a waypoint batch.
struct Path {
  Point origin;
  std::vector<Point> stops;  // permutation of the input waypoints
  double length = 0.0;       // sum of Euclidean legs

  std::string serialize() const;
};

/// Nearest-neighbor construction followed by 2-opt. The open path is
/// modeled as a tour whose return-to-origin edge costs 0, so the tour
/// value equals the open-path length.
Path route(const Point& origin, const std::vector<Point>& waypoints);

/// Grid cells intersected by segment a->b in traversal order (8-connected
/// line), subsampled to every stride-th cell; the endpoint cell is always
/// included and never repeats its predecessor.
std::vector<Point> rasterize_leg(const Point& a, const Point& b, int stride);

}  // namespace monitor
