#include "monitor/route.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "monitor/errors.hpp"

namespace monitor {

namespace {
constexpr int kMaxTwoOptExchanges = 10000;

double dist(const Point& a, const Point& b) { return (a - b).norm(); }

double path_length(const Point& origin, const std::vector<Point>& stops) {
  double len = 0.0;
  Point prev = origin;
  for (const auto& p : stops) {
    len += dist(prev, p);
    prev = p;
  }
  return len;
}

}  // namespace

std::string Path::serialize() const {
  std::string out;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "origin,%.17g,%.17g\n", origin(0), origin(1));
  out += buf;
  for (std::size_t i = 0; i < stops.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "stop,%.17g,%.17g\n", stops[i](0), stops[i](1));
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "length,%.17g\n", length);
  out += buf;
  return out;
}

Path route(const Point& origin, const std::vector<Point>& waypoints) {
  if (waypoints.empty()) throw ContractError("route: empty waypoint set");
  const long n = static_cast<long>(waypoints.size());

  // Nearest-neighbor order from the origin, lowest index on ties.
  std::vector<bool> used(n, false);
  std::vector<Point> order;
  Point cur = origin;
  for (long step = 0; step < n; ++step) {
    long best = -1;
    double best_d = 0.0;
    for (long i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double d = dist(cur, waypoints[i]);
      if (best < 0 || d < best_d) {
        best = i;
        best_d = d;
      }
    }
    used[best] = true;
    order.push_back(waypoints[best]);
    cur = waypoints[best];
  }

  // 2-opt on the open path. Reversing stops[i..j] changes only the edge
  // into i and (when j is interior) the edge out of j; the return edge
  // after the last stop costs 0. A segment-relocation (or-opt) pass runs
  // after 2-opt stalls to escape its local optima; both repeat until
  // neither finds an improving move.
  int exchanges = 0;
  bool any_improved = true;
  while (any_improved && exchanges < kMaxTwoOptExchanges) {
    any_improved = false;

    bool improved = true;
    while (improved && exchanges < kMaxTwoOptExchanges) {
      improved = false;
      for (long i = 0; i < n - 1 && !improved; ++i) {
        const Point before = (i == 0) ? origin : order[i - 1];
        for (long j = i + 1; j < n; ++j) {
          double delta = dist(before, order[j]) - dist(before, order[i]);
          if (j + 1 < n)
            delta += dist(order[i], order[j + 1]) - dist(order[j], order[j + 1]);
          if (delta < -1e-12) {
            std::reverse(order.begin() + i, order.begin() + j + 1);
            ++exchanges;
            improved = any_improved = true;
            break;
          }
        }
      }
    }

    // Or-opt: move a block of 1..3 consecutive stops elsewhere.
    double cur_len = path_length(origin, order);
    bool moved = true;
    while (moved && exchanges < kMaxTwoOptExchanges) {
      moved = false;
      for (long len = 1; len <= 3 && len < n && !moved; ++len) {
        for (long i = 0; i + len <= n && !moved; ++i) {
          for (long k = 0; k + len <= n; ++k) {
            if (k == i) continue;
            std::vector<Point> base;
            base.reserve(order.size());
            for (long t2 = 0; t2 < n; ++t2)
              if (t2 < i || t2 >= i + len) base.push_back(order[t2]);
            for (int rev = 0; rev < 2; ++rev) {
              std::vector<Point> cand = base;
              std::vector<Point> block(order.begin() + i, order.begin() + i + len);
              if (rev) std::reverse(block.begin(), block.end());
              cand.insert(cand.begin() + k, block.begin(), block.end());
              const double cl = path_length(origin, cand);
              if (cl < cur_len - 1e-12) {
                order = std::move(cand);
                cur_len = cl;
                ++exchanges;
                moved = any_improved = true;
                break;
              }
            }
            if (moved) break;
          }
        }
      }
    }
  }

  Path p;
  p.origin = origin;
  p.stops = std::move(order);
  p.length = path_length(origin, p.stops);
  return p;
}

std::vector<Point> rasterize_leg(const Point& a, const Point& b, int stride) {
  if (stride < 1) throw ContractError("rasterize_leg: stride must be >= 1");
  const long ax = std::lround(a(0)), ay = std::lround(a(1));
  const long bx = std::lround(b(0)), by = std::lround(b(1));

  // 8-connected Bresenham traversal from a to b, inclusive.
  std::vector<Point> line;
  long x = ax, y = ay;
  const long dx = std::labs(bx - ax), sx = ax < bx ? 1 : -1;
  const long dy = -std::labs(by - ay), sy = ay < by ? 1 : -1;
  long err = dx + dy;
  while (true) {
    line.emplace_back(static_cast<double>(x), static_cast<double>(y));
    if (x == bx && y == by) break;
    const long e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }

  std::vector<Point> out;
  for (std::size_t i = 0; i < line.size(); i += static_cast<std::size_t>(stride))
    out.push_back(line[i]);
  if (out.empty() || out.back() != line.back()) out.push_back(line.back());
  return out;
}

}  // namespace monitor
