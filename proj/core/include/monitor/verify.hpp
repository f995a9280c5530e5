#pragma once

#include <string>
#include <vector>

namespace monitor::verify {

/// Result of one oracle-comparison suite; `detail` is a one-line
/// human-readable summary including the max deviation observed.
struct SuiteResult {
  std::string name;
  bool pass = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Streamed SOGP (m >= n, omega = 0) vs exact GP predictions at probe
/// points, randomized streams of length <= 30.
SuiteResult sogp_equiv(int cases = 50, unsigned seed = 1000);

/// L_LOO vs the explicit leave-one-out refit oracle.
SuiteResult loo_value(int cases = 100, unsigned seed = 2000);

/// LOO gradient vs central finite differences in log space.
SuiteResult loo_grad(int cases = 100, unsigned seed = 3000);

/// Q downdate vs direct inversion of the reduced Gram; add-then-delete
/// round-trip against the closed-form reduced update.
SuiteResult deletion(int cases = 100, unsigned seed = 4000);

/// Entropy and mutual information vs dense determinant oracles, plus
/// symmetry and nonnegativity.
SuiteResult mutual_info(int cases = 100, unsigned seed = 5000);

/// select_waypoints vs an independently coded sequential maximizer on
/// seeded 4x4 grids, n in {2, 3, 4}; exact sequence match required.
SuiteResult dp_greedy(int cases = 50, unsigned seed = 6000);

/// Routed path length vs the exhaustive-permutation optimum (<= 8 stops).
SuiteResult tsp_exact(int cases = 100, unsigned seed = 7000);

}  // namespace monitor::verify
