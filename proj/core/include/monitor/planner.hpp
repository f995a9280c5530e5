#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

#include "monitor/field.hpp"
#include "monitor/sogp.hpp"

namespace monitor {

/// Coarse candidate lattice over the field; one cell per block of the
/// fine grid, land blocks excluded.
struct PlanGrid {
  std::vector<Point> cells;                       // cell centers, fine-grid coords
  std::vector<std::array<int, 4>> fine_regions;   // r0, r1, c0, c1 per cell
};

struct SelectionResult {
  std::vector<Point> waypoints;      // backtraced x*_1..x*_n
  std::vector<double> stage_values;  // cumulative V_i along the chain
  double objective = 0.0;

  std::string serialize() const;
};

/// Posterior covariance of the measurements at the given cells:
/// Sigma_ij = k(x_i, x_j) + k_i^T C k_j, plus noise_var on the diagonal.
Eigen::MatrixXd posterior_covariance(const SogpState& s, const std::vector<Point>& cells);

/// H(Z_A) = 1/2 log((2 pi e)^|A| |Sigma_AA|).
double entropy(const SogpState& s, const std::vector<Point>& A);

/// I(Z_A; Z_B) = H(A) - H(A|B), clamped below at 0; A and B must be
/// disjoint.
double mutual_information(const SogpState& s, const std::vector<Point>& A,
                          const std::vector<Point>& B);

PlanGrid build_plan_grid(const FieldRaster& field, int rows, int cols);

/// Stage-wise DP over the grid: V_1(x) = I(x; rest), later stages add the
/// conditional gain given the best predecessor's backpointer chain.
/// Cells listed in exclude (indices into grid.cells) are not candidates.
SelectionResult select_waypoints(const SogpState& s, const PlanGrid& grid, int n,
                                 const std::vector<long>& exclude = {});

}  // namespace monitor
