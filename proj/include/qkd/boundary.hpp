#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qkd/bell.hpp"

namespace qkd {

// Hashing rates below this floor are indistinguishable from the
// separable limit: sequences driving the state toward (1/2, 0, 0, 1/2)
// have true rates down to 1e-38, which no floating-point search can
// certify. A rate counts as positive only above the floor.
inline constexpr double kPositiveRateFloor = 1e-16;

// Hard cap on B/P sequence length.
inline constexpr int kMaxSequenceSteps = 12;

struct SequenceApplication {
  BellDiagonal state;
  double yield_factor{};  // (1/2) p_s per B step, 1/3 per P step
};

// Applies tokens 'B' (control = target = current ensemble state) and
// 'P' (three identical copies) in order.
SequenceApplication apply_sequence(const BellDiagonal& s,
                                   std::string_view sequence);

struct SecuritySearchResult {
  bool secure{};
  std::string witness;  // shortest, then B-before-P
};

// Enumerates every B/P sequence of length 0..max_steps on the
// worst-case input (1 - delta_b - delta_p, delta_b, 0, delta_p) and
// reports whether any final state has a positive hashing rate.
// Requires delta_b <= delta_p and delta_b + delta_p < 1/2.
SecuritySearchResult secure_with_some_sequence(double delta_b, double delta_p,
                                               int max_steps);

// Supremum of secure points along delta_b = delta_p, by bisection.
// Security is assumed monotone along the diagonal; the region scan is
// the empirical check of that assumption.
double diagonal_threshold(int max_steps, double tol);

struct RegionPoint {
  double delta_b{};
  double delta_p{};
  bool secure{};
  std::string witness;
  bool refined{};  // bisection-refined boundary point, not a grid node
};

// Grid scan of the searched regime with one bisection-refined boundary
// point per delta_b row. Rows are computed independently; the output
// order depends only on the grid.
std::vector<RegionPoint> boundary_region(double grid_step, int max_steps,
                                         double refine_tol, unsigned threads);

}  // namespace qkd
