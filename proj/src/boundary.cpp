#include "qkd/boundary.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "qkd/entropy.hpp"
#include "qkd/parallel.hpp"

namespace qkd {
namespace {

double state_hashing_rate(const BellDiagonal& s) {
  const ErrorRates r = rates_of(s);
  return hashing_rate(r.bit, r.phase);
}

BellDiagonal worst_case_input(double delta_b, double delta_p) {
  return {1.0 - delta_b - delta_p, delta_b, 0.0, delta_p};
}

void check_regime(double delta_b, double delta_p) {
  if (delta_b < 0.0 || delta_b > delta_p || delta_b + delta_p >= 0.5) {
    throw std::domain_error(
        "boundary search: need 0 <= delta_b <= delta_p and "
        "delta_b + delta_p < 1/2");
  }
}

std::string decode_sequence(unsigned path, int depth) {
  std::string seq(static_cast<std::size_t>(depth), 'B');
  for (int i = 0; i < depth; ++i) {
    if ((path >> (depth - 1 - i)) & 1u) {
      seq[static_cast<std::size_t>(i)] = 'P';
    }
  }
  return seq;
}

}  // namespace

SequenceApplication apply_sequence(const BellDiagonal& s,
                                   std::string_view sequence) {
  SequenceApplication app{s, 1.0};
  for (char op : sequence) {
    if (op == 'B') {
      const BStepResult b = b_step(app.state, app.state);
      app.state = b.state;
      app.yield_factor *= 0.5 * b.survival;
    } else if (op == 'P') {
      app.state = p_step(app.state);
      app.yield_factor /= 3.0;
    } else {
      throw std::invalid_argument("apply_sequence: tokens must be B or P");
    }
  }
  return app;
}

SecuritySearchResult secure_with_some_sequence(double delta_b, double delta_p,
                                               int max_steps) {
  check_regime(delta_b, delta_p);
  if (max_steps < 0 || max_steps > kMaxSequenceSteps) {
    throw std::invalid_argument("secure_with_some_sequence: max_steps out of range");
  }
  const BellDiagonal start = worst_case_input(delta_b, delta_p);
  if (state_hashing_rate(start) > kPositiveRateFloor) {
    return {true, ""};
  }
  // Breadth-first over sequence prefixes: within a depth the frontier is
  // in lexicographic order (B before P), so the first hit is the witness.
  std::vector<BellDiagonal> frontier{start};
  std::vector<BellDiagonal> next;
  for (int depth = 1; depth <= max_steps; ++depth) {
    next.clear();
    next.reserve(frontier.size() * 2);
    for (std::size_t k = 0; k < frontier.size(); ++k) {
      // Child order B, P matches path bit 0, 1.
      const BStepResult b = b_step(frontier[k], frontier[k]);
      if (state_hashing_rate(b.state) > kPositiveRateFloor) {
        return {true, decode_sequence(static_cast<unsigned>(k << 1), depth)};
      }
      next.push_back(b.state);
      const BellDiagonal p = p_step(frontier[k]);
      if (state_hashing_rate(p) > kPositiveRateFloor) {
        return {true, decode_sequence(static_cast<unsigned>(k << 1 | 1), depth)};
      }
      next.push_back(p);
    }
    frontier.swap(next);
  }
  return {false, ""};
}

double diagonal_threshold(int max_steps, double tol) {
  if (tol <= 0.0) {
    throw std::invalid_argument("diagonal_threshold: tol must be positive");
  }
  double lo = 0.0;  // rate 1 at the origin
  double hi = 0.25 - 1e-9;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (secure_with_some_sequence(mid, mid, max_steps).secure) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<RegionPoint> boundary_region(double grid_step, int max_steps,
                                         double refine_tol, unsigned threads) {
  if (grid_step <= 0.0 || refine_tol <= 0.0) {
    throw std::invalid_argument("boundary_region: steps must be positive");
  }
  const std::size_t rows =
      static_cast<std::size_t>(std::floor(0.25 / grid_step)) + 1;
  std::vector<std::vector<RegionPoint>> per_row(rows);
  parallel_for(rows, threads, [&](std::size_t row) {
    const double db = static_cast<double>(row) * grid_step;
    std::vector<RegionPoint>& out = per_row[row];
    double last_secure = -1.0;
    for (std::size_t j = 0;; ++j) {
      const double dp = db + static_cast<double>(j) * grid_step;
      if (db + dp >= 0.5 - 1e-12) {
        break;
      }
      SecuritySearchResult r = secure_with_some_sequence(db, dp, max_steps);
      if (r.secure) {
        last_secure = dp;
      }
      out.push_back({db, dp, r.secure, std::move(r.witness), false});
    }
    if (last_secure >= 0.0 && last_secure + grid_step + db < 0.5 - 1e-12) {
      // Refine the boundary inside the cell following the last secure node.
      double lo = last_secure;
      double hi = last_secure + grid_step;
      while (hi - lo > refine_tol) {
        const double mid = 0.5 * (lo + hi);
        if (secure_with_some_sequence(db, mid, max_steps).secure) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      SecuritySearchResult r = secure_with_some_sequence(db, lo, max_steps);
      out.push_back({db, lo, r.secure, std::move(r.witness), true});
    }
  });
  std::vector<RegionPoint> result;
  for (auto& row : per_row) {
    for (auto& point : row) {
      result.push_back(std::move(point));
    }
  }
  return result;
}

}  // namespace qkd
