#pragma once

#include "lifts/geometry.hpp"

namespace lifts::detail {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  Vector x;
};

/// Dense two-phase simplex: maximize c.x subject to A x <= b with x free.
/// Bland's rule; meant for the handful of constraints a polytope domain has.
LpResult maximize(const Vector& c, const Matrix& A, const Vector& b);

}  // namespace lifts::detail
