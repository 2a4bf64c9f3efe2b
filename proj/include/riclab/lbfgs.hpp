#pragma once

// Limited-memory BFGS for smooth unconstrained minimization.

#include "riclab/matcore.hpp"

#include <functional>

namespace riclab {

/// Returns f(x) and writes the gradient into `grad` (already sized).
/// A non-finite value marks x as outside the objective's domain.
using Objective = std::function<double(const Vector& x, Vector& grad)>;

struct LbfgsOptions {
  int memory = 12;
  int max_iterations = 2000;
  double gradient_tol = 1e-10;  // on ||grad||_inf / max(1, |f|)
  double value_tol = 1e-15;     // relative decrease over one iteration
  double c1 = 1e-4;
  double c2 = 0.9;
};

struct LbfgsResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

LbfgsResult lbfgs_minimize(const Objective& objective, Vector x0, const LbfgsOptions& options = {});

}  // namespace riclab
