#pragma once

#include <functional>
#include <span>
#include <vector>

namespace tdchan {

struct NelderMeadOptions {
  double tol = 1e-10;          // stop when the spread of simplex values is below tol ...
  double x_tol = 1e-8;         // ... and the simplex diameter is below x_tol
  int max_evals = 4000;
  double initial_step = 0.05;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evals = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Downhill simplex with the standard reflection/expansion/contraction/shrink
/// coefficients (1, 2, 1/2, 1/2).
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opts = {});

/// Euclidean projection onto {x : x_i >= 0, sum x_i = 1}.
std::vector<double> project_to_simplex(std::span<const double> y);

}  // namespace tdchan
