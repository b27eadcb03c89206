#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qcomb {

struct NelderMeadOptions {
  double x_tolerance = 1e-9;  // simplex diameter (max-norm) at convergence
  std::size_t max_iterations = 2000;
  double initial_step = 0.1;  // edge length of the starting simplex
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  double final_diameter = 0.0;
  std::vector<double> best_history;  // best value after each iteration
};

using Objective = std::function<double(std::span<const double>)>;

/// Downhill simplex minimisation. Converged means the simplex diameter fell
/// to x_tolerance; the best value is non-increasing from one iteration to the
/// next.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start,
                             const NelderMeadOptions& options = {});

}  // namespace qcomb
