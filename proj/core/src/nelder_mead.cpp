#include "qcomb/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qcomb/errors.hpp"

namespace qcomb {
namespace {

struct Vertex {
  std::vector<double> x;
  double f = 0.0;
};

double diameter(const std::vector<Vertex>& simplex) {
  double d = 0.0;
  for (std::size_t v = 1; v < simplex.size(); ++v) {
    for (std::size_t i = 0; i < simplex[v].x.size(); ++i) {
      d = std::max(d, std::abs(simplex[v].x[i] - simplex[0].x[i]));
    }
  }
  return d;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start,
                             const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  if (n == 0) {
    throw ValidationError("nelder_mead: empty parameter vector");
  }
  NelderMeadResult result;
  const auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Vertex> simplex(n + 1);
  simplex[0] = {start, eval(start)};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = start;
    x[i] += options.initial_step;
    simplex[i + 1] = {x, eval(x)};
  }
  const auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  const auto along = [&](const std::vector<double>& from, const std::vector<double>& to,
                         double t) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = from[i] + t * (to[i] - from[i]);
    }
    return x;
  };

  order();
  std::vector<double> centroid(n);
  while (result.iterations < options.max_iterations) {
    if (diameter(simplex) <= options.x_tolerance) {
      result.converged = true;
      break;
    }
    ++result.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) {
        centroid[i] += simplex[v].x[i] / static_cast<double>(n);
      }
    }
    Vertex& worst = simplex[n];
    const std::vector<double> xr = along(centroid, worst.x, -options.reflection);
    const double fr = eval(xr);

    if (fr < simplex[0].f) {
      const std::vector<double> xe = along(centroid, worst.x, -options.reflection * options.expansion);
      const double fe = eval(xe);
      worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < simplex[n - 1].f) {
      worst = {xr, fr};
    } else {
      const bool outside = fr < worst.f;
      const std::vector<double> xc =
          outside ? along(centroid, xr, options.contraction) : along(centroid, worst.x, options.contraction);
      const double fc = eval(xc);
      if (fc < (outside ? fr : worst.f)) {
        worst = {xc, fc};
      } else {
        for (std::size_t v = 1; v <= n; ++v) {
          simplex[v].x = along(simplex[0].x, simplex[v].x, options.shrink);
          simplex[v].f = eval(simplex[v].x);
        }
      }
    }
    order();
    result.best_history.push_back(simplex[0].f);
  }
  if (!result.converged && diameter(simplex) <= options.x_tolerance) {
    result.converged = true;
  }
  result.final_diameter = diameter(simplex);
  result.x = simplex[0].x;
  result.value = simplex[0].f;
  return result;
}

}  // namespace qcomb
