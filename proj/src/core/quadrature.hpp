#ifndef FZR_CORE_QUADRATURE_HPP
#define FZR_CORE_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace fzr::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7/K15) on [a, b]. Splits the worst interval until
// the accumulated error estimate is below max(abs_tol, rel_tol * |value|).
// `breakpoints` seeds the initial subdivision (values outside (a, b) are
// ignored); pass the locations of known peaks or kinks so narrow features are
// seen by the first pass. Throws fzr::Error(numeric) on non-convergence.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-8, double abs_tol = 0.0,
                 const std::vector<double>& breakpoints = {}, int max_intervals = 2000);

}  // namespace fzr::quad

#endif
