#ifndef FZR_CORE_FUZZNUM_HPP
#define FZR_CORE_FUZZNUM_HPP

namespace fzr {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Trapezoidal fuzzy number by its four abscissae, a1 <= a2 <= a3 <= a4.
// Triangular when a2 == a3.
struct TrapezoidalFuzzyNumber {
  double a1, a2, a3, a4;

  TrapezoidalFuzzyNumber(double a1_, double a2_, double a3_, double a4_);
  double membership(double x) const;
};

// Beta-type fuzzy number in mode/precision form on (lb, ub): membership is
// the mode-normalized Beta kernel ((x-lb)/(m-lb))^(s m*) ((ub-x)/(ub-m))^(s (1-m*))
// with m* the mode rescaled to (0,1). Peak value is 1 at x = m.
struct BetaFuzzyNumber {
  double m, s, lb, ub;

  BetaFuzzyNumber(double mode, double precision, double lower, double upper);
  double membership(double x) const;
};

// Closed alpha-level set. alpha = 0 gives the support closure [lb, ub],
// alpha = 1 the degenerate core [m, m]; interior levels are found by
// bisection on each flank (membership is strictly monotone there).
Interval alpha_cut(const BetaFuzzyNumber& fn, double alpha);

// Center of gravity of the membership function, by adaptive quadrature.
double centroid(const BetaFuzzyNumber& fn);

// Kaufman fuzziness: range-normalized L1 distance to the nearest crisp set,
// (2/(ub-lb)) * integral |A(x) - [A(x) >= 1/2]| dx. 0 for crisp, 1 when
// membership is identically 1/2.
double kaufman_index(const BetaFuzzyNumber& fn);

struct ConversionResult {
  BetaFuzzyNumber fn;
  double residual;   // integrated squared membership difference at the optimum
  int iterations;
};

// Least-squares conversion: the Beta-type fuzzy number on [a1, a4] minimizing
// the integrated squared membership difference from the trapezoid. The
// support is pinned exactly; (m, s) are optimized by quasi-Newton on an
// unconstrained reparametrization from m0 = (a2+a3)/2 and s0 matching the
// half-cut width.
ConversionResult trapezoid_to_beta(const TrapezoidalFuzzyNumber& tp);

}  // namespace fzr

#endif
