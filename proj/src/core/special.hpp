#ifndef FZR_CORE_SPECIAL_HPP
#define FZR_CORE_SPECIAL_HPP

namespace fzr::special {

// Digamma psi^(0)(x), x > 0. Recurrence to x >= 10 then asymptotic series;
// absolute error below 1e-12 on (0, inf).
double digamma(double x);

// Trigamma psi^(1)(x), x > 0. Same scheme as digamma.
double trigamma(double x);

double polygamma(int order, double x);  // order in {0, 1}

// Upper incomplete gamma Gamma(a, x) for x > 0 and real a (a may be <= 0).
// Series for the lower tail when x < a + 1, Lentz continued fraction otherwise.
double upper_incomplete_gamma(double a, double x);

// Standard normal helpers. log_norm_cdf stays accurate far into the left tail.
double norm_cdf(double x);
double log_norm_cdf(double x);
double norm_pdf(double x);
double inv_norm_cdf(double p);  // Acklam/Wichura-style, |rel err| < 1e-9

// zeta_k(t) = d^k/dt^k log Phi(t), k = 1, 2, 3. Used by the skew-normal fit.
double zeta1(double t);
double zeta2(double t);
double zeta3(double t);

double log_beta(double a, double b);

}  // namespace fzr::special

#endif
