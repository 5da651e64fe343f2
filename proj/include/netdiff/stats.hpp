#pragma once

namespace netdiff {

// log Gamma(x) without touching the global signgam, safe to call from
// parallel sections.
double log_gamma(double x);

// Regularized upper incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s), s > 0, x >= 0.
double regularized_gamma_q(double s, double x);

// Upper tail of the chi-squared distribution with df degrees of freedom,
// P(X >= x). df = 0 returns 1 (degenerate test convention).
double chi2_upper_tail(double x, double df);

} // namespace netdiff
