#include "netdiff/stats.hpp"
#include "netdiff/error.hpp"

#include <cmath>

namespace netdiff {

double log_gamma(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// Lower regularized gamma P(s, x) by series expansion; valid for x < s + 1.
double gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    double a = s;
    for (int i = 0; i < kMaxIter; ++i) {
        a += 1.0;
        term *= x / a;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + s * std::log(x) - log_gamma(s));
}

// Upper regularized gamma Q(s, x) by modified Lentz continued fraction; x >= s + 1.
double gamma_q_cf(double s, double x) {
    double b = x + 1.0 - s;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double f = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return f * std::exp(-x + s * std::log(x) - log_gamma(s));
}

} // namespace

double regularized_gamma_q(double s, double x) {
    if (!(s > 0.0) || x < 0.0 || !std::isfinite(s) || !std::isfinite(x)) {
        throw AnalysisError("regularized_gamma_q: invalid arguments");
    }
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
    return gamma_q_cf(s, x);
}

double chi2_upper_tail(double x, double df) {
    if (df < 0.0) throw AnalysisError("chi2_upper_tail: negative degrees of freedom");
    if (df == 0.0) return 1.0;
    if (x <= 0.0) return 1.0;
    if (!std::isfinite(x)) return 0.0;
    return regularized_gamma_q(df * 0.5, x * 0.5);
}

} // namespace netdiff
