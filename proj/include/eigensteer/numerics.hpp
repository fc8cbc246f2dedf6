#pragma once

// Cancellation-safe exponential primitives and log-space helpers. Everything
// that mixes exponentials of very different magnitude goes through here.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace eigensteer::num {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(1 - exp(-x)) for x > 0, stable across both regimes.
inline double log1mexp(double x) {
    return x > 0.6931471805599453 ? std::log1p(-std::exp(-x))
                                  : std::log(-std::expm1(-x));
}

/// log(exp(x) - 1) for x > 0.
inline double log_expm1(double x) {
    if (x > 36.0) return x + std::log1p(-std::exp(-x));
    return std::log(std::expm1(x));
}

/// (exp(x) - 1)/x with the removable singularity filled in.
inline double expm1_div(double x) {
    if (std::abs(x) < 1e-290) return 1.0;
    return std::expm1(x) / x;
}

/// (1 - exp(-y))/y for y >= 0; equals 1 at y = 0.
inline double one_mexp_div(double y) {
    if (y < 1e-290) return 1.0;
    return -std::expm1(-y) / y;
}

/// Gram entry of the exponential family: integral over [0,T] of
/// exp(x(s-T)) * exp(x'(s-T)) with x+x' = w >= 0, i.e. (1-e^{-wT})/w.
inline double gram_entry(double w, double T) {
    return T * one_mexp_div(w * T);
}

/// (exp(a) - exp(b))/(a - b), stable near a = b.
inline double exp_diff_ratio(double a, double b) {
    return std::exp(b) * expm1_div(a - b);
}

/// log of sum of exp(terms); -inf entries are ignored.
inline double logsumexp(std::span<const double> terms) {
    double m = kNegInf;
    for (double t : terms) m = std::max(m, t);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return m + std::log(s);
}

/// Incremental logsumexp: log(e^a + e^b).
inline double logadd(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

/// log of the upper incomplete gamma function Gamma(n, x) for integer n >= 1,
/// via Gamma(n,x) = (n-1)! e^{-x} sum_{m<n} x^m/m!. Exact closed form; the
/// sum is taken in log space so x in the tens of thousands is fine.
inline double log_upper_gamma_int(int n, double x) {
    double lx = std::log(x);
    double sum_log = kNegInf;
    double log_mfact = 0.0; // log m!
    for (int m = 0; m < n; ++m) {
        if (m > 0) log_mfact += std::log(static_cast<double>(m));
        sum_log = logadd(sum_log, m * lx - log_mfact);
    }
    return std::lgamma(static_cast<double>(n)) - x + sum_log;
}

/// log Gamma(a, x) upper bound for non-integer a, valid for x >= 2(a-1):
/// Gamma(a,x) <= 2 x^{a-1} e^{-x}. Returns NaN if the validity condition
/// fails so callers can widen the truncation instead.
inline double log_upper_gamma_bound(double a, double x) {
    if (x < 2.0 * (a - 1.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log(2.0) + (a - 1.0) * std::log(x) - x;
}

/// exp with silent underflow to 0 and overflow to +inf.
inline double exp_or_saturate(double lg) { return std::exp(lg); }

} // namespace eigensteer::num
