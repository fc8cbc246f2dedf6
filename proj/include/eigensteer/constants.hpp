#pragma once

// Closed-form constants of the controllability estimates, evaluated so that
// theoretical bounds become executable predicates. Quantities that overflow
// binary64 (anything of the form e^{c/T} for small T) carry a log-space twin.

#include <utility>
#include <vector>

#include "eigensteer/spectral_problem.hpp"

namespace eigensteer::constants {

/// Control-cost model: N(tau) <= exp(nu/tau) for 0 < tau <= T0.
struct CostModel {
    double nu = 0.0;
    double T0 = 1.0;
};

/// Window schedule: T_n = T1/n^2, tau_n = sum of the first n windows,
/// increasing towards Tf = (pi^2/6) T1 <= T.
struct Schedule {
    double T1 = 0.0;
    double Tf = 0.0;
    double window(int n) const { return T1 / (static_cast<double>(n) * n); }
    double tau(int n) const;
};

struct TheoremOneConstants {
    double D = 0.0;
    double Gamma0 = 0.0;
    double T1 = 0.0;
    double Tf = 0.0;
    double RT = 0.0;     // e^{RT_log}; 0 when it underflows
    double RT_log = 0.0; // -6 Gamma0 / T1
    Schedule schedule;
};

struct SuffCondConstants {
    double C = 1.0;
    double M = 0.0;
    double Cq = 0.0;
    double Cqa = 0.0;
    double GammaJ = 0.0;
    double T0 = 0.0;     // min(1, 1/alpha^2)
    double b = 0.0;      // decay lower-bound estimate used in the max term
    double b_jj = 0.0;   // |<B phi_j, phi_j>|
    double q = 0.0;
    double alpha = 0.0;
    double lambda1 = 0.0;
};

/// D = 2 ||B|| e^{2 sigma + 3||B||/2 + 1/2} max(1, ||B||).
double compute_D(double b_norm, double sigma);

/// Gamma0 = 2 nu + max(ln D, 0).
double compute_gamma0(const CostModel& cm, double D);

/// T1 = min(6T/pi^2, 1, T0) and Tf = (pi^2/6) T1 = min(T, pi^2/6, pi^2 T0/6).
Schedule compute_schedule(double T, double T0);

/// Both sides of sum_{j=0}^n j^2/2^j = 2^{-n}(-n^2 - 4n + 6(2^n - 1)).
std::pair<double, double> weighted_sum_identity(int n);

/// K(T) with K^2 = ||B||^2 N^2 e^{(4 sigma + ||B|| + 1)T + 2||B|| sqrt(T)} (1 + ||B|| N^2).
double compute_KT(double T, double NT, double b_norm, double sigma);
/// log K(T) with log N supplied, for cost levels far beyond binary64.
double compute_KT_log(double T, double log_NT, double b_norm, double sigma);

/// Constants of the sufficient condition for the cost bound, for the pair
/// {A, B} of the given problem (lambda_1 as stored). decay scan up to scan_K.
SuffCondConstants compute_suffcond(const SpectralProblem& p, int j, double C,
                                   int scan_K = 200);
/// Same formulas applied to the shifted pair {A - lambda_j I, B}, whose first
/// eigenvalue is lambda_1 - lambda_j. This is the pair the steering loop
/// actually controls.
SuffCondConstants compute_suffcond_shifted(const SpectralProblem& p, int j, double C,
                                           int scan_K = 200);

struct GmBound {
    double value = 0.0;      // e^{log_value}, +inf if it overflows
    double tail = 0.0;       // e^{log_tail}
    double log_value = 0.0;  // truncated series, log space
    double log_tail = 0.0;   // rigorous tail bound, log space
    double log_total = 0.0;
    int trunc = 0;
};

/// Truncated G_M(T) = (M/T^4) e^{M/T} sum_k e^{-2 w_k T + M sqrt(w_k)} / b_jk^2
/// with w_k = lambda_k - lambda_1, plus a rigorous tail bound from the decay
/// condition and the integral comparison of the series. Throws
/// TruncationError when the tail exceeds tail_tol or the comparison's
/// monotonicity condition fails at the truncation index.
GmBound compute_GM(double M, double T, const SpectralProblem& p, int j, int trunc,
                   double tail_tol = 1e-12);

/// Single series term of G_M without the (M/T^4) e^{M/T} prefactor, log space.
double gm_term_log(double M, double T, double omega_k, double b_jk);

/// e^{-pi^2 Gamma0/T} / (e^{2 pi^2 Gamma0/(3T)} - 1) and its log.
double control_norm_bound(double Gamma0, double T);
double control_norm_bound_log(double Gamma0, double T);

/// Bundle for a steering run: D, Gamma0, schedule, guarantee radius.
TheoremOneConstants compute_theorem1(double b_norm, double sigma, const CostModel& cm,
                                     double T);

} // namespace eigensteer::constants
