#pragma once

// Null-control synthesis for the linearized system on one time window, by
// solving the truncated moment problem with minimum L^2 norm over the span
// of the shifted exponentials e^{w_k (s-T)}. All quantities live in the
// frame of the j-shifted operator A - lambda_j I (first eigenvalue
// mu_1 = lambda_1 - lambda_j), whose moment frequencies are
// w_k = lambda_k - lambda_1 >= 0, w_1 = 0.

#include <span>
#include <vector>

#include "eigensteer/constants.hpp"
#include "eigensteer/spectral_problem.hpp"

namespace eigensteer::moment {

/// Hard cap on retained modes: exponential Gram matrices turn numerically
/// singular in binary64 well before 20 modes.
inline constexpr int kMaxControlModes = 16;

struct MomentProblem {
    double horizon = 0.0;               // T
    double shift_lambda = 0.0;          // mu_1 = lambda_1 - lambda_j (q = e^{shift s} p)
    int j = 1;
    std::vector<double> frequencies;    // w_k = lambda_k - lambda_1, nondecreasing, w_1 = 0
    std::vector<double> targets;        // m_k = <y0, phi_k> / <B phi_j, phi_k>
    std::vector<double> couplings;      // <B phi_j, phi_k>
};

/// Finite-dimensional Gram realization with shifted targets
/// (G c = m~, m~_k = e^{-w_k T} m_k), entirely in (0, T]-bounded entries.
struct GramSystem {
    int n = 0;
    double T = 0.0;
    std::vector<double> G;              // row-major n x n
    std::vector<double> shifted_targets;
    double cond_estimate = 0.0;
    bool regularized = false;
};

/// Control q(s) = sum_k c_k e^{w_k (s-T)} on [0,T];  p(s) = e^{-shift s} q(s).
struct ControlSignal {
    double horizon = 0.0;
    double shift_lambda = 0.0;
    double window_offset = 0.0;         // absolute start time of the window
    std::vector<double> frequencies;
    std::vector<double> coefficients;
    bool regularized = false;
    double l2_norm_q = 0.0;             // sqrt(c^T G c)
    double l2_norm_p = 0.0;             // e^{log_sq/2}; +inf on overflow
    double l2_norm_p_log_sq = 0.0;      // log ||p||^2
    double cond_estimate = 0.0;
    std::vector<double> residuals;      // shifted residuals G c - m~

    bool is_zero() const;
    double eval_q(double s) const;      // s relative to the window
    double eval(double t_abs) const;    // p(t_abs); throws DomainError outside
};

struct SolveOptions {
    double tol_res = 1e-8;              // relative to 1 + |m~_k|
    double ridge_eps = 1e-13;           // single ridge fallback on factorization failure
};

/// Assemble the moment problem for steering the j-shifted system from
/// y0 (coefficients 1..N_ctrl of the datum) to zero on [0,T].
MomentProblem build_moment_problem(const SpectralProblem& p, int j,
                                   std::span<const double> y0, double T, int n_ctrl);

GramSystem assemble_gram(const MomentProblem& mp);

/// Exact minimum-norm solution of the truncated moment problem (the control
/// lies in the span of the constraint gradients by construction). One step
/// of iterative refinement is always applied; residuals above tolerance
/// afterwards raise SynthesisError.
ControlSignal solve_min_norm(const MomentProblem& mp, const SolveOptions& opt = {});

/// ||p||_{L^2(0,T)} in closed form (pairwise exponential integrals).
double control_l2_norm(const ControlSignal& cs);

/// Truncated empirical control cost: the largest ||p|| over unit data in the
/// span of the first n_ctrl modes, max(1, e^{-mu_1 T}) sqrt(lmax(W G^{-1} W))
/// with W = diag(e^{-w_k T}/|b_jk|). A lower bound on the true cost when the
/// shifted pair is accretive (mu_1 = 0).
double empirical_cost(const SpectralProblem& p, int j, double T, int n_ctrl);

/// Same, also reporting the Gram condition estimate.
struct CostSample {
    double T = 0.0;
    double cost = 0.0;
    double cond = 0.0;
};
CostSample empirical_cost_sample(const SpectralProblem& p, int j, double T, int n_ctrl);

/// Fit a cost model nu such that cost(T) <= e^{nu/T} across the grid, with a
/// small safety margin; T0 = 1. The fit is empirical and is recorded as such
/// wherever it is used.
constants::CostModel fit_cost_model(const SpectralProblem& p, int j, int n_ctrl,
                                    std::span<const double> grid, double headroom = 1.25);

} // namespace eigensteer::moment
