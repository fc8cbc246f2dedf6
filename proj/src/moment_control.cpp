#include "eigensteer/moment_control.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>

#include "eigensteer/errors.hpp"
#include "eigensteer/numerics.hpp"

namespace eigensteer::moment {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

Mat gram_matrix(const MomentProblem& mp) {
    const int n = static_cast<int>(mp.frequencies.size());
    Mat G(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
            const double v = num::gram_entry(mp.frequencies[k] + mp.frequencies[l],
                                             mp.horizon);
            G(k, l) = v;
            G(l, k) = v;
        }
    return G;
}

Vec shifted_targets(const MomentProblem& mp) {
    const int n = static_cast<int>(mp.frequencies.size());
    Vec mt(n);
    for (int k = 0; k < n; ++k)
        mt(k) = std::exp(-mp.frequencies[k] * mp.horizon) * mp.targets[k];
    return mt;
}

/// Residual m~ - G c accumulated in extended precision.
Vec residual(const Mat& G, const Vec& c, const Vec& mt) {
    const int n = static_cast<int>(c.size());
    Vec r(n);
    for (int k = 0; k < n; ++k) {
        long double acc = mt(k);
        for (int l = 0; l < n; ++l)
            acc -= static_cast<long double>(G(k, l)) * static_cast<long double>(c(l));
        r(k) = static_cast<double>(acc);
    }
    return r;
}

double condition_estimate(const Mat& Gs) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Gs, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double lo = ev(0), hi = ev(ev.size() - 1);
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

} // namespace

bool ControlSignal::is_zero() const {
    for (double c : coefficients)
        if (c != 0.0) return false;
    return true;
}

double ControlSignal::eval_q(double s) const {
    double v = 0.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k)
        v += coefficients[k] * std::exp(frequencies[k] * (s - horizon));
    return v;
}

double ControlSignal::eval(double t_abs) const {
    const double s = t_abs - window_offset;
    if (s < -1e-12 || s > horizon + 1e-12)
        throw DomainError("control evaluated outside its window");
    const double sc = std::clamp(s, 0.0, horizon);
    return std::exp(-shift_lambda * sc) * eval_q(sc);
}

MomentProblem build_moment_problem(const SpectralProblem& p, int j,
                                   std::span<const double> y0, double T, int n_ctrl) {
    if (T <= 0.0) throw PreconditionError("build_moment_problem: T > 0");
    if (j < 1 || n_ctrl < 1) throw PreconditionError("build_moment_problem: j, n_ctrl >= 1");
    if (n_ctrl > kMaxControlModes)
        throw PreconditionError("build_moment_problem: n_ctrl beyond the cap of " +
                                std::to_string(kMaxControlModes) +
                                " (exponential Gram turns singular)");
    if (static_cast<int>(y0.size()) < n_ctrl)
        throw PreconditionError("build_moment_problem: y0 shorter than n_ctrl");

    MomentProblem mp;
    mp.horizon = T;
    mp.j = j;
    const double l1 = p.eigenvalue(1);
    mp.shift_lambda = l1 - p.eigenvalue(j); // mu_1 of the shifted operator
    mp.frequencies.resize(n_ctrl);
    mp.targets.resize(n_ctrl);
    mp.couplings.resize(n_ctrl);
    for (int k = 1; k <= n_ctrl; ++k) {
        const double b = p.b_entry(j, k);
        if (b == 0.0 || !std::isfinite(b))
            throw DegenerateCouplingError(j, k, p.name + ": zero coupling for mode " +
                                                  std::to_string(k));
        mp.frequencies[k - 1] = p.eigenvalue(k) - l1;
        mp.couplings[k - 1] = b;
        mp.targets[k - 1] = y0[k - 1] / b;
    }
    return mp;
}

GramSystem assemble_gram(const MomentProblem& mp) {
    GramSystem gs;
    gs.n = static_cast<int>(mp.frequencies.size());
    gs.T = mp.horizon;
    Mat G = gram_matrix(mp);
    Vec mt = shifted_targets(mp);
    gs.G.assign(G.data(), G.data() + G.size());
    gs.shifted_targets.assign(mt.data(), mt.data() + mt.size());
    return gs;
}

ControlSignal solve_min_norm(const MomentProblem& mp, const SolveOptions& opt) {
    const int n = static_cast<int>(mp.frequencies.size());
    Mat G = gram_matrix(mp);
    Vec mt = shifted_targets(mp);

    ControlSignal cs;
    cs.horizon = mp.horizon;
    cs.shift_lambda = mp.shift_lambda;
    cs.frequencies = mp.frequencies;

    // Symmetric diagonal scaling before factorization; the raw entries span
    // many orders of magnitude purely by scale.
    Vec S(n);
    for (int k = 0; k < n; ++k) S(k) = 1.0 / std::sqrt(G(k, k));
    Mat Gs = S.asDiagonal() * G * S.asDiagonal();
    cs.cond_estimate = condition_estimate(Gs);

    Eigen::LLT<Mat> llt(Gs);
    bool regularized = false;
    if (llt.info() != Eigen::Success) {
        const double ridge = opt.ridge_eps * Gs.trace() / n;
        Gs.diagonal().array() += ridge;
        llt.compute(Gs);
        regularized = true;
        if (llt.info() != Eigen::Success)
            throw SynthesisError("Gram factorization failed even after ridge", {});
    }
    cs.regularized = regularized;

    auto solve = [&](const Vec& rhs) -> Vec {
        Vec x = llt.solve((S.asDiagonal() * rhs).eval());
        return S.asDiagonal() * x;
    };

    Vec c = solve(mt);
    // One step of residual-based refinement recovers the digits the
    // conditioning costs.
    Vec r = residual(G, c, mt);
    c += solve(r);
    r = residual(G, c, mt);

    cs.coefficients.assign(c.data(), c.data() + c.size());
    cs.residuals.assign(r.data(), r.data() + r.size());

    for (int k = 0; k < n; ++k) {
        if (std::abs(r(k)) > opt.tol_res * (1.0 + std::abs(mt(k))))
            throw SynthesisError("moment residuals above tolerance after refinement",
                                 {cs.residuals});
    }

    const double q2 = c.dot(G * c);
    cs.l2_norm_q = q2 > 0.0 ? std::sqrt(q2) : 0.0;
    // ||p||: same quadratic form against the a-shifted Gram, with the single
    // overflow-prone scale factor kept in log space.
    const double a = -2.0 * cs.shift_lambda;
    Mat Ga(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
            const double v =
                num::gram_entry(mp.frequencies[k] + mp.frequencies[l] + a, mp.horizon);
            Ga(k, l) = v;
            Ga(l, k) = v;
        }
    const double quad = std::max(c.dot(Ga * c), 0.0);
    cs.l2_norm_p_log_sq =
        a * mp.horizon + (quad > 0.0 ? std::log(quad) : num::kNegInf);
    cs.l2_norm_p = std::exp(0.5 * cs.l2_norm_p_log_sq);
    return cs;
}

double control_l2_norm(const ControlSignal& cs) {
    // ||p||^2 = int e^{-2 shift s} q(s)^2 ds
    //         = e^{aT} sum_{kl} c_k c_l (1 - e^{-(w_k + w_l + a)T})/(w_k + w_l + a)
    // with a = -2 shift >= 0; every factor except the leading e^{aT} is
    // bounded by T, so only that one scale factor can overflow.
    const int n = static_cast<int>(cs.coefficients.size());
    const double a = -2.0 * cs.shift_lambda;
    long double quad = 0.0L;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            const double w = cs.frequencies[k] + cs.frequencies[l] + a;
            quad += static_cast<long double>(cs.coefficients[k]) * cs.coefficients[l] *
                    num::gram_entry(w, cs.horizon);
        }
    const double q = std::max(static_cast<double>(quad), 0.0);
    return std::exp(0.5 * a * cs.horizon) * std::sqrt(q);
}

CostSample empirical_cost_sample(const SpectralProblem& p, int j, double T, int n_ctrl) {
    std::vector<double> zeros(static_cast<std::size_t>(n_ctrl), 0.0);
    MomentProblem mp = build_moment_problem(p, j, zeros, T, n_ctrl);
    const int n = n_ctrl;
    Mat G = gram_matrix(mp);

    Vec S(n);
    for (int k = 0; k < n; ++k) S(k) = 1.0 / std::sqrt(G(k, k));
    Mat Gs = S.asDiagonal() * G * S.asDiagonal();
    Eigen::LLT<Mat> llt(Gs);
    if (llt.info() != Eigen::Success)
        throw SynthesisError("empirical_cost: Gram factorization failed", {});

    // W G^{-1} W via scaled solves; symmetrize against roundoff.
    Vec W(n);
    for (int k = 0; k < n; ++k)
        W(k) = std::exp(-mp.frequencies[k] * T) / std::abs(mp.couplings[k]);
    Mat Ginv_scaled = llt.solve(Mat::Identity(n, n));
    Mat Ginv = S.asDiagonal() * Ginv_scaled * S.asDiagonal();
    Mat Q = W.asDiagonal() * Ginv * W.asDiagonal();
    Q = 0.5 * (Q + Q.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Mat> es(Q, Eigen::EigenvaluesOnly);
    const double lmax = std::max(es.eigenvalues()(n - 1), 0.0);

    CostSample out;
    out.T = T;
    out.cond = condition_estimate(Gs);
    out.cost = std::max(1.0, std::exp(-mp.shift_lambda * T)) * std::sqrt(lmax);
    return out;
}

double empirical_cost(const SpectralProblem& p, int j, double T, int n_ctrl) {
    return empirical_cost_sample(p, j, T, n_ctrl).cost;
}

constants::CostModel fit_cost_model(const SpectralProblem& p, int j, int n_ctrl,
                                    std::span<const double> grid, double headroom) {
    if (grid.empty()) throw PreconditionError("fit_cost_model: empty grid");
    double nu = 0.0;
    for (double T : grid) {
        const double c = empirical_cost(p, j, T, n_ctrl);
        if (c > 1.0) nu = std::max(nu, T * std::log(c));
    }
    constants::CostModel cm;
    cm.nu = std::max(nu * headroom, 1e-3);
    cm.T0 = 1.0;
    return cm;
}

} // namespace eigensteer::moment
