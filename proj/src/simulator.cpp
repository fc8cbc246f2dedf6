#include "eigensteer/simulator.hpp"

#include <cmath>

#include "eigensteer/constants.hpp"
#include "eigensteer/errors.hpp"
#include "eigensteer/numerics.hpp"

namespace eigensteer::sim {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dev_norm(std::span<const double> v, int j) {
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double d = (static_cast<int>(k) + 1 == j) ? v[k] - 1.0 : v[k];
        s += d * d;
    }
    return std::sqrt(s);
}

} // namespace

GalerkinSystem make_system(const SpectralProblem& p, int n_sim, int shift_j,
                           kernels::Exec exec) {
    if (n_sim < 1) throw PreconditionError("make_system: n_sim >= 1");
    GalerkinSystem sys;
    const double shift = shift_j > 0 ? p.eigenvalue(shift_j) : 0.0;
    sys.lambda.resize(static_cast<std::size_t>(n_sim));
    double lmin = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= n_sim; ++k) {
        sys.lambda[k - 1] = p.eigenvalue(k) - shift;
        lmin = std::min(lmin, sys.lambda[k - 1]);
    }
    sys.sigma_eff = std::max(0.0, -lmin);
    sys.b_norm = p.b_norm;
    sys.B = p.coupling_table(n_sim, exec);
    return sys;
}

void free_decay(const GalerkinSystem& sys, std::span<double> state, double dt) {
    for (std::size_t k = 0; k < state.size(); ++k)
        state[k] *= std::exp(-sys.lambda[k] * dt);
}

Trajectory simulate_bilinear(const GalerkinSystem& sys, std::span<const double> u0,
                             const ControlFn& control, double t0, double t1,
                             const SimConfig& cfg) {
    if (t1 < t0) throw PreconditionError("simulate_bilinear: t1 >= t0");
    const int n = static_cast<int>(sys.lambda.size());
    if (static_cast<int>(u0.size()) != n)
        throw PreconditionError("simulate_bilinear: state size mismatch");

    std::vector<double> u(u0.begin(), u0.end());
    std::vector<double> work(n), mid(n);

    Trajectory traj;
    traj.n_sim = n;
    traj.sup_norm = norm2(u);
    if (cfg.track_deviation_from > 0)
        traj.sup_dev = dev_norm(u, cfg.track_deviation_from);
    if (cfg.record) {
        traj.times.push_back(t0);
        traj.states.push_back(u);
    }

    const bool has_p = static_cast<bool>(control);
    double t = t0;
    long step = 0;
    while (t < t1 - 1e-15 * std::max(1.0, std::abs(t1))) {
        double pt = has_p ? control(t) : 0.0;
        double dt = std::min(cfg.dt_max, t1 - t);
        if (has_p) {
            const double cap = cfg.tol_step / (sys.b_norm * (1.0 + std::abs(pt)));
            dt = std::min(dt, cap);
        }
        if (dt < 1e-12)
            throw StiffnessError("simulate_bilinear: step size underflow (dt < 1e-12)");

        // Strang: exact diagonal half-step, explicit midpoint for the
        // coupling, exact diagonal half-step.
        for (int k = 0; k < n; ++k) u[k] *= std::exp(-sys.lambda[k] * 0.5 * dt);

        if (has_p) {
            const double pm = control(t + 0.5 * dt);
            if (sys.drift_j > 0) {
                // Linear drift p B e_j: the column is constant, the substep
                // integrates it by the midpoint sample.
                const int j0 = sys.drift_j - 1;
                for (int k = 0; k < n; ++k) u[k] -= dt * pm * sys.B(k, j0);
            } else {
                // u' = -p(t) B u, explicit midpoint.
                kernels::coupling_matvec(sys.B, u, work, cfg.exec);
                for (int k = 0; k < n; ++k) mid[k] = u[k] - 0.5 * dt * pt * work[k];
                kernels::coupling_matvec(sys.B, mid, work, cfg.exec);
                for (int k = 0; k < n; ++k) u[k] -= dt * pm * work[k];
            }
        }

        for (int k = 0; k < n; ++k) u[k] *= std::exp(-sys.lambda[k] * 0.5 * dt);

        t += dt;
        ++step;
        traj.sup_norm = std::max(traj.sup_norm, norm2(u));
        if (cfg.track_deviation_from > 0)
            traj.sup_dev = std::max(traj.sup_dev, dev_norm(u, cfg.track_deviation_from));
        if (cfg.record && (step % cfg.record_stride == 0 || t >= t1)) {
            traj.times.push_back(t);
            traj.states.push_back(u);
        }
    }
    if (cfg.record && (traj.times.empty() || traj.times.back() != t)) {
        traj.times.push_back(t);
        traj.states.push_back(u);
    }
    if (!cfg.record) {
        traj.times.push_back(t);
        traj.states.push_back(u);
    }
    traj.steps = step;
    return traj;
}

std::vector<double> simulate_linear_duhamel(const SpectralProblem& p, int j,
                                            std::span<const double> y0,
                                            const moment::ControlSignal& cs) {
    const int n = static_cast<int>(y0.size());
    const double T = cs.horizon;
    const double l1 = p.eigenvalue(1);
    const double lj = p.eigenvalue(j);
    const double mu1 = l1 - lj;
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        const double mu_k = p.eigenvalue(k) - lj;
        const double w_k = p.eigenvalue(k) - l1;
        double integral = 0.0; // sum_l c_l (1 - e^{-(w_k + w_l)T})/(w_k + w_l)
        for (std::size_t l = 0; l < cs.coefficients.size(); ++l)
            integral += cs.coefficients[l] * num::gram_entry(w_k + cs.frequencies[l], T);
        y[k - 1] = std::exp(-mu_k * T) * y0[k - 1] -
                   p.b_entry(j, k) * std::exp(-mu1 * T) * integral;
    }
    return y;
}

std::vector<double> simulate_linear_duhamel(const SpectralProblem& p, int j,
                                            std::span<const double> y0, double T) {
    const int n = static_cast<int>(y0.size());
    const double lj = p.eigenvalue(j);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k)
        y[k - 1] = std::exp(-(p.eigenvalue(k) - lj) * T) * y0[k - 1];
    return y;
}

AprioriResult check_apriori_v(double sigma_eff, double b_norm, double sup_v,
                              double v0_norm, double T, double NT) {
    AprioriResult r;
    const double c1 = std::exp((2.0 * sigma_eff + b_norm) * T +
                               2.0 * b_norm * NT * std::sqrt(T) * v0_norm) *
                      (1.0 + b_norm * NT * NT);
    r.bound = c1 * v0_norm * v0_norm;
    r.measured = sup_v * sup_v;
    r.slack = r.bound - r.measured;
    r.ok = r.slack >= 0.0;
    return r;
}

AprioriResult check_apriori_w(double sigma_eff, double b_norm, double terminal_w_norm,
                              double v0_norm, double T, double NT, bool strict) {
    AprioriResult r;
    r.premise_ok = NT * v0_norm <= 1.0;
    if (!r.premise_ok && strict)
        throw PreconditionError("check_apriori_w: N(T) ||v0|| <= 1 violated in strict mode");
    const double K = constants::compute_KT(T, NT, b_norm, sigma_eff);
    r.bound = K * v0_norm * v0_norm;
    r.measured = terminal_w_norm;
    r.slack = r.bound - r.measured;
    r.ok = r.slack >= 0.0;
    return r;
}

SpilloverResult check_spillover(double tail_start_norm, double tail_end_norm,
                                double mu_tail_min, double T, double b_norm,
                                double p_l2, double sup_z) {
    SpilloverResult r;
    const double p_l1 = std::sqrt(T) * p_l2;
    r.bound = std::exp(-mu_tail_min * T) * tail_start_norm + b_norm * p_l1 * sup_z;
    r.measured = tail_end_norm;
    r.slack = r.bound - r.measured;
    r.ok = r.slack >= 0.0;
    return r;
}

} // namespace eigensteer::sim
