#include "eigensteer/constants.hpp"

#include <cmath>
#include <numbers>

#include "eigensteer/errors.hpp"
#include "eigensteer/numerics.hpp"

namespace eigensteer::constants {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
} // namespace

double Schedule::tau(int n) const {
    double s = 0.0;
    for (int m = 1; m <= n; ++m) s += 1.0 / (static_cast<double>(m) * m);
    return T1 * s;
}

double compute_D(double b_norm, double sigma) {
    if (b_norm <= 0.0) throw PreconditionError("compute_D: b_norm must be > 0");
    if (sigma < 0.0) throw PreconditionError("compute_D: sigma must be >= 0");
    return 2.0 * b_norm * std::exp(2.0 * sigma + 1.5 * b_norm + 0.5) *
           std::max(1.0, b_norm);
}

double compute_gamma0(const CostModel& cm, double D) {
    if (D <= 0.0) throw PreconditionError("compute_gamma0: D must be > 0");
    return 2.0 * cm.nu + std::max(std::log(D), 0.0);
}

Schedule compute_schedule(double T, double T0) {
    if (T <= 0.0 || T0 <= 0.0) throw PreconditionError("compute_schedule: T, T0 > 0");
    Schedule s;
    s.Tf = std::min({T, kPi2 / 6.0, kPi2 / 6.0 * T0});
    s.T1 = 6.0 / kPi2 * s.Tf;
    return s;
}

std::pair<double, double> weighted_sum_identity(int n) {
    if (n < 0) throw PreconditionError("weighted_sum_identity: n >= 0");
    double lhs = 0.0;
    for (int j = 0; j <= n; ++j)
        lhs += static_cast<double>(j) * j / std::ldexp(1.0, j);
    const double nn = n;
    const double rhs = std::ldexp(1.0, -n) *
                       (-nn * nn - 4.0 * nn + 6.0 * (std::ldexp(1.0, n) - 1.0));
    return {lhs, rhs};
}

double compute_KT(double T, double NT, double b_norm, double sigma) {
    if (T <= 0.0) throw PreconditionError("compute_KT: T > 0");
    if (NT < 0.0) throw PreconditionError("compute_KT: NT >= 0");
    const double e = (4.0 * sigma + b_norm + 1.0) * T + 2.0 * b_norm * std::sqrt(T);
    const double K2 = b_norm * b_norm * NT * NT * std::exp(e) * (1.0 + b_norm * NT * NT);
    return std::sqrt(K2);
}

double compute_KT_log(double T, double log_NT, double b_norm, double sigma) {
    const double e = (4.0 * sigma + b_norm + 1.0) * T + 2.0 * b_norm * std::sqrt(T);
    // log(1 + ||B|| N^2) without forming N^2.
    const double t = std::log(b_norm) + 2.0 * log_NT;
    const double log1pBN2 = t > 36.0 ? t : std::log1p(std::exp(t));
    return std::log(b_norm) + log_NT + 0.5 * (e + log1pBN2);
}

namespace {

SuffCondConstants suffcond_impl(const SpectralProblem& p, int j, double C, int scan_K,
                                double lambda1_eff) {
    if (C < 1.0) throw PreconditionError("compute_suffcond: C >= 1 assumed");
    if (j < 1) throw PreconditionError("compute_suffcond: j >= 1");
    SuffCondConstants s;
    s.C = C;
    s.q = p.decay_exponent;
    s.alpha = p.gap_alpha;
    s.lambda1 = lambda1_eff;
    s.b_jj = std::abs(p.b_entry(j, j));
    if (s.b_jj == 0.0)
        throw DegenerateCouplingError(j, j, p.name + ": diagonal coupling vanishes");
    s.M = C * C * std::pow(1.0 + 1.0 / (s.alpha * s.alpha), 2.0) + 2.0 * std::abs(lambda1_eff);
    s.Cq = 2.0 * std::pow(2.0 * s.q / std::numbers::e, 2.0 * s.q);
    s.Cqa = 2.0 * std::tgamma(2.0 * s.q + 1.0) /
            (s.alpha * std::sqrt(p.eigenvalue(2) - p.eigenvalue(1)));
    s.T0 = std::min(1.0, 1.0 / (s.alpha * s.alpha));

    // Lower-bound estimate of the decay constant b for this j. The scan is
    // empirical: the min is typically approached as k grows, and the values
    // stabilize well before scan_K for all gallery problems.
    const int K = p.max_entry_index > 0 ? std::min(scan_K, p.max_entry_index) : scan_K;
    s.b = verify_decay(p, j, std::max(K, j + 1));

    const double m1 = std::log(3.0 * s.M / (s.b_jj * s.b_jj));
    const double m2 = std::log(3.0 * s.M * s.Cq / (s.b * s.b));
    const double m3 = std::log(3.0 * s.M * s.Cqa / (s.b * s.b));
    const double mx = std::max({m1, m2, m3, 0.0});
    s.GammaJ = 0.5 * (s.M + s.M * s.M / 4.0 + (2.0 * s.q + 5.0) * std::numbers::e + mx);
    return s;
}

} // namespace

SuffCondConstants compute_suffcond(const SpectralProblem& p, int j, double C, int scan_K) {
    return suffcond_impl(p, j, C, scan_K, p.eigenvalue(1));
}

SuffCondConstants compute_suffcond_shifted(const SpectralProblem& p, int j, double C,
                                           int scan_K) {
    return suffcond_impl(p, j, C, scan_K, p.eigenvalue(1) - p.eigenvalue(j));
}

double gm_term_log(double M, double T, double omega_k, double b_jk) {
    return -2.0 * omega_k * T + M * std::sqrt(omega_k) - 2.0 * std::log(std::abs(b_jk));
}

GmBound compute_GM(double M, double T, const SpectralProblem& p, int j, int trunc,
                   double tail_tol) {
    if (T <= 0.0 || M <= 0.0) throw PreconditionError("compute_GM: M, T > 0");
    if (trunc < j) throw PreconditionError("compute_GM: trunc >= j");
    const double l1 = p.eigenvalue(1);
    const double prefix_log = std::log(M) - 4.0 * std::log(T) + M / T;

    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(trunc));
    for (int k = 1; k <= trunc; ++k) {
        const double w = p.eigenvalue(k) - l1;
        const double b = p.b_entry(j, k);
        if (b == 0.0)
            throw DegenerateCouplingError(j, k, p.name + ": vanishing coupling in G_M");
        terms.push_back(gm_term_log(M, T, w, b));
    }
    GmBound r;
    r.trunc = trunc;
    r.log_value = prefix_log + num::logsumexp(terms);

    // Tail bound, following the series' own comparison chain: for k > trunc,
    //   e^{-2 w_k T + M sqrt(w_k)} / b_jk^2
    //     <= (e^{M^2/(4T)} / b^2) w_k^{2q} e^{-w_k T}
    // (decay condition plus the max of e^{-wT + M sqrt(w)}), and the
    // remaining sum is dominated by (1/(alpha sqrt(w_2))) times the integral
    // of w^{2q} e^{-wT} from w_trunc on, provided the summand is already
    // decreasing there (w_trunc >= 2q/T).
    const double q = p.decay_exponent;
    const double b = p.decay_b > 0.0 ? p.decay_b : verify_decay(p, j, trunc);
    const double w_tr = p.eigenvalue(trunc) - l1;
    if (w_tr < 2.0 * q / T)
        throw TruncationError("compute_GM: truncation inside the increasing range of the "
                              "tail comparison; increase trunc");
    const double a = 2.0 * q + 1.0;
    double log_gamma;
    if (std::abs(a - std::round(a)) < 1e-12) {
        log_gamma = num::log_upper_gamma_int(static_cast<int>(std::round(a)), w_tr * T);
    } else {
        log_gamma = num::log_upper_gamma_bound(a, w_tr * T);
        if (std::isnan(log_gamma))
            throw TruncationError("compute_GM: tail bound needs w_trunc*T >= 2(2q); "
                                  "increase trunc");
    }
    const double w2 = p.eigenvalue(2) - l1;
    r.log_tail = prefix_log + M * M / (4.0 * T) - 2.0 * std::log(b) + log_gamma -
                 std::log(p.gap_alpha * std::sqrt(w2)) - a * std::log(T);

    r.log_total = num::logadd(r.log_value, r.log_tail);
    r.value = std::exp(r.log_value);
    r.tail = std::exp(r.log_tail);
    if (!(r.tail <= tail_tol))
        throw TruncationError("compute_GM: tail bound above requested tolerance");
    return r;
}

double control_norm_bound_log(double Gamma0, double T) {
    if (Gamma0 <= 0.0 || T <= 0.0)
        throw PreconditionError("control_norm_bound: Gamma0, T > 0");
    return -kPi2 * Gamma0 / T - num::log_expm1(2.0 * kPi2 * Gamma0 / (3.0 * T));
}

double control_norm_bound(double Gamma0, double T) {
    return std::exp(control_norm_bound_log(Gamma0, T));
}

TheoremOneConstants compute_theorem1(double b_norm, double sigma, const CostModel& cm,
                                     double T) {
    TheoremOneConstants c;
    c.D = compute_D(b_norm, sigma);
    c.Gamma0 = compute_gamma0(cm, c.D);
    c.schedule = compute_schedule(T, cm.T0);
    c.T1 = c.schedule.T1;
    c.Tf = c.schedule.Tf;
    c.RT_log = -6.0 * c.Gamma0 / c.T1;
    c.RT = std::exp(c.RT_log);
    return c;
}

} // namespace eigensteer::constants
