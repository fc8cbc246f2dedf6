#pragma once

// Abstract spectral data for one parabolic example problem: eigenvalues of
// the self-adjoint operator A (ordered, bounded below by -sigma), the
// couplings <B phi_j, phi_k> of the bounded multiplication operator B, and
// the gap/decay metadata the control-cost machinery consumes.

#include <functional>
#include <string>
#include <vector>

#include "eigensteer/kernels.hpp"

namespace eigensteer {

struct SpectralProblem {
    std::string name;
    double sigma = 0.0;         // lower bound: lambda_k >= -sigma
    double b_norm = 1.0;        // operator norm of B (sup of |mu| for multiplication)
    double gap_alpha = 0.0;     // gap constant for sqrt(lambda_k - lambda_1)
    double decay_b = 0.0;       // empirical lower bound of |l_k-l_1|^q |<B phi_1,phi_k>|
    double decay_exponent = 0;  // q
    int index_origin = 1;       // 0: external numbering starts at 0, stored 1-based

    std::function<double(int)> eigval;       // 1-based internal index
    std::function<double(int, int)> entry;   // 1-based internal indices
    int max_entry_index = 0;                 // 0 = unrestricted

    double eigenvalue(int k) const;
    double b_entry(int j, int k) const;

    /// Dense coupling table over modes 1..n for the simulator and kernels.
    kernels::BTable coupling_table(int n, kernels::Exec exec = kernels::Exec::Serial) const;
};

/// Gallery of closed-form examples, addressable by string id.
SpectralProblem make_dirichlet_x2();
SpectralProblem make_neumann_x2();
SpectralProblem make_variable_coeff_x(int max_index = 64);
SpectralProblem make_radial_ball_x2();
SpectralProblem make_problem(const std::string& id, int varcoeff_max_index = 64);
std::vector<std::string> gallery_ids();

/// min over 1 <= k < K of sqrt(lambda_{k+1}) - sqrt(lambda_k)  (accretive form;
/// requires lambda_1 >= 0).
double verify_gap(const SpectralProblem& p, int K);

/// min over 1 <= k < K of sqrt(lambda_{k+1}-lambda_1) - sqrt(lambda_k-lambda_1),
/// the form the gap hypothesis actually uses.
double verify_gap_shifted(const SpectralProblem& p, int K);

/// min over k <= K, k != j of |lambda_k - lambda_j|^q |<B phi_j, phi_k>|;
/// throws DegenerateCouplingError if some coupling vanishes.
double verify_decay(const SpectralProblem& p, int j, int K);

} // namespace eigensteer
