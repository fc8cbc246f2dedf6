#pragma once

// Data-parallel inner kernels. Each kernel has a serial reference and an
// OpenMP path that produces bitwise-identical results (work is partitioned
// by row / by entry, never by reduction), so tests compare them exactly and
// the benchmark tool compares their speed.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace eigensteer::kernels {

enum class Exec { Serial, Parallel };

/// Dense symmetric coupling table, row-major.
struct BTable {
    int n = 0;
    std::vector<double> a;

    BTable() = default;
    explicit BTable(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}
    double operator()(int k, int l) const { return a[static_cast<std::size_t>(k) * n + l]; }
    double& at(int k, int l) { return a[static_cast<std::size_t>(k) * n + l]; }
};

/// out_k = sum_l B_{kl} u_l. Rows are independent; each row accumulates in
/// index order in both paths.
void coupling_matvec(const BTable& B, std::span<const double> u,
                     std::span<double> out, Exec exec);

/// Fill the symmetric table from an entry function over 1-based indices.
/// Entries are independent, so the parallel path is embarrassingly parallel
/// over unique (j <= k) pairs.
BTable assemble_table(const std::function<double(int, int)>& entry, int n, Exec exec);

/// Number of threads the parallel path would use (1 without OpenMP).
int max_threads();

} // namespace eigensteer::kernels
