#include "eigensteer/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eigensteer::kernels {

namespace {

inline double row_dot(const BTable& B, std::span<const double> u, int k) {
    const double* row = B.a.data() + static_cast<std::size_t>(k) * B.n;
    double s = 0.0;
    for (int l = 0; l < B.n; ++l) s += row[l] * u[static_cast<std::size_t>(l)];
    return s;
}

} // namespace

void coupling_matvec(const BTable& B, std::span<const double> u,
                     std::span<double> out, Exec exec) {
    const int n = B.n;
    if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = row_dot(B, u, k);
        return;
#endif
    }
    for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = row_dot(B, u, k);
}

BTable assemble_table(const std::function<double(int, int)>& entry, int n, Exec exec) {
    BTable B(n);
    // Unique pairs flattened so the parallel loop is one dimensional.
    const long npairs = static_cast<long>(n) * (n + 1) / 2;
    auto fill = [&](long idx) {
        // Row-major triangular unflatten: idx -> (j <= k), 0-based.
        long j = 0;
        long rem = idx;
        while (rem >= n - j) {
            rem -= n - j;
            ++j;
        }
        long k = j + rem;
        double v = entry(static_cast<int>(j) + 1, static_cast<int>(k) + 1);
        B.at(static_cast<int>(j), static_cast<int>(k)) = v;
        B.at(static_cast<int>(k), static_cast<int>(j)) = v;
    };
    if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
        for (long idx = 0; idx < npairs; ++idx) fill(idx);
        return B;
#endif
    }
    for (long idx = 0; idx < npairs; ++idx) fill(idx);
    return B;
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace eigensteer::kernels
