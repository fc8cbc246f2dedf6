#pragma once

// Adaptive Gauss-Kronrod (G7,K15) integration on finite intervals.
// Oscillatory but smooth integrands (products of eigenfunctions against a
// polynomial weight) are the target; bisection keeps going until the summed
// Kronrod error estimate meets the absolute tolerance.

#include <cmath>
#include <cstddef>
#include <vector>

#include "eigensteer/errors.hpp"

namespace eigensteer::quad {

namespace detail {
// Kronrod-15 abscissae (positive half) with Kronrod and embedded Gauss-7
// weights. Node, Kronrod weight, Gauss weight (0 where the node is
// Kronrod-only).
inline constexpr double kNodes[8][3] = {
    {0.000000000000000000e+00, 2.094821410847278280e-01, 4.179591836734693878e-01},
    {2.077849550078984676e-01, 2.044329400752988924e-01, 0.0},
    {4.058451513773971669e-01, 1.903505780647854099e-01, 3.818300505051189449e-01},
    {5.860872354676911303e-01, 1.690047266392679028e-01, 0.0},
    {7.415311855993944399e-01, 1.406532597155259187e-01, 2.797053914892766679e-01},
    {8.648644233597690727e-01, 1.047900103222501838e-01, 0.0},
    {9.491079123427585245e-01, 6.309209262997855329e-02, 1.294849661688696933e-01},
    {9.914553711208126392e-01, 2.293532201052922496e-02, 0.0},
};
} // namespace detail

struct Interval {
    double a, b, value, err;
};

/// One G7K15 panel on [a,b]; returns the K15 value, writes the error estimate.
template <class F>
double gk15(const F& f, double a, double b, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double k15 = detail::kNodes[0][1] * fc;
    double g7 = detail::kNodes[0][2] * fc;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * detail::kNodes[i][0];
        const double fs = f(c - dx) + f(c + dx);
        k15 += detail::kNodes[i][1] * fs;
        g7 += detail::kNodes[i][2] * fs;
    }
    k15 *= h;
    g7 *= h;
    const double diff = std::abs(k15 - g7);
    // Standard QUADPACK-style sharpening of the raw G-K difference.
    err = diff * std::sqrt(diff) * 200.0 < 1.0 ? diff * std::sqrt(200.0 * diff) : diff;
    if (!std::isfinite(err)) err = diff;
    return k15;
}

struct Options {
    double abs_tol = 1e-12;
    std::size_t max_intervals = 4000;
};

/// Globally adaptive integration of f over [a,b] to absolute tolerance.
/// Throws ComputationError when the worklist is exhausted above tolerance.
template <class F>
double integrate(const F& f, double a, double b, const Options& opt = {}) {
    std::vector<Interval> heap;
    heap.reserve(256);
    double err0;
    double v0 = gk15(f, a, b, err0);
    heap.push_back({a, b, v0, err0});
    double total_err = err0;

    while (total_err > opt.abs_tol) {
        if (heap.size() >= opt.max_intervals)
            throw ComputationError("adaptive quadrature failed to converge to tolerance");
        // Split the interval with the largest error estimate.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < heap.size(); ++i)
            if (heap[i].err > heap[worst].err) worst = i;
        Interval iv = heap[worst];
        const double mid = 0.5 * (iv.a + iv.b);
        if (mid <= iv.a || mid >= iv.b)
            throw ComputationError("adaptive quadrature interval underflow");
        double el, er;
        double vl = gk15(f, iv.a, mid, el);
        double vr = gk15(f, mid, iv.b, er);
        heap[worst] = {iv.a, mid, vl, el};
        heap.push_back({mid, iv.b, vr, er});
        total_err += el + er - iv.err;
    }

    double sum = 0.0;
    for (const Interval& iv : heap) sum += iv.value;
    return sum;
}

} // namespace eigensteer::quad
