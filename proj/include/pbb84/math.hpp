#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pbb84/errors.hpp"

namespace pbb84 {

/// Exact integer binomial coefficients C(n,k) for n <= max_n, built once by
/// Pascal recursion. Photon-number sums in this project never exceed n ~ 12,
/// so the default table (max_n = 64) leaves plenty of margin while staying
/// exact in 64-bit integers.
class BinomialTable {
public:
    explicit BinomialTable(int max_n = 64);

    std::uint64_t operator()(int n, int k) const;
    int max_n() const { return max_n_; }

    /// Process-wide shared table with max_n = 64.
    static const BinomialTable& shared();

private:
    int max_n_;
    std::vector<std::uint64_t> entries_; // row n starts at n*(n+1)/2
};

/// Controls for the adaptive quadrature routine.
struct QuadratureSpec {
    double absolute_tolerance = 1e-10;
    int max_subdivisions = 60; // recursion depth budget
};

/// Binary Shannon entropy H(x) = -x log2 x - (1-x) log2 (1-x), with
/// 0 log2 0 = 0. Throws std::domain_error outside [0,1].
double binary_entropy(double x);

/// Alternating binomial sum
///   sum_{s=max(0,x-z)}^{min(x,y)} C(y,s) C(z,x-s) (-1)^(z-x+s).
/// Empty ranges give 0. Requires x, y, z >= 0.
std::int64_t f_comb(int x, int y, int z);

/// Adaptive Simpson quadrature of f on [a,b] to the requested absolute
/// tolerance. Throws NonConvergenceError when the subdivision budget is
/// exhausted before the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

struct Box2 {
    double x_lo, x_hi;
    double y_lo, y_hi;
};

struct Min2Result {
    double x, y;
    double value;
};

/// Minimize f over a rectangle: coarse seed-grid scan (ties broken toward the
/// lowest grid index) followed by a bounded Nelder-Mead refinement started at
/// the best seed. Deterministic for fixed inputs. The returned value never
/// exceeds the best seed value.
Min2Result minimize_2d(const std::function<double(double, double)>& f, const Box2& box,
                       int seeds_x = 50, int seeds_y = 50);

struct Min1Result {
    double x;
    double value;
};

/// Scalar counterpart of minimize_2d: seed scan plus golden-section
/// refinement around the best seed.
Min1Result minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                           int seeds = 200);

/// Bisect for the boundary where a positive-then-nonpositive function of
/// distance crosses zero. Requires f(d_low) > 0 and f(d_high) <= 0; returns
/// the largest distance with f > 0, up to tol. Throws BracketError when the
/// bracket preconditions fail.
double find_zero_crossing(const std::function<double(double)>& f, double d_low,
                          double d_high, double tol);

} // namespace pbb84
