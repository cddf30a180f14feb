#include "pbb84/math.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace pbb84 {

BinomialTable::BinomialTable(int max_n) : max_n_(max_n) {
    if (max_n < 0 || max_n > 64) {
        throw std::domain_error("BinomialTable: max_n must be in [0, 64]");
    }
    entries_.resize(static_cast<std::size_t>(max_n + 1) * (max_n + 2) / 2);
    for (int n = 0; n <= max_n; ++n) {
        std::size_t row = static_cast<std::size_t>(n) * (n + 1) / 2;
        entries_[row] = 1;
        entries_[row + n] = 1;
        for (int k = 1; k < n; ++k) {
            std::size_t prev = static_cast<std::size_t>(n - 1) * n / 2;
            entries_[row + k] = entries_[prev + k - 1] + entries_[prev + k];
        }
    }
}

std::uint64_t BinomialTable::operator()(int n, int k) const {
    if (n < 0 || n > max_n_) throw std::domain_error("BinomialTable: n out of range");
    if (k < 0 || k > n) return 0;
    return entries_[static_cast<std::size_t>(n) * (n + 1) / 2 + k];
}

const BinomialTable& BinomialTable::shared() {
    static const BinomialTable table(64);
    return table;
}

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("binary_entropy: argument outside [0,1]");
    }
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

std::int64_t f_comb(int x, int y, int z) {
    if (x < 0 || y < 0 || z < 0) {
        throw std::domain_error("f_comb: arguments must be nonnegative");
    }
    const BinomialTable& binom = BinomialTable::shared();
    std::int64_t total = 0;
    for (int s = std::max(0, x - z); s <= std::min(x, y); ++s) {
        std::int64_t term = static_cast<std::int64_t>(binom(y, s)) *
                            static_cast<std::int64_t>(binom(z, x - s));
        total += ((z - x + s) % 2 == 0) ? term : -term;
    }
    return total;
}

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b, double fa,
                     double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson(fa, flm, fm, a, m);
    double right = simpson(fm, frm, fb, m, b);
    double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol) {
        return left + right + err;
    }
    if (depth <= 0) {
        throw NonConvergenceError("integrate: subdivision budget exhausted");
    }
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    if (!(spec.absolute_tolerance > 0.0)) {
        throw std::domain_error("integrate: tolerance must be positive");
    }
    if (spec.max_subdivisions < 1) {
        throw std::domain_error("integrate: max_subdivisions must be >= 1");
    }
    if (a > b) throw std::domain_error("integrate: requires a <= b");
    if (a == b) return 0.0;
    double fa = f(a);
    double fb = f(b);
    double fm = f(0.5 * (a + b));
    double whole = simpson(fa, fm, fb, a, b);
    return adaptive_step(f, a, b, fa, fm, fb, whole, spec.absolute_tolerance,
                         spec.max_subdivisions);
}

namespace {

struct Vertex {
    double x, y, value;
};

double clampd(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

} // namespace

Min2Result minimize_2d(const std::function<double(double, double)>& f, const Box2& box,
                       int seeds_x, int seeds_y) {
    if (!(box.x_hi > box.x_lo) || !(box.y_hi > box.y_lo)) {
        throw std::domain_error("minimize_2d: degenerate box");
    }
    if (seeds_x < 2 || seeds_y < 2) {
        throw std::domain_error("minimize_2d: need at least a 2x2 seed grid");
    }
    const double hx = (box.x_hi - box.x_lo) / (seeds_x - 1);
    const double hy = (box.y_hi - box.y_lo) / (seeds_y - 1);

    Min2Result best{box.x_lo, box.y_lo, std::numeric_limits<double>::infinity()};
    for (int ix = 0; ix < seeds_x; ++ix) {
        double x = box.x_lo + ix * hx;
        for (int iy = 0; iy < seeds_y; ++iy) {
            double y = box.y_lo + iy * hy;
            double v = f(x, y);
            if (v < best.value) best = {x, y, v}; // strict: lowest-index tie-break
        }
    }
    if (!std::isfinite(best.value)) return best;

    // Nelder-Mead refinement, bounded by clamping proposals into the box.
    auto mk = [&](double x, double y) {
        x = clampd(x, box.x_lo, box.x_hi);
        y = clampd(y, box.y_lo, box.y_hi);
        return Vertex{x, y, f(x, y)};
    };
    std::array<Vertex, 3> s = {
        Vertex{best.x, best.y, best.value},
        mk(best.x + 0.5 * hx, best.y),
        mk(best.x, best.y + 0.5 * hy),
    };
    const double tol = 1e-8; // simplex size in parameter space
    for (int iter = 0; iter < 500; ++iter) {
        std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.value < b.value; });
        double size = std::max(std::max(std::abs(s[1].x - s[0].x), std::abs(s[2].x - s[0].x)),
                               std::max(std::abs(s[1].y - s[0].y), std::abs(s[2].y - s[0].y)));
        if (size < tol) break;
        double cx = 0.5 * (s[0].x + s[1].x);
        double cy = 0.5 * (s[0].y + s[1].y);
        Vertex refl = mk(cx + (cx - s[2].x), cy + (cy - s[2].y));
        if (refl.value < s[0].value) {
            Vertex exp = mk(cx + 2.0 * (cx - s[2].x), cy + 2.0 * (cy - s[2].y));
            s[2] = (exp.value < refl.value) ? exp : refl;
        } else if (refl.value < s[1].value) {
            s[2] = refl;
        } else {
            Vertex contr = mk(cx + 0.5 * (s[2].x - cx), cy + 0.5 * (s[2].y - cy));
            if (contr.value < s[2].value) {
                s[2] = contr;
            } else {
                s[1] = mk(s[0].x + 0.5 * (s[1].x - s[0].x), s[0].y + 0.5 * (s[1].y - s[0].y));
                s[2] = mk(s[0].x + 0.5 * (s[2].x - s[0].x), s[0].y + 0.5 * (s[2].y - s[0].y));
            }
        }
    }
    std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.value < b.value; });
    if (s[0].value < best.value) {
        best = {s[0].x, s[0].y, s[0].value};
    }
    return best;
}

Min1Result minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                           int seeds) {
    if (!(hi > lo)) throw std::domain_error("minimize_scalar: degenerate interval");
    if (seeds < 2) throw std::domain_error("minimize_scalar: need at least 2 seeds");
    const double h = (hi - lo) / (seeds - 1);
    Min1Result best{lo, std::numeric_limits<double>::infinity()};
    int best_i = 0;
    for (int i = 0; i < seeds; ++i) {
        double x = lo + i * h;
        double v = f(x);
        if (v < best.value) {
            best = {x, v};
            best_i = i;
        }
    }
    if (!std::isfinite(best.value)) return best;

    double a = lo + std::max(0, best_i - 1) * h;
    double b = lo + std::min(seeds - 1, best_i + 1) * h;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > 1e-10) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    double xm = 0.5 * (a + b);
    double fm = f(xm);
    if (fm < best.value) best = {xm, fm};
    if (f1 < best.value) best = {x1, f1};
    if (f2 < best.value) best = {x2, f2};
    return best;
}

double find_zero_crossing(const std::function<double(double)>& f, double d_low, double d_high,
                          double tol) {
    if (!(d_high > d_low)) throw BracketError("find_zero_crossing: empty interval");
    if (!(tol > 0.0)) throw std::domain_error("find_zero_crossing: tol must be positive");
    if (!(f(d_low) > 0.0)) throw BracketError("find_zero_crossing: f(d_low) must be positive");
    if (f(d_high) > 0.0) throw BracketError("find_zero_crossing: f(d_high) must be nonpositive");
    double lo = d_low;
    double hi = d_high;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

} // namespace pbb84
