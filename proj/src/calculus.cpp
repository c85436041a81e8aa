#include "geocanvas/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace geocanvas {

Fn1 bind_unary(const ExprPtr& e, const std::string& var) {
    return [e, var](double x) -> Scalar {
        return eval_expr(e, {{var, x}});
    };
}

namespace {

double bisect(const Fn1& g, double a, double b, double fa, double scale, double width_tol) {
    // fa and g(b) have opposite signs on entry
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (a + b);
        if (b - a <= width_tol) return mid;
        Scalar fm = g(mid);
        if (!fm.is_defined()) return mid;
        const double v = fm.value();
        if (std::fabs(v) <= 1e-12 * scale) return mid;
        if ((fa < 0.0) == (v < 0.0)) {
            a = mid;
            fa = v;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

std::vector<double> nsolve_fn(const Fn1& g, double lo, double hi, int grid_n,
                              const TolerancePolicy& policy) {
    if (!(lo < hi)) throw ToolError(ErrorCode::precondition_failed, "nsolve requires lo < hi");
    if (grid_n < 2) throw ToolError(ErrorCode::precondition_failed, "nsolve requires grid_n >= 2");

    const double step = (hi - lo) / static_cast<double>(grid_n - 1);
    std::vector<double> xs(grid_n), vs(grid_n);
    std::vector<bool> ok(grid_n);
    int undefined_count = 0;
    double scale = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        xs[i] = (i + 1 == grid_n) ? hi : lo + step * i;
        Scalar v = g(xs[i]);
        ok[i] = v.is_defined();
        if (ok[i]) {
            vs[i] = v.value();
            scale = std::fmax(scale, std::fabs(vs[i]));
        } else {
            ++undefined_count;
        }
    }
    if (undefined_count * 2 > grid_n)
        throw EvalUndefinedOnInterval("expression undefined on more than half of the interval");
    if (scale == 0.0) scale = 1.0;

    const double width_tol = 1e-13 * (hi - lo);
    std::vector<double> roots;
    auto push_root = [&](double r) {
        for (double existing : roots)
            if (policy.pass(existing, r) || std::fabs(existing - r) <= width_tol * 16) return;
        roots.push_back(r);
    };

    for (int i = 0; i < grid_n; ++i) {
        if (!ok[i]) continue;
        if (std::fabs(vs[i]) <= 1e-12 * scale) {
            push_root(xs[i]);
            continue;
        }
        // look ahead to the next defined sample
        int j = i + 1;
        while (j < grid_n && !ok[j]) ++j;
        if (j >= grid_n) break;
        if (std::fabs(vs[j]) <= 1e-12 * scale) continue;  // handled as exact zero at j
        if ((vs[i] < 0.0) != (vs[j] < 0.0))
            push_root(bisect(g, xs[i], xs[j], vs[i], scale, width_tol));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<double> nsolve(const ExprPtr& lhs, const ExprPtr& rhs, const std::string& var,
                           double lo, double hi, int grid_n, const TolerancePolicy& policy) {
    Fn1 l = bind_unary(lhs, var);
    Fn1 r = bind_unary(rhs, var);
    Fn1 g = [l, r](double x) -> Scalar {
        Scalar a = l(x), b = r(x);
        if (!a.is_defined() || !b.is_defined()) return Scalar::undefined();
        return Scalar(a.value() - b.value());
    };
    return nsolve_fn(g, lo, hi, grid_n, policy);
}

namespace {

double eval_or_throw(const Fn1& f, double x) {
    Scalar v = f(x);
    if (!v.is_defined())
        throw EvalUndefinedOnInterval("integrand undefined inside the integration interval");
    return v.value();
}

double simpson(double fa, double fm, double fb, double h) {
    return (h / 6.0) * (fa + 4.0 * fm + fb);
}

double adaptive(const Fn1& f, double a, double b, double fa, double fm, double fb, double whole,
                double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = eval_or_throw(f, lm), frm = eval_or_throw(f, rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

}  // namespace

double quadrature(const Fn1& f, double a, double b, double abs_tol) {
    if (a == b) return 0.0;
    if (a > b) return -quadrature(f, b, a, abs_tol);
    const double fa = eval_or_throw(f, a);
    const double fb = eval_or_throw(f, b);
    const double fm = eval_or_throw(f, 0.5 * (a + b));
    const double whole = simpson(fa, fm, fb, b - a);
    return adaptive(f, a, b, fa, fm, fb, whole, abs_tol, 48);
}

double quadrature_expr(const ExprPtr& e, const std::string& var, double a, double b,
                       double abs_tol) {
    return quadrature(bind_unary(e, var), a, b, abs_tol);
}

Scalar derivative_at(const Fn1& f, double x, int order) {
    if (order <= 0) return f(x);
    const double h = 1e-6 * std::fmax(1.0, std::fabs(x));
    Scalar hi = derivative_at(f, x + h, order - 1);
    Scalar lo = derivative_at(f, x - h, order - 1);
    if (!hi.is_defined() || !lo.is_defined()) return Scalar::undefined();
    return Scalar((hi.value() - lo.value()) / (2.0 * h));
}

namespace {

std::vector<double> derivative_sign_changes(const Fn1& f, double lo, double hi, int grid_n,
                                            int order) {
    Fn1 d = [f, order](double x) -> Scalar { return derivative_at(f, x, order); };
    return nsolve_fn(d, lo, hi, grid_n);
}

}  // namespace

std::vector<double> turning_points(const Fn1& f, double lo, double hi, int grid_n) {
    return derivative_sign_changes(f, lo, hi, grid_n, 1);
}

std::vector<double> inflection_points(const Fn1& f, double lo, double hi, int grid_n) {
    return derivative_sign_changes(f, lo, hi, grid_n, 2);
}

Extremum extremum_on(const Fn1& f, double lo, double hi, bool maximize, int grid_n) {
    if (!(lo < hi)) throw ToolError(ErrorCode::precondition_failed, "extremum requires lo < hi");
    const double sign = maximize ? 1.0 : -1.0;
    double best_x = lo;
    double best = -std::numeric_limits<double>::infinity();
    int defined = 0;
    const double step = (hi - lo) / static_cast<double>(grid_n - 1);
    for (int i = 0; i < grid_n; ++i) {
        const double x = (i + 1 == grid_n) ? hi : lo + step * i;
        Scalar v = f(x);
        if (!v.is_defined()) continue;
        ++defined;
        if (sign * v.value() > best) {
            best = sign * v.value();
            best_x = x;
        }
    }
    if (defined * 2 < grid_n)
        throw EvalUndefinedOnInterval("function undefined on more than half of the interval");

    // golden-section refinement around the best grid cell
    const double inv_phi = 0.6180339887498949;
    double a = std::fmax(lo, best_x - step), b = std::fmin(hi, best_x + step);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    auto val = [&](double x) {
        Scalar v = f(x);
        return v.is_defined() ? sign * v.value() : -std::numeric_limits<double>::infinity();
    };
    double fc = val(c), fd = val(d);
    for (int i = 0; i < 120 && (b - a) > 1e-12 * std::fmax(1.0, std::fabs(best_x)); ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = val(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = val(d);
        }
    }
    const double x = 0.5 * (a + b);
    Scalar v = f(x);
    if (v.is_defined() && sign * v.value() >= best)
        return Extremum{x, v.value()};
    return Extremum{best_x, sign * best};
}

}  // namespace geocanvas
