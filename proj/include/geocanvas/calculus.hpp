#pragma once

#include <functional>
#include <string>
#include <vector>

#include "geocanvas/errors.hpp"
#include "geocanvas/expr.hpp"
#include "geocanvas/numeric.hpp"

namespace geocanvas {

/// Raised when an expression is undefined on too much of the requested
/// interval for a numeric scan to be meaningful.
class EvalUndefinedOnInterval : public ToolError {
public:
    explicit EvalUndefinedOnInterval(const std::string& what)
        : ToolError(ErrorCode::precondition_failed, what) {}
};

using Fn1 = std::function<Scalar(double)>;

/// Bind a one-variable expression into a callable.
Fn1 bind_unary(const ExprPtr& e, const std::string& var);

/// Roots of lhs(var) = rhs(var) on [lo, hi]: uniform scan with grid_n points,
/// sign-change bracketing, bisection refinement. Ascending, deduplicated
/// under the policy. Throws EvalUndefinedOnInterval if the residual is
/// undefined on more than half the grid.
std::vector<double> nsolve(const ExprPtr& lhs, const ExprPtr& rhs, const std::string& var,
                           double lo, double hi, int grid_n = 4096,
                           const TolerancePolicy& policy = {});

std::vector<double> nsolve_fn(const Fn1& g, double lo, double hi, int grid_n,
                              const TolerancePolicy& policy = {});

/// Adaptive Simpson quadrature to absolute tolerance 1e-9; antisymmetric in
/// the bounds, exactly zero for identical bounds.
double quadrature(const Fn1& f, double a, double b, double abs_tol = 1e-9);
double quadrature_expr(const ExprPtr& e, const std::string& var, double a, double b,
                       double abs_tol = 1e-9);

/// Central difference with step h = 1e-6 * max(1, |x|); `order` applies the
/// stencil recursively.
Scalar derivative_at(const Fn1& f, double x, int order = 1);

/// x-locations where the first derivative changes sign on [lo, hi].
std::vector<double> turning_points(const Fn1& f, double lo, double hi, int grid_n = 2048);

/// x-locations where the second derivative changes sign on [lo, hi].
std::vector<double> inflection_points(const Fn1& f, double lo, double hi, int grid_n = 2048);

struct Extremum {
    double x;
    double value;
};

/// Grid scan plus golden-section refinement; maximize=false minimizes.
Extremum extremum_on(const Fn1& f, double lo, double hi, bool maximize, int grid_n = 1024);

}  // namespace geocanvas
