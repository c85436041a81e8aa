#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "geocanvas/numeric.hpp"

namespace geocanvas {

enum class BinaryOp { add, sub, mul, div, pow };
enum class UnaryFn {
    neg, sin, cos, tan, asin, acos, atan, sqrt, abs, ln, log, exp
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree. Constants pi and e are folded into number
/// literals by the parser is *not* done: they stay as named constants so the
/// printer can round-trip them.
struct Expr {
    enum class Tag { number, variable, constant, unary, binary };

    Tag tag;
    double number = 0.0;          // Tag::number
    std::string name;             // Tag::variable / Tag::constant ("pi", "e")
    UnaryFn fn = UnaryFn::neg;    // Tag::unary
    BinaryOp op = BinaryOp::add;  // Tag::binary
    ExprPtr lhs, rhs;             // unary uses lhs only

    static ExprPtr make_number(double v);
    static ExprPtr make_variable(std::string name);
    static ExprPtr make_constant(std::string name);
    static ExprPtr make_unary(UnaryFn fn, ExprPtr arg);
    static ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
};

/// Comparison relations appear only at the top level of equations and
/// inequality regions, never inside an Expr.
enum class Cmp { lt, le, eq, ge, gt };

struct Relation {
    ExprPtr lhs;
    Cmp cmp;
    ExprPtr rhs;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found);

    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class UnboundVariable : public std::runtime_error {
public:
    explicit UnboundVariable(const std::string& name)
        : std::runtime_error("unbound variable: " + name), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

/// Parse a scalar expression. Explicit '*' is required; "2x" is a parse
/// error. Precedence: ^ (right-assoc) > unary - > * / > + -.
ExprPtr parse_expr(const std::string& text);

/// Parse "lhs <cmp> rhs" where cmp is one of < <= = >= >.
Relation parse_relation(const std::string& text);

/// Canonical text form; parse(print(e)) is structurally identical to e.
std::string print_expr(const ExprPtr& e);

/// Structural equality of two trees.
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

/// Free variables in order of first appearance.
std::vector<std::string> free_variables(const ExprPtr& e);

/// Deterministic double evaluation. Domain violations (sqrt of a negative,
/// log of a non-positive, division by zero, non-finite results) yield an
/// undefined Scalar. Unbound variables throw.
Scalar eval_expr(const ExprPtr& e, const std::map<std::string, double>& bindings);

}  // namespace geocanvas
