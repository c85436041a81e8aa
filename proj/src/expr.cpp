#include "geocanvas/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace geocanvas {

ExprPtr Expr::make_number(double v) {
    auto e = std::make_shared<Expr>();
    e->tag = Tag::number;
    e->number = v;
    return e;
}

ExprPtr Expr::make_variable(std::string name) {
    auto e = std::make_shared<Expr>();
    e->tag = Tag::variable;
    e->name = std::move(name);
    return e;
}

ExprPtr Expr::make_constant(std::string name) {
    auto e = std::make_shared<Expr>();
    e->tag = Tag::constant;
    e->name = std::move(name);
    return e;
}

ExprPtr Expr::make_unary(UnaryFn fn, ExprPtr arg) {
    // negation of a literal folds into a negative literal, so negative
    // numbers have exactly one tree shape and printing round-trips
    if (fn == UnaryFn::neg && arg->tag == Tag::number) return make_number(-arg->number);
    auto e = std::make_shared<Expr>();
    e->tag = Tag::unary;
    e->fn = fn;
    e->lhs = std::move(arg);
    return e;
}

ExprPtr Expr::make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->tag = Tag::binary;
    e->op = op;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

namespace {

std::string describe_error(std::size_t offset, const std::vector<std::string>& expected,
                           const std::string& found) {
    std::ostringstream os;
    os << "parse error at offset " << offset << ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) os << (i + 1 == expected.size() ? " or " : ", ");
        os << expected[i];
    }
    os << ", found " << found;
    return os.str();
}

struct FnEntry {
    const char* name;
    UnaryFn fn;
};

constexpr FnEntry kFunctions[] = {
    {"sin", UnaryFn::sin},   {"cos", UnaryFn::cos},   {"tan", UnaryFn::tan},
    {"asin", UnaryFn::asin}, {"acos", UnaryFn::acos}, {"atan", UnaryFn::atan},
    {"sqrt", UnaryFn::sqrt}, {"abs", UnaryFn::abs},   {"ln", UnaryFn::ln},
    {"log", UnaryFn::log},   {"exp", UnaryFn::exp},
};

const char* fn_name(UnaryFn fn) {
    for (const auto& e : kFunctions)
        if (e.fn == fn) return e.name;
    return "-";
}

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, lt, le, eq, ge, gt, end };

struct Token {
    Tok kind;
    std::size_t offset;
    double number = 0.0;
    std::string text;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        current_.offset = pos_;
        current_.text.clear();
        if (pos_ >= src_.size()) {
            current_.kind = Tok::end;
            current_.text = "end of input";
            return;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            current_.kind = Tok::ident;
            current_.text = src_.substr(start, pos_ - start);
            return;
        }
        switch (c) {
            case '+': single(Tok::plus, "+"); return;
            case '-': single(Tok::minus, "-"); return;
            case '*': single(Tok::star, "*"); return;
            case '/': single(Tok::slash, "/"); return;
            case '^': single(Tok::caret, "^"); return;
            case '(': single(Tok::lparen, "("); return;
            case ')': single(Tok::rparen, ")"); return;
            case '=': single(Tok::eq, "="); return;
            case '<':
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
                    current_.kind = Tok::le;
                    current_.text = "<=";
                    pos_ += 2;
                } else {
                    single(Tok::lt, "<");
                }
                return;
            case '>':
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
                    current_.kind = Tok::ge;
                    current_.text = ">=";
                    pos_ += 2;
                } else {
                    single(Tok::gt, ">");
                }
                return;
            default:
                throw ParseError(pos_, {"a token"}, std::string("'") + c + "'");
        }
    }

    void single(Tok kind, const char* text) {
        current_.kind = kind;
        current_.text = text;
        ++pos_;
    }

    void lex_number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark;  // "2e" is number 2 followed by identifier e
            }
        }
        current_.kind = Tok::number;
        current_.text = src_.substr(start, pos_ - start);
        current_.number = std::strtod(current_.text.c_str(), nullptr);
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    Token current_;
};

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    ExprPtr parse_full() {
        ExprPtr e = parse_sum();
        expect_end();
        return e;
    }

    Relation parse_relation_full() {
        ExprPtr lhs = parse_sum();
        const Token t = lex_.peek();
        Cmp cmp;
        switch (t.kind) {
            case Tok::lt: cmp = Cmp::lt; break;
            case Tok::le: cmp = Cmp::le; break;
            case Tok::eq: cmp = Cmp::eq; break;
            case Tok::ge: cmp = Cmp::ge; break;
            case Tok::gt: cmp = Cmp::gt; break;
            default:
                throw ParseError(t.offset, {"'<'", "'<='", "'='", "'>='", "'>'"}, quote(t));
        }
        lex_.take();
        ExprPtr rhs = parse_sum();
        expect_end();
        return Relation{std::move(lhs), cmp, std::move(rhs)};
    }

private:
    static std::string quote(const Token& t) {
        if (t.kind == Tok::end) return "end of input";
        return "'" + t.text + "'";
    }

    void expect_end() {
        const Token t = lex_.peek();
        if (t.kind != Tok::end)
            throw ParseError(t.offset, {"an operator", "end of input"}, quote(t));
    }

    ExprPtr parse_sum() {
        ExprPtr e = parse_term();
        while (true) {
            const Token t = lex_.peek();
            if (t.kind == Tok::plus || t.kind == Tok::minus) {
                lex_.take();
                ExprPtr r = parse_term();
                e = Expr::make_binary(t.kind == Tok::plus ? BinaryOp::add : BinaryOp::sub,
                                      std::move(e), std::move(r));
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_unary();
        while (true) {
            const Token t = lex_.peek();
            if (t.kind == Tok::star || t.kind == Tok::slash) {
                lex_.take();
                ExprPtr r = parse_unary();
                e = Expr::make_binary(t.kind == Tok::star ? BinaryOp::mul : BinaryOp::div,
                                      std::move(e), std::move(r));
            } else {
                return e;
            }
        }
    }

    // Unary minus binds below ^: -x^2 is -(x^2).
    ExprPtr parse_unary() {
        if (lex_.peek().kind == Tok::minus) {
            lex_.take();
            return Expr::make_unary(UnaryFn::neg, parse_unary());
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (lex_.peek().kind == Tok::caret) {
            lex_.take();
            // Right-associative; exponent may carry its own unary minus.
            ExprPtr exponent = parse_unary();
            return Expr::make_binary(BinaryOp::pow, std::move(base), std::move(exponent));
        }
        return base;
    }

    ExprPtr parse_atom() {
        const Token t = lex_.peek();
        switch (t.kind) {
            case Tok::number:
                lex_.take();
                return Expr::make_number(t.number);
            case Tok::lparen: {
                lex_.take();
                ExprPtr inner = parse_sum();
                const Token close = lex_.peek();
                if (close.kind != Tok::rparen)
                    throw ParseError(close.offset, {"')'"}, quote(close));
                lex_.take();
                return inner;
            }
            case Tok::ident: {
                lex_.take();
                if (t.text == "pi" || t.text == "e") return Expr::make_constant(t.text);
                for (const auto& f : kFunctions) {
                    if (t.text == f.name) {
                        const Token open = lex_.peek();
                        if (open.kind != Tok::lparen)
                            throw ParseError(open.offset, {"'('"}, quote(open));
                        lex_.take();
                        ExprPtr arg = parse_sum();
                        const Token close = lex_.peek();
                        if (close.kind != Tok::rparen)
                            throw ParseError(close.offset, {"')'"}, quote(close));
                        lex_.take();
                        return Expr::make_unary(f.fn, std::move(arg));
                    }
                }
                return Expr::make_variable(t.text);
            }
            default:
                throw ParseError(t.offset, {"a number", "an identifier", "'('", "'-'"}, quote(t));
        }
    }

    Lexer lex_;
};

int precedence(const Expr& e) {
    switch (e.tag) {
        case Expr::Tag::binary:
            switch (e.op) {
                case BinaryOp::add:
                case BinaryOp::sub: return 1;
                case BinaryOp::mul:
                case BinaryOp::div: return 2;
                case BinaryOp::pow: return 4;
            }
            return 1;
        case Expr::Tag::unary:
            return e.fn == UnaryFn::neg ? 3 : 5;
        case Expr::Tag::number:
            return std::signbit(e.number) ? 3 : 5;  // negative literals print as -v
        default:
            return 5;
    }
}

std::string format_literal(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

void print_rec(const ExprPtr& e, std::string& out) {
    auto child = [&out](const ExprPtr& c, int min_prec) {
        if (precedence(*c) < min_prec) {
            out += '(';
            print_rec(c, out);
            out += ')';
        } else {
            print_rec(c, out);
        }
    };
    switch (e->tag) {
        case Expr::Tag::number:
            out += format_literal(e->number);
            return;
        case Expr::Tag::variable:
        case Expr::Tag::constant:
            out += e->name;
            return;
        case Expr::Tag::unary:
            if (e->fn == UnaryFn::neg) {
                out += '-';
                child(e->lhs, 3);
            } else {
                out += fn_name(e->fn);
                out += '(';
                print_rec(e->lhs, out);
                out += ')';
            }
            return;
        case Expr::Tag::binary: {
            const char* op = "+";
            int prec = precedence(*e);
            int rmin = prec + 1;  // left-assoc by default
            int lmin = prec;
            switch (e->op) {
                case BinaryOp::add: op = " + "; rmin = prec + 1; break;
                case BinaryOp::sub: op = " - "; rmin = prec + 1; break;
                case BinaryOp::mul: op = "*"; rmin = prec + 1; break;
                case BinaryOp::div: op = "/"; rmin = prec + 1; break;
                case BinaryOp::pow:
                    op = "^";
                    lmin = prec + 1;  // right-assoc
                    rmin = 3;         // allow unary minus exponent without parens
                    break;
            }
            child(e->lhs, lmin);
            out += op;
            child(e->rhs, rmin);
            return;
        }
    }
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected,
                       const std::string& found)
    : std::runtime_error(describe_error(offset, expected, found)),
      offset_(offset),
      expected_(std::move(expected)) {}

ExprPtr parse_expr(const std::string& text) {
    if (text.empty()) throw ParseError(0, {"an expression"}, "empty input");
    return Parser(text).parse_full();
}

Relation parse_relation(const std::string& text) {
    if (text.empty()) throw ParseError(0, {"a relation"}, "empty input");
    return Parser(text).parse_relation_full();
}

std::string print_expr(const ExprPtr& e) {
    std::string out;
    print_rec(e, out);
    return out;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->tag != b->tag) return false;
    switch (a->tag) {
        case Expr::Tag::number:
            // bit-level comparison: structural identity, not numeric closeness
            return a->number == b->number ||
                   (std::isnan(a->number) && std::isnan(b->number));
        case Expr::Tag::variable:
        case Expr::Tag::constant:
            return a->name == b->name;
        case Expr::Tag::unary:
            return a->fn == b->fn && expr_equal(a->lhs, b->lhs);
        case Expr::Tag::binary:
            return a->op == b->op && expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    }
    return false;
}

namespace {
void collect_vars(const ExprPtr& e, std::vector<std::string>& out) {
    if (!e) return;
    if (e->tag == Expr::Tag::variable) {
        for (const auto& v : out)
            if (v == e->name) return;
        out.push_back(e->name);
        return;
    }
    collect_vars(e->lhs, out);
    collect_vars(e->rhs, out);
}
}  // namespace

std::vector<std::string> free_variables(const ExprPtr& e) {
    std::vector<std::string> out;
    collect_vars(e, out);
    return out;
}

Scalar eval_expr(const ExprPtr& e, const std::map<std::string, double>& bindings) {
    switch (e->tag) {
        case Expr::Tag::number:
            return Scalar(e->number);
        case Expr::Tag::constant:
            return Scalar(e->name == "pi" ? kPi : kE);
        case Expr::Tag::variable: {
            auto it = bindings.find(e->name);
            if (it == bindings.end()) throw UnboundVariable(e->name);
            return Scalar(it->second);
        }
        case Expr::Tag::unary: {
            Scalar a = eval_expr(e->lhs, bindings);
            if (!a.is_defined()) return Scalar::undefined();
            const double x = a.value();
            switch (e->fn) {
                case UnaryFn::neg: return Scalar(-x);
                case UnaryFn::sin: return Scalar(std::sin(x));
                case UnaryFn::cos: return Scalar(std::cos(x));
                case UnaryFn::tan: return Scalar(std::tan(x));
                case UnaryFn::asin:
                    if (x < -1.0 || x > 1.0) return Scalar::undefined();
                    return Scalar(std::asin(x));
                case UnaryFn::acos:
                    if (x < -1.0 || x > 1.0) return Scalar::undefined();
                    return Scalar(std::acos(x));
                case UnaryFn::atan: return Scalar(std::atan(x));
                case UnaryFn::sqrt:
                    if (x < 0.0) return Scalar::undefined();
                    return Scalar(std::sqrt(x));
                case UnaryFn::abs: return Scalar(std::fabs(x));
                case UnaryFn::ln:
                    if (x <= 0.0) return Scalar::undefined();
                    return Scalar(std::log(x));
                case UnaryFn::log:
                    if (x <= 0.0) return Scalar::undefined();
                    return Scalar(std::log10(x));
                case UnaryFn::exp: return Scalar(std::exp(x));
            }
            return Scalar::undefined();
        }
        case Expr::Tag::binary: {
            Scalar a = eval_expr(e->lhs, bindings);
            Scalar b = eval_expr(e->rhs, bindings);
            if (!a.is_defined() || !b.is_defined()) return Scalar::undefined();
            const double x = a.value(), y = b.value();
            switch (e->op) {
                case BinaryOp::add: return Scalar(x + y);
                case BinaryOp::sub: return Scalar(x - y);
                case BinaryOp::mul: return Scalar(x * y);
                case BinaryOp::div:
                    if (y == 0.0) return Scalar::undefined();
                    return Scalar(x / y);
                case BinaryOp::pow: {
                    const double r = std::pow(x, y);
                    return Scalar(r);  // Scalar() folds NaN/inf into undefined
                }
            }
            return Scalar::undefined();
        }
    }
    return Scalar::undefined();
}

}  // namespace geocanvas
