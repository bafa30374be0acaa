#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "crgeo/errors.hpp"
#include "crgeo/jet.hpp"

namespace crgeo {

enum class NodeKind {
    Constant,
    Coord,
    Neg,
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
};

struct ExprNode {
    NodeKind kind;
    double value = 0.0;       // Constant
    int coord = -1;           // Coord
    long long exponent = 0;   // Pow
    std::shared_ptr<const ExprNode> a, b;
    std::size_t src_pos = 0;  // byte offset in source text, 0 for built trees
};

using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable scalar expression over chart coordinates. Shared subtrees are
/// kept as a DAG, which the evaluator exploits with per-point memoization.
class Expr {
public:
    Expr() = default;
    explicit Expr(ExprPtr n) : node_(std::move(n)) {}

    static Expr constant(double v) {
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Constant;
        n->value = v;
        return Expr(std::move(n));
    }

    static Expr coord(int index) {
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Coord;
        n->coord = index;
        return Expr(std::move(n));
    }

    const ExprNode* node() const { return node_.get(); }
    const ExprPtr& ptr() const { return node_; }
    bool empty() const { return node_ == nullptr; }

    bool is_constant(double v) const {
        return node_ && node_->kind == NodeKind::Constant && node_->value == v;
    }
    bool is_constant() const { return node_ && node_->kind == NodeKind::Constant; }
    double constant_value() const { return node_->value; }

private:
    ExprPtr node_;
};

inline Expr make_unary(NodeKind k, Expr a, std::size_t pos = 0) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = a.ptr();
    n->src_pos = pos;
    return Expr(std::move(n));
}

inline Expr make_binary(NodeKind k, Expr a, Expr b, std::size_t pos = 0) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = a.ptr();
    n->b = b.ptr();
    n->src_pos = pos;
    return Expr(std::move(n));
}

inline Expr make_pow(Expr base, long long e, std::size_t pos = 0) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Pow;
    n->a = base.ptr();
    n->exponent = e;
    n->src_pos = pos;
    return Expr(std::move(n));
}

// ---- building operators with constant folding ------------------------------
// The folds keep programmatically assembled tensors small (frame conjugation
// produces huge sums of structural zeros otherwise). The text parser below
// deliberately does NOT fold, so parsed trees mirror their source.

inline Expr operator-(const Expr& a) {
    if (a.is_constant()) return Expr::constant(-a.constant_value());
    if (a.node() && a.node()->kind == NodeKind::Neg) return Expr(a.node()->a);
    return make_unary(NodeKind::Neg, a);
}

inline Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    if (a.is_constant() && b.is_constant())
        return Expr::constant(a.constant_value() + b.constant_value());
    return make_binary(NodeKind::Add, a, b);
}

inline Expr operator-(const Expr& a, const Expr& b) {
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return -b;
    if (a.is_constant() && b.is_constant())
        return Expr::constant(a.constant_value() - b.constant_value());
    return make_binary(NodeKind::Sub, a, b);
}

inline Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    if (a.is_constant() && b.is_constant())
        return Expr::constant(a.constant_value() * b.constant_value());
    return make_binary(NodeKind::Mul, a, b);
}

inline Expr operator/(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
    if (b.is_constant(1.0)) return a;
    if (a.is_constant() && b.is_constant() && b.constant_value() != 0.0)
        return Expr::constant(a.constant_value() / b.constant_value());
    return make_binary(NodeKind::Div, a, b);
}

inline Expr operator+(const Expr& a, double s) { return a + Expr::constant(s); }
inline Expr operator+(double s, const Expr& a) { return Expr::constant(s) + a; }
inline Expr operator-(const Expr& a, double s) { return a - Expr::constant(s); }
inline Expr operator-(double s, const Expr& a) { return Expr::constant(s) - a; }
inline Expr operator*(const Expr& a, double s) { return a * Expr::constant(s); }
inline Expr operator*(double s, const Expr& a) { return Expr::constant(s) * a; }
inline Expr operator/(const Expr& a, double s) { return a / Expr::constant(s); }
inline Expr operator/(double s, const Expr& a) { return Expr::constant(s) / a; }

inline Expr exp(const Expr& a) { return make_unary(NodeKind::Exp, a); }
inline Expr log(const Expr& a) { return make_unary(NodeKind::Log, a); }
inline Expr sin(const Expr& a) { return make_unary(NodeKind::Sin, a); }
inline Expr cos(const Expr& a) { return make_unary(NodeKind::Cos, a); }
inline Expr sinh(const Expr& a) { return make_unary(NodeKind::Sinh, a); }
inline Expr cosh(const Expr& a) { return make_unary(NodeKind::Cosh, a); }
inline Expr sqrt(const Expr& a) { return make_unary(NodeKind::Sqrt, a); }

inline Expr pow(const Expr& a, long long e) {
    if (e == 0) return Expr::constant(1.0);
    if (e == 1) return a;
    if (a.is_constant()) return Expr::constant(ipow(a.constant_value(), e));
    return make_pow(a, e);
}

inline bool structurally_equal(const ExprNode* a, const ExprNode* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case NodeKind::Constant: return a->value == b->value;
        case NodeKind::Coord: return a->coord == b->coord;
        case NodeKind::Pow:
            return a->exponent == b->exponent && structurally_equal(a->a.get(), b->a.get());
        default: break;
    }
    return structurally_equal(a->a.get(), b->a.get()) &&
           structurally_equal(a->b.get(), b->b.get());
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
    return structurally_equal(a.node(), b.node());
}

// ---- printing ---------------------------------------------------------------

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return std::string(buf);
}

namespace detail {

inline int print_prec(const ExprNode* n) {
    switch (n->kind) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Neg: return 3;
        case NodeKind::Pow: return 4;
        case NodeKind::Constant: return n->value < 0.0 ? 3 : 5;
        default: return 5;  // coords and function calls are atoms
    }
}

inline void print_node(const ExprNode* n, const std::vector<std::string>& coords,
                       std::string& out);

inline void print_child(const ExprNode* c, const std::vector<std::string>& coords,
                        std::string& out, int min_prec) {
    if (print_prec(c) < min_prec) {
        out += '(';
        print_node(c, coords, out);
        out += ')';
    } else {
        print_node(c, coords, out);
    }
}

inline void print_node(const ExprNode* n, const std::vector<std::string>& coords,
                       std::string& out) {
    switch (n->kind) {
        case NodeKind::Constant:
            out += format_double(n->value);
            return;
        case NodeKind::Coord:
            out += coords[static_cast<std::size_t>(n->coord)];
            return;
        case NodeKind::Neg:
            out += '-';
            print_child(n->a.get(), coords, out, 3);
            return;
        case NodeKind::Add:
            print_child(n->a.get(), coords, out, 1);
            out += '+';
            print_child(n->b.get(), coords, out, 2);
            return;
        case NodeKind::Sub:
            print_child(n->a.get(), coords, out, 1);
            out += '-';
            print_child(n->b.get(), coords, out, 2);
            return;
        case NodeKind::Mul:
            print_child(n->a.get(), coords, out, 2);
            out += '*';
            print_child(n->b.get(), coords, out, 3);
            return;
        case NodeKind::Div:
            print_child(n->a.get(), coords, out, 2);
            out += '/';
            print_child(n->b.get(), coords, out, 3);
            return;
        case NodeKind::Pow: {
            print_child(n->a.get(), coords, out, 5);
            out += '^';
            out += std::to_string(n->exponent);
            return;
        }
        case NodeKind::Exp: out += "exp("; break;
        case NodeKind::Log: out += "log("; break;
        case NodeKind::Sin: out += "sin("; break;
        case NodeKind::Cos: out += "cos("; break;
        case NodeKind::Sinh: out += "sinh("; break;
        case NodeKind::Cosh: out += "cosh("; break;
        case NodeKind::Sqrt: out += "sqrt("; break;
        default: out += "?("; break;
    }
    print_node(n->a.get(), coords, out);
    out += ')';
}

} // namespace detail

inline std::string to_string(const Expr& e, const std::vector<std::string>& coords) {
    if (e.empty()) return "0";
    std::string out;
    detail::print_node(e.node(), coords, out);
    return out;
}

// ---- parsing ----------------------------------------------------------------
// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/') unary)*
// unary  := ('-'|'+')* power
// power  := atom ('^' ['-'] digits)?
// atom   := number | coord | func '(' expr ')' | '(' expr ')'

namespace detail {

class Parser {
public:
    Parser(const std::string& src, const std::vector<std::string>& coords)
        : src_(src) {
        for (std::size_t i = 0; i < coords.size(); ++i)
            coord_index_[coords[i]] = static_cast<int>(i);
    }

    Expr run() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError("unexpected trailing text", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }

    bool accept(char c) {
        if (peek_is(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) throw ParseError(std::string("expected ") + what, pos_);
    }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            std::size_t at = cursor();
            if (accept('+'))
                e = make_binary(NodeKind::Add, e, parse_term(), at);
            else if (accept('-'))
                e = make_binary(NodeKind::Sub, e, parse_term(), at);
            else
                return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            std::size_t at = cursor();
            if (accept('*'))
                e = make_binary(NodeKind::Mul, e, parse_unary(), at);
            else if (accept('/'))
                e = make_binary(NodeKind::Div, e, parse_unary(), at);
            else
                return e;
        }
    }

    Expr parse_unary() {
        std::size_t at = cursor();
        if (accept('-')) return make_unary(NodeKind::Neg, parse_unary(), at);
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        std::size_t at = cursor();
        if (!accept('^')) return base;
        skip_ws();
        bool neg = false;
        if (pos_ < src_.size() && src_[pos_] == '-') {
            neg = true;
            ++pos_;
        }
        std::size_t start = pos_;
        long long e = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            e = e * 10 + (src_[pos_] - '0');
            if (e > 1000000) throw ParseError("exponent too large", start);
            ++pos_;
        }
        if (pos_ == start) throw ParseError("expected integer exponent after '^'", pos_);
        return make_pow(base, neg ? -e : e, at);
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            expect(')', "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr parse_number() {
        const std::size_t start = pos_;
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
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' belongs to a following identifier, not this literal
            }
        }
        const std::string text = src_.substr(start, pos_ - start);
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size())
            throw ParseError("malformed number '" + text + "'", start);
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Constant;
        n->value = v;
        n->src_pos = start;
        return Expr(std::move(n));
    }

    Expr parse_ident() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string name = src_.substr(start, pos_ - start);
        static const std::unordered_map<std::string, NodeKind> kFuncs = {
            {"exp", NodeKind::Exp},   {"log", NodeKind::Log},  {"sin", NodeKind::Sin},
            {"cos", NodeKind::Cos},   {"sinh", NodeKind::Sinh}, {"cosh", NodeKind::Cosh},
            {"sqrt", NodeKind::Sqrt},
        };
        auto f = kFuncs.find(name);
        if (f != kFuncs.end()) {
            expect('(', "'(' after function name");
            Expr arg = parse_expr();
            expect(')', "')'");
            return make_unary(f->second, arg, start);
        }
        auto it = coord_index_.find(name);
        if (it == coord_index_.end())
            throw ParseError("unknown identifier '" + name + "'", start);
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Coord;
        n->coord = it->second;
        n->src_pos = start;
        return Expr(std::move(n));
    }

    std::size_t cursor() {
        skip_ws();
        return pos_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    std::unordered_map<std::string, int> coord_index_;
};

} // namespace detail

inline Expr parse_expr(const std::string& src, const std::vector<std::string>& coords) {
    return detail::Parser(src, coords).run();
}

// ---- evaluation --------------------------------------------------------------

/// Evaluates expressions as order-2 jets at one fixed point, memoizing per
/// DAG node so shared subtrees are computed once.
class JetContext {
public:
    explicit JetContext(const std::vector<double>& point)
        : dim_(static_cast<int>(point.size())), zero_(Jet2::constant(dim_, 0.0)) {
        coords_.reserve(point.size());
        for (int i = 0; i < dim_; ++i)
            coords_.push_back(Jet2::coordinate(dim_, i, point[static_cast<std::size_t>(i)]));
    }

    int dim() const { return dim_; }

    const Jet2& eval(const Expr& e) {
        if (e.empty()) return zero_;
        return eval_node(e.node());
    }

private:
    const Jet2& eval_node(const ExprNode* n) {
        auto it = cache_.find(n);
        if (it != cache_.end()) return it->second;
        Jet2 out;
        switch (n->kind) {
            case NodeKind::Constant: out = Jet2::constant(dim_, n->value); break;
            case NodeKind::Coord: {
                if (n->coord >= dim_)
                    throw EvalError("coordinate index out of range for this chart");
                out = coords_[static_cast<std::size_t>(n->coord)];
                break;
            }
            case NodeKind::Neg: out = -eval_node(n->a.get()); break;
            case NodeKind::Exp: out = crgeo::exp(eval_node(n->a.get())); break;
            case NodeKind::Log: {
                const Jet2& a = eval_node(n->a.get());
                if (!(a.value() > 0.0))
                    throw EvalError("log of non-positive value (offset " +
                                    std::to_string(n->src_pos) + ")");
                out = crgeo::log(a);
                break;
            }
            case NodeKind::Sin: out = crgeo::sin(eval_node(n->a.get())); break;
            case NodeKind::Cos: out = crgeo::cos(eval_node(n->a.get())); break;
            case NodeKind::Sinh: out = crgeo::sinh(eval_node(n->a.get())); break;
            case NodeKind::Cosh: out = crgeo::cosh(eval_node(n->a.get())); break;
            case NodeKind::Sqrt: {
                const Jet2& a = eval_node(n->a.get());
                if (!(a.value() > 0.0))
                    throw EvalError("sqrt of non-positive value (offset " +
                                    std::to_string(n->src_pos) + ")");
                out = crgeo::sqrt(a);
                break;
            }
            case NodeKind::Add: out = eval_node(n->a.get()) + eval_node(n->b.get()); break;
            case NodeKind::Sub: out = eval_node(n->a.get()) - eval_node(n->b.get()); break;
            case NodeKind::Mul: out = eval_node(n->a.get()) * eval_node(n->b.get()); break;
            case NodeKind::Div: {
                const Jet2& b = eval_node(n->b.get());
                if (b.value() == 0.0)
                    throw EvalError("division by zero (offset " +
                                    std::to_string(n->src_pos) + ")");
                out = eval_node(n->a.get()) / b;
                break;
            }
            case NodeKind::Pow: {
                const Jet2& a = eval_node(n->a.get());
                if (a.value() == 0.0 && n->exponent < 0)
                    throw EvalError("zero raised to a negative power (offset " +
                                    std::to_string(n->src_pos) + ")");
                out = pow_int(a, n->exponent);
                break;
            }
        }
        return cache_.emplace(n, out).first->second;
    }

    int dim_;
    Jet2 zero_;
    std::vector<Jet2> coords_;
    std::unordered_map<const ExprNode*, Jet2> cache_;
};

/// Plain value evaluation (no derivatives), also memoized.
inline double eval_value(const Expr& e, const std::vector<double>& point) {
    JetContext ctx(point);
    return ctx.eval(e).value();
}

} // namespace crgeo
