#pragma once

/**
 * @file expression.hpp
 * @brief Parser for coefficient expressions over chart coordinates.
 *
 * Grammar (EBNF):
 *
 *     expr    = term { ("+" | "-") term } ;
 *     term    = unary { ("*" | "/") unary } ;
 *     unary   = ("+" | "-") unary | power ;
 *     power   = primary [ "^" unary ] ;          (right associative)
 *     primary = number | identifier | func "(" expr ")" | "(" expr ")" ;
 *     func    = "sin" | "cos" | "tan" | "exp" ;
 *
 * Identifiers are the chart's coordinate names and the constant `pi`.
 * Numbers use the usual decimal/exponent syntax (`2`, `0.5`, `1e-3`).
 */

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "bicontact/chart.hpp"
#include "bicontact/errors.hpp"
#include "bicontact/field.hpp"

namespace bicontact {

namespace expr {

enum class Op { constant, coordinate, add, sub, mul, div, neg, pow, sin, cos, tan, exp };

struct Node {
    Op op = Op::constant;
    double value = 0.0;  // constant
    int index = 0;       // coordinate
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

inline NodePtr make_constant(double c) {
    auto n = std::make_shared<Node>();
    n->op = Op::constant;
    n->value = c;
    return n;
}

inline NodePtr make_node(Op op, NodePtr a, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

template <class T>
T pow_eval(const T& base, const Node& exponent, const T& e) {
    if (exponent.op == Op::constant) {
        const double k = exponent.value;
        if (k == std::round(k) && std::abs(k) <= 64.0) return ipow(base, static_cast<int>(k));
    }
    return exp(e * log(base));
}

template <class T>
T evaluate(const Node& n, const Point<T>& p) {
    switch (n.op) {
        case Op::constant: return T(n.value);
        case Op::coordinate: return p[n.index];
        case Op::add: return evaluate(*n.lhs, p) + evaluate(*n.rhs, p);
        case Op::sub: return evaluate(*n.lhs, p) - evaluate(*n.rhs, p);
        case Op::mul: return evaluate(*n.lhs, p) * evaluate(*n.rhs, p);
        case Op::div: {
            const T den = evaluate(*n.rhs, p);
            if (value_of(den) == 0.0) throw DomainError("division by zero in expression");
            return evaluate(*n.lhs, p) / den;
        }
        case Op::neg: return -evaluate(*n.lhs, p);
        case Op::pow: return pow_eval(evaluate(*n.lhs, p), *n.rhs, evaluate(*n.rhs, p));
        case Op::sin: return sin(evaluate(*n.lhs, p));
        case Op::cos: return cos(evaluate(*n.lhs, p));
        case Op::tan: return tan(evaluate(*n.lhs, p));
        case Op::exp: return exp(evaluate(*n.lhs, p));
    }
    throw Error("corrupt expression node");
}

/// Recursive-descent parser producing an expression tree.
class Parser {
public:
    Parser(std::string_view text, std::array<std::string, 3> names) : text_(text), names_(std::move(names)) {}

    NodePtr parse() {
        NodePtr n = parse_expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_expr() {
        NodePtr n = parse_term();
        for (;;) {
            if (accept('+')) n = fold(Op::add, n, parse_term());
            else if (accept('-')) n = fold(Op::sub, n, parse_term());
            else return n;
        }
    }

    NodePtr parse_term() {
        NodePtr n = parse_unary();
        for (;;) {
            if (accept('*')) n = fold(Op::mul, n, parse_unary());
            else if (accept('/')) n = fold(Op::div, n, parse_unary());
            else return n;
        }
    }

    NodePtr parse_unary() {
        if (accept('+')) return parse_unary();
        if (accept('-')) return fold(Op::neg, parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (accept('^')) return fold(Op::pow, base, parse_unary());
        return base;
    }

    NodePtr parse_primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        if (accept('(')) {
            NodePtr n = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
        }
        const std::string token(text_.substr(start, pos_ - start));
        char* end = nullptr;
        const double val = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size()) {
            pos_ = start;
            fail("malformed number '" + token + "'");
        }
        return make_constant(val);
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        static const std::pair<const char*, Op> funcs[] = {
            {"sin", Op::sin}, {"cos", Op::cos}, {"tan", Op::tan}, {"exp", Op::exp}};
        for (const auto& [fname, op] : funcs) {
            if (name != fname) continue;
            if (!accept('(')) fail("expected '(' after " + name);
            NodePtr arg = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return fold(op, arg);
        }
        if (name == "pi") return make_constant(std::numbers::pi);
        for (int i = 0; i < 3; ++i) {
            if (names_[i] == name) {
                auto n = std::make_shared<Node>();
                n->op = Op::coordinate;
                n->index = i;
                return n;
            }
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }

    /// Builds a node, collapsing it to a constant when every operand is one.
    NodePtr fold(Op op, NodePtr a, NodePtr b = nullptr) {
        NodePtr n = make_node(op, std::move(a), std::move(b));
        const bool const_a = n->lhs->op == Op::constant;
        const bool const_b = !n->rhs || n->rhs->op == Op::constant;
        if (const_a && const_b && op != Op::tan && op != Op::div) {
            const double val = evaluate<double>(*n, Point<double>{0.0, 0.0, 0.0});
            if (std::isfinite(val)) return make_constant(val);
        }
        return n;
    }

    std::string_view text_;
    std::array<std::string, 3> names_;
    std::size_t pos_ = 0;
};

}  // namespace expr

/// Parse `text` into a field over the chart's coordinates.
inline ScalarField parse_scalar_field(std::string_view text, const Chart& chart) {
    expr::Parser parser(text, {chart.name(0), chart.name(1), chart.name(2)});
    expr::NodePtr root = parser.parse();
    return ScalarField([root](const auto& p) { return expr::evaluate(*root, p); });
}

inline ScalarField parse_scalar_field(std::string_view text, const ChartPtr& chart) {
    return parse_scalar_field(text, *chart);
}

}  // namespace bicontact
