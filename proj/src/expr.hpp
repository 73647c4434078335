#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scalar.hpp"

namespace slantgeo {

// Arithmetic expression language for immersion components. The AST is
// immutable after parsing and evaluation is pure, so shared concurrent reads
// are safe.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'

enum class FuncKind { sin, cos, tan, sqrt, exp, log, asin, acos, atan };

struct Ast {
    enum class Kind { constant, variable, negate, add, sub, mul, div, pow, call };
    using Ptr = std::shared_ptr<const Ast>;

    Kind kind = Kind::constant;
    double number = 0.0;  // constant
    std::string name;     // variable
    FuncKind func{};      // call
    Ptr lhs, rhs;         // children; unary nodes use lhs only
};

struct ParseError {
    std::size_t offset = 0;   // byte offset into the source, <= source length
    std::string expected;
};

class ParseResult {
public:
    static ParseResult success(Ast::Ptr ast) {
        ParseResult r;
        r.ast_ = std::move(ast);
        return r;
    }
    static ParseResult failure(ParseError err) {
        ParseResult r;
        r.error_ = std::move(err);
        return r;
    }

    explicit operator bool() const { return ast_ != nullptr; }
    const Ast::Ptr& ast() const { return ast_; }
    const ParseError& error() const { return error_; }

private:
    Ast::Ptr ast_;
    ParseError error_;
};

ParseResult parse(std::string_view source);

// Variable names in first-occurrence order, deduplicated.
std::vector<std::string> free_variables(const Ast& ast);

// Fully parenthesized form; re-parses to a structurally identical tree.
std::string to_string(const Ast& ast);

bool structurally_equal(const Ast& a, const Ast& b);

const char* func_name(FuncKind f);

template <class S>
S evaluate(const Ast& ast, std::span<const std::string> names, std::span<const S> values) {
    using T = scalar_traits<S>;
    switch (ast.kind) {
        case Ast::Kind::constant:
            return T::constant(ast.number);
        case Ast::Kind::variable: {
            for (std::size_t i = 0; i < names.size(); ++i)
                if (names[i] == ast.name) return values[i];
            throw EvalError("unbound variable '" + ast.name + "'");
        }
        case Ast::Kind::negate:
            return -evaluate(*ast.lhs, names, values);
        case Ast::Kind::add:
            return evaluate(*ast.lhs, names, values) + evaluate(*ast.rhs, names, values);
        case Ast::Kind::sub:
            return evaluate(*ast.lhs, names, values) - evaluate(*ast.rhs, names, values);
        case Ast::Kind::mul:
            return evaluate(*ast.lhs, names, values) * evaluate(*ast.rhs, names, values);
        case Ast::Kind::div: {
            S a = evaluate(*ast.lhs, names, values);
            S b = evaluate(*ast.rhs, names, values);
            if (T::value(b) == 0.0) throw EvalError("division by zero");
            return a / b;
        }
        case Ast::Kind::pow:
            return pow_scalar(evaluate(*ast.lhs, names, values), evaluate(*ast.rhs, names, values));
        case Ast::Kind::call: {
            S x = evaluate(*ast.lhs, names, values);
            const double v = T::value(x);
            using std::acos;
            using std::asin;
            using std::atan;
            using std::cos;
            using std::exp;
            using std::log;
            using std::sin;
            using std::sqrt;
            using std::tan;
            switch (ast.func) {
                case FuncKind::sin: return sin(x);
                case FuncKind::cos: return cos(x);
                case FuncKind::tan: return tan(x);
                case FuncKind::sqrt:
                    if (v < 0.0) throw EvalError("sqrt of negative value");
                    return sqrt(x);
                case FuncKind::exp: return exp(x);
                case FuncKind::log:
                    if (v <= 0.0) throw EvalError("log of non-positive value");
                    return log(x);
                case FuncKind::asin:
                    if (v < -1.0 || v > 1.0) throw EvalError("asin argument outside [-1,1]");
                    return asin(x);
                case FuncKind::acos:
                    if (v < -1.0 || v > 1.0) throw EvalError("acos argument outside [-1,1]");
                    return acos(x);
                case FuncKind::atan: return atan(x);
            }
            throw EvalError("unknown function kind");
        }
    }
    throw EvalError("unknown node kind");
}

}  // namespace slantgeo
