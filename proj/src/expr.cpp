#include "expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <utility>

namespace slantgeo {

namespace {

constexpr std::array<std::pair<std::string_view, FuncKind>, 9> kFunctions = {{
    {"sin", FuncKind::sin},
    {"cos", FuncKind::cos},
    {"tan", FuncKind::tan},
    {"sqrt", FuncKind::sqrt},
    {"exp", FuncKind::exp},
    {"log", FuncKind::log},
    {"asin", FuncKind::asin},
    {"acos", FuncKind::acos},
    {"atan", FuncKind::atan},
}};

std::optional<FuncKind> lookup_function(std::string_view name) {
    for (const auto& [n, k] : kFunctions)
        if (n == name) return k;
    return std::nullopt;
}

Ast::Ptr make_const(double v) {
    auto n = std::make_shared<Ast>();
    n->kind = Ast::Kind::constant;
    n->number = v;
    return n;
}

Ast::Ptr make_var(std::string name) {
    auto n = std::make_shared<Ast>();
    n->kind = Ast::Kind::variable;
    n->name = std::move(name);
    return n;
}

Ast::Ptr make_unary(Ast::Kind k, Ast::Ptr child) {
    auto n = std::make_shared<Ast>();
    n->kind = k;
    n->lhs = std::move(child);
    return n;
}

Ast::Ptr make_binary(Ast::Kind k, Ast::Ptr a, Ast::Ptr b) {
    auto n = std::make_shared<Ast>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

Ast::Ptr make_call(FuncKind f, Ast::Ptr arg) {
    auto n = std::make_shared<Ast>();
    n->kind = Ast::Kind::call;
    n->func = f;
    n->lhs = std::move(arg);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ParseResult run() {
        skip_ws();
        if (pos_ >= src_.size()) return fail(pos_, "expected expression, got empty input");
        Ast::Ptr e = parse_expr();
        if (!e) return ParseResult::failure(err_);
        skip_ws();
        if (pos_ != src_.size()) return fail(pos_, "unexpected trailing characters");
        return ParseResult::success(std::move(e));
    }

private:
    ParseResult fail(std::size_t off, std::string what) {
        err_ = ParseError{off, std::move(what)};
        return ParseResult::failure(err_);
    }

    Ast::Ptr error(std::size_t off, std::string what) {
        err_ = ParseError{off, std::move(what)};
        return nullptr;
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool at(char c) {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }

    bool accept(char c) {
        if (at(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    Ast::Ptr parse_expr() {
        Ast::Ptr lhs = parse_term();
        if (!lhs) return nullptr;
        while (true) {
            if (accept('+')) {
                Ast::Ptr rhs = parse_term();
                if (!rhs) return nullptr;
                lhs = make_binary(Ast::Kind::add, std::move(lhs), std::move(rhs));
            } else if (accept('-')) {
                Ast::Ptr rhs = parse_term();
                if (!rhs) return nullptr;
                lhs = make_binary(Ast::Kind::sub, std::move(lhs), std::move(rhs));
            } else {
                return lhs;
            }
        }
    }

    Ast::Ptr parse_term() {
        Ast::Ptr lhs = parse_factor();
        if (!lhs) return nullptr;
        while (true) {
            if (accept('*')) {
                Ast::Ptr rhs = parse_factor();
                if (!rhs) return nullptr;
                lhs = make_binary(Ast::Kind::mul, std::move(lhs), std::move(rhs));
            } else if (accept('/')) {
                Ast::Ptr rhs = parse_factor();
                if (!rhs) return nullptr;
                lhs = make_binary(Ast::Kind::div, std::move(lhs), std::move(rhs));
            } else {
                return lhs;
            }
        }
    }

    Ast::Ptr parse_factor() {
        if (accept('-')) {
            Ast::Ptr inner = parse_factor();
            if (!inner) return nullptr;
            return make_unary(Ast::Kind::negate, std::move(inner));
        }
        return parse_power();
    }

    Ast::Ptr parse_power() {
        Ast::Ptr base = parse_atom();
        if (!base) return nullptr;
        if (accept('^')) {
            Ast::Ptr expo = parse_factor();  // right-associative
            if (!expo) return nullptr;
            return make_binary(Ast::Kind::pow, std::move(base), std::move(expo));
        }
        return base;
    }

    Ast::Ptr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) return error(pos_, "expected expression, got end of input");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Ast::Ptr inner = parse_expr();
            if (!inner) return nullptr;
            if (!accept(')')) return error(pos_, "expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        return error(pos_, std::string("unexpected character '") + c + "'");
    }

    Ast::Ptr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                return error(pos_, "expected digit after decimal point");
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                pos_ = mark;  // not an exponent; leave 'e...' for the caller to reject
            } else {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        double value = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (res.ec != std::errc{}) return error(start, "invalid numeric literal");
        return make_const(value);
    }

    Ast::Ptr parse_ident() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string name(src_.substr(start, pos_ - start));
        if (at('(')) {
            const auto fk = lookup_function(name);
            if (!fk) return error(start, "unknown function '" + name + "'");
            ++pos_;  // consume '('
            Ast::Ptr arg = parse_expr();
            if (!arg) return nullptr;
            if (!accept(')')) return error(pos_, "expected ')'");
            return make_call(*fk, std::move(arg));
        }
        if (name == "pi") return make_const(M_PI);
        return make_var(std::move(name));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    ParseError err_;
};

void collect_vars(const Ast& ast, std::vector<std::string>& out) {
    switch (ast.kind) {
        case Ast::Kind::constant:
            return;
        case Ast::Kind::variable: {
            for (const auto& n : out)
                if (n == ast.name) return;
            out.push_back(ast.name);
            return;
        }
        default:
            if (ast.lhs) collect_vars(*ast.lhs, out);
            if (ast.rhs) collect_vars(*ast.rhs, out);
    }
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ParseResult parse(std::string_view source) { return Parser(source).run(); }

std::vector<std::string> free_variables(const Ast& ast) {
    std::vector<std::string> out;
    collect_vars(ast, out);
    return out;
}

const char* func_name(FuncKind f) {
    for (const auto& [n, k] : kFunctions)
        if (k == f) return n.data();
    return "?";
}

std::string to_string(const Ast& ast) {
    switch (ast.kind) {
        case Ast::Kind::constant:
            return format_number(ast.number);
        case Ast::Kind::variable:
            return ast.name;
        case Ast::Kind::negate:
            return "(-" + to_string(*ast.lhs) + ")";
        case Ast::Kind::add:
            return "(" + to_string(*ast.lhs) + "+" + to_string(*ast.rhs) + ")";
        case Ast::Kind::sub:
            return "(" + to_string(*ast.lhs) + "-" + to_string(*ast.rhs) + ")";
        case Ast::Kind::mul:
            return "(" + to_string(*ast.lhs) + "*" + to_string(*ast.rhs) + ")";
        case Ast::Kind::div:
            return "(" + to_string(*ast.lhs) + "/" + to_string(*ast.rhs) + ")";
        case Ast::Kind::pow:
            return "(" + to_string(*ast.lhs) + "^" + to_string(*ast.rhs) + ")";
        case Ast::Kind::call:
            return std::string(func_name(ast.func)) + "(" + to_string(*ast.lhs) + ")";
    }
    return "?";
}

bool structurally_equal(const Ast& a, const Ast& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Ast::Kind::constant:
            return a.number == b.number;
        case Ast::Kind::variable:
            return a.name == b.name;
        case Ast::Kind::call:
            if (a.func != b.func) return false;
            return structurally_equal(*a.lhs, *b.lhs);
        case Ast::Kind::negate:
            return structurally_equal(*a.lhs, *b.lhs);
        default:
            return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
    }
}

}  // namespace slantgeo
