#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyfp/errors.hpp"

namespace fuzzyfp::expr {

/// Syntax error with the byte offset of the offending token and the
/// tokens that would have been accepted there.
class ParseError : public InputError {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what);

    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

/// Domain errors (division by zero, sqrt of a negative, non-finite
/// results) and unbound variables at evaluation time.
class EvalError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

using Binding = std::map<std::string, double, std::less<>>;

struct Node;

/// Immutable expression tree; copies share the tree.
///
/// Grammar (whitespace insignificant):
///   expr  := term (("+"|"-") term)*
///   term  := unary (("*"|"/") unary)*
///   unary := "-" unary | power
///   power := atom ("^" unary)?
///   atom  := number | ident | ident "(" expr ("," expr)* ")" | "(" expr ")"
/// so "^" binds tighter than unary minus and is right associative.
/// Functions: min, max (one or more arguments), abs, sqrt, exp.
class Expr {
public:
    static Expr parse(std::string_view text);

    double eval(const Binding& binding) const;
    std::set<std::string> variables() const;
    const std::string& source() const { return source_; }

private:
    Expr(std::shared_ptr<const Node> root, std::string source)
        : root_(std::move(root)), source_(std::move(source)) {}

    friend class Compiled;

    std::shared_ptr<const Node> root_;
    std::string source_;
};

/// An expression with variables resolved to argument positions; the fast
/// path for grid scans. Construction fails with InputError if the
/// expression uses a variable outside `params`.
class Compiled {
public:
    Compiled(const Expr& e, std::vector<std::string> params);

    double operator()(std::span<const double> args) const;
    double operator()(std::initializer_list<double> args) const {
        return (*this)(std::span<const double>(args.begin(), args.size()));
    }

    const Expr& expr() const { return expr_; }
    const std::vector<std::string>& params() const { return params_; }

private:
    struct Instr;

    Expr expr_;
    std::vector<std::string> params_;
    std::shared_ptr<const std::vector<Instr>> program_;
    std::size_t max_depth_ = 0;
};

/// Parse + evaluate convenience.
double eval_expr(const Expr& e, const Binding& binding);

}  // namespace fuzzyfp::expr
