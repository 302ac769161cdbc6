#pragma once

#include <memory>
#include <string>

#include "deformesh/error.hpp"

namespace deformesh {

class ExpressionError : public Error {
public:
    ExpressionError(const std::string& what, std::size_t column)
        : Error(what + " at column " + std::to_string(column + 1)), column_(column) {}
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

/// Compiled arithmetic expression over the variables x, y and t.
///
/// Grammar: numbers, x, y, t, pi, + - * / ^ (right-associative), unary minus,
/// parentheses, and the functions sin cos tan exp log sqrt abs tanh.
class Expression {
public:
    static Expression parse(const std::string& text);

    double operator()(double x, double y, double t) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

}  // namespace deformesh
