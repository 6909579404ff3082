#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "orlicz/point.hpp"

namespace orlicz {

/// Closed-form scalar expression over the coordinates `x` and `y`.
///
/// Grammar (usual precedence, `^` right-associative and binding tighter
/// than unary minus):
///
///     expr   := term (('+' | '-') term)*
///     term   := unary (('*' | '/') unary)*
///     unary  := ('-' | '+') unary | power
///     power  := atom ('^' unary)?
///     atom   := number | name | name '(' args ')' | '(' expr ')'
///
/// Names: `x`, `y`, `pi`, `e`, `inf`. Functions: abs, sqrt, exp, log, sin,
/// cos, tan, atan, sinh, cosh, tanh, step (Heaviside, step(0) = 1), sign,
/// min, max, pow.
///
/// Parsed once; evaluation is allocation-free and thread-safe.
class Expression {
public:
    struct Node;

    static Expression parse(std::string_view text);

    double operator()(const Point& p) const;
    double operator()(double x, double y = 0.0) const { return (*this)(Point{x, y}); }

    const std::string& text() const noexcept { return text_; }
    /// True when the expression does not reference `x` or `y`.
    bool is_constant() const noexcept { return constant_; }

private:
    Expression(std::string text, std::shared_ptr<const Node> root, bool constant);

    std::string text_;
    std::shared_ptr<const Node> root_;
    bool constant_ = true;
};

}  // namespace orlicz
