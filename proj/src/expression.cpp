#include "orlicz/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "orlicz/error.hpp"

namespace orlicz {

namespace {

enum class Op {
    constant, var_x, var_y,
    add, sub, mul, div, pow, neg,
    abs, sqrt, exp, log, sin, cos, tan, atan, sinh, cosh, tanh, step, sign,
    min, max,
};

struct FunctionEntry {
    std::string_view name;
    Op op;
    int arity;
};

constexpr std::array<FunctionEntry, 17> kFunctions{{
    {"abs", Op::abs, 1},   {"sqrt", Op::sqrt, 1}, {"exp", Op::exp, 1},
    {"log", Op::log, 1},   {"sin", Op::sin, 1},   {"cos", Op::cos, 1},
    {"tan", Op::tan, 1},   {"atan", Op::atan, 1}, {"sinh", Op::sinh, 1},
    {"cosh", Op::cosh, 1}, {"tanh", Op::tanh, 1}, {"step", Op::step, 1},
    {"sign", Op::sign, 1}, {"min", Op::min, 2},   {"max", Op::max, 2},
    {"pow", Op::pow, 2},   {"ln", Op::log, 1},
}};

}  // namespace

struct Expression::Node {
    Op op = Op::constant;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    double eval(const Point& p) const {
        switch (op) {
            case Op::constant: return value;
            case Op::var_x: return p.x;
            case Op::var_y: return p.y;
            case Op::add: return lhs->eval(p) + rhs->eval(p);
            case Op::sub: return lhs->eval(p) - rhs->eval(p);
            case Op::mul: return lhs->eval(p) * rhs->eval(p);
            case Op::div: return lhs->eval(p) / rhs->eval(p);
            case Op::pow: return std::pow(lhs->eval(p), rhs->eval(p));
            case Op::neg: return -lhs->eval(p);
            case Op::abs: return std::abs(lhs->eval(p));
            case Op::sqrt: return std::sqrt(lhs->eval(p));
            case Op::exp: return std::exp(lhs->eval(p));
            case Op::log: return std::log(lhs->eval(p));
            case Op::sin: return std::sin(lhs->eval(p));
            case Op::cos: return std::cos(lhs->eval(p));
            case Op::tan: return std::tan(lhs->eval(p));
            case Op::atan: return std::atan(lhs->eval(p));
            case Op::sinh: return std::sinh(lhs->eval(p));
            case Op::cosh: return std::cosh(lhs->eval(p));
            case Op::tanh: return std::tanh(lhs->eval(p));
            case Op::step: return lhs->eval(p) >= 0.0 ? 1.0 : 0.0;
            case Op::sign: {
                const double v = lhs->eval(p);
                return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
            }
            case Op::min: return std::min(lhs->eval(p), rhs->eval(p));
            case Op::max: return std::max(lhs->eval(p), rhs->eval(p));
        }
        return std::numeric_limits<double>::quiet_NaN();
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_constant(double v) {
    auto n = std::make_shared<Expression::Node>();
    n->op = Op::constant;
    n->value = v;
    return n;
}

NodePtr make_node(Op op, NodePtr lhs, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    // Fold constant subtrees so is_constant() expressions evaluate in O(1).
    const bool foldable = n->lhs && n->lhs->op == Op::constant &&
                          (!n->rhs || n->rhs->op == Op::constant);
    if (foldable) return make_constant(n->eval(Point{}));
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr root = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return root;
    }

    bool uses_coordinates() const noexcept { return uses_coordinates_; }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw ExpressionError("expression '" + std::string(text_) + "': " + message +
                                  " at offset " + std::to_string(pos_),
                              pos_);
    }

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

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make_node(Op::add, lhs, term());
            else if (accept('-')) lhs = make_node(Op::sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make_node(Op::mul, lhs, unary());
            else if (accept('/')) lhs = make_node(Op::div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make_node(Op::neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return make_node(Op::pow, base, unary());
        return base;
    }

    NodePtr atom() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        double value = 0.0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{}) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return make_constant(value);
    }

    NodePtr name() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string_view id = text_.substr(start, pos_ - start);

        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            for (const auto& f : kFunctions) {
                if (f.name != id) continue;
                ++pos_;
                NodePtr a = expr();
                NodePtr b;
                if (f.arity == 2) {
                    expect(',');
                    b = expr();
                }
                expect(')');
                return make_node(f.op, a, b);
            }
            pos_ = start;
            fail("unknown function '" + std::string(id) + "'");
        }
        if (id == "x") {
            uses_coordinates_ = true;
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::var_x;
            return n;
        }
        if (id == "y") {
            uses_coordinates_ = true;
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::var_y;
            return n;
        }
        if (id == "pi") return make_constant(std::numbers::pi);
        if (id == "e") return make_constant(std::numbers::e);
        if (id == "inf") return make_constant(std::numeric_limits<double>::infinity());
        pos_ = start;
        fail("unknown name '" + std::string(id) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    bool uses_coordinates_ = false;
};

}  // namespace

Expression::Expression(std::string text, std::shared_ptr<const Node> root, bool constant)
    : text_(std::move(text)), root_(std::move(root)), constant_(constant) {}

Expression Expression::parse(std::string_view text) {
    Parser parser(text);
    NodePtr root = parser.parse();
    return Expression(std::string(text), std::move(root), !parser.uses_coordinates());
}

double Expression::operator()(const Point& p) const { return root_->eval(p); }

}  // namespace orlicz
