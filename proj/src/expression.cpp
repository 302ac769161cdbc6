#include "deformesh/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace deformesh {

struct Expression::Node {
    enum class Kind { Constant, VarX, VarY, VarT, Neg, Add, Sub, Mul, Div, Pow, Call };
    Kind kind = Kind::Constant;
    double value = 0.0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    double eval(double x, double y, double t) const {
        switch (kind) {
        case Kind::Constant:
            return value;
        case Kind::VarX:
            return x;
        case Kind::VarY:
            return y;
        case Kind::VarT:
            return t;
        case Kind::Neg:
            return -lhs->eval(x, y, t);
        case Kind::Add:
            return lhs->eval(x, y, t) + rhs->eval(x, y, t);
        case Kind::Sub:
            return lhs->eval(x, y, t) - rhs->eval(x, y, t);
        case Kind::Mul:
            return lhs->eval(x, y, t) * rhs->eval(x, y, t);
        case Kind::Div:
            return lhs->eval(x, y, t) / rhs->eval(x, y, t);
        case Kind::Pow:
            return std::pow(lhs->eval(x, y, t), rhs->eval(x, y, t));
        case Kind::Call:
            return fn(lhs->eval(x, y, t));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

struct Function {
    const char* name;
    double (*fn)(double);
};

double fabs_(double v) { return std::fabs(v); }
double sin_(double v) { return std::sin(v); }
double cos_(double v) { return std::cos(v); }
double tan_(double v) { return std::tan(v); }
double exp_(double v) { return std::exp(v); }
double log_(double v) { return std::log(v); }
double sqrt_(double v) { return std::sqrt(v); }
double tanh_(double v) { return std::tanh(v); }

constexpr Function kFunctions[] = {{"sin", sin_},   {"cos", cos_},   {"tan", tan_}, {"exp", exp_},
                                   {"log", log_},   {"sqrt", sqrt_}, {"abs", fabs_}, {"tanh", tanh_}};

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size())
            throw ExpressionError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
        return e;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = make(Kind::Add, lhs, term());
            else if (accept('-'))
                lhs = make(Kind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = make(Kind::Mul, lhs, unary());
            else if (accept('/'))
                lhs = make(Kind::Div, lhs, unary());
            else
                return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-'))
            return make(Kind::Neg, unary());
        if (accept('+'))
            return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^'))
            return make(Kind::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size())
            throw ExpressionError("unexpected end of expression", pos_);
        const char c = s_[pos_];
        if (accept('(')) {
            NodePtr e = expr();
            if (!accept(')'))
                throw ExpressionError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin)
                throw ExpressionError("malformed number", pos_);
            pos_ += static_cast<std::size_t>(end - begin);
            auto n = std::make_shared<Expression::Node>();
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "x")
                return make(Kind::VarX);
            if (name == "y")
                return make(Kind::VarY);
            if (name == "t")
                return make(Kind::VarT);
            if (name == "pi") {
                auto n = std::make_shared<Expression::Node>();
                n->value = std::numbers::pi;
                return n;
            }
            for (const Function& f : kFunctions) {
                if (name == f.name) {
                    if (!accept('('))
                        throw ExpressionError("expected '(' after " + name, pos_);
                    NodePtr arg = expr();
                    if (!accept(')'))
                        throw ExpressionError("expected ')'", pos_);
                    auto n = std::make_shared<Expression::Node>();
                    n->kind = Kind::Call;
                    n->fn = f.fn;
                    n->lhs = arg;
                    return n;
                }
            }
            throw ExpressionError("unknown identifier '" + name + "'", start);
        }
        throw ExpressionError("unexpected '" + std::string(1, c) + "'", pos_);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.text_ = text;
    e.root_ = Parser(text).parse();
    return e;
}

double Expression::operator()(double x, double y, double t) const { return root_->eval(x, y, t); }

}  // namespace deformesh
