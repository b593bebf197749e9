#include "tauber/expr.hpp"

#include <cctype>
#include <cmath>
#include <vector>

#include "tauber/errors.hpp"

namespace tauber::rules {

struct Expr::Node {
    enum class Op {
        Num, Var, Add, Sub, Mul, Div, Pow, Neg,
        Exp, Log, Sin, Cos, Abs, Sqrt, Min, Max, Indicator
    };
    Op op;
    double num = 0.0;
    std::shared_ptr<const Node> a, b;

    double eval(double x) const {
        switch (op) {
            case Op::Num: return num;
            case Op::Var: return x;
            case Op::Add: return a->eval(x) + b->eval(x);
            case Op::Sub: return a->eval(x) - b->eval(x);
            case Op::Mul: return a->eval(x) * b->eval(x);
            case Op::Div: return a->eval(x) / b->eval(x);
            case Op::Pow: return std::pow(a->eval(x), b->eval(x));
            case Op::Neg: return -a->eval(x);
            case Op::Exp: return std::exp(a->eval(x));
            case Op::Log: return std::log(a->eval(x));
            case Op::Sin: return std::sin(a->eval(x));
            case Op::Cos: return std::cos(a->eval(x));
            case Op::Abs: return std::abs(a->eval(x));
            case Op::Sqrt: return std::sqrt(a->eval(x));
            case Op::Min: return std::min(a->eval(x), b->eval(x));
            case Op::Max: return std::max(a->eval(x), b->eval(x));
            case Op::Indicator: {
                double lo = a->eval(x), hi = b->eval(x);
                return (x >= lo && x <= hi) ? 1.0 : 0.0;
            }
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Op = Expr::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_num(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::Num;
    n->num = v;
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("trailing input");
        return e;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) {
        throw SchemaError("expr parse error at offset " + std::to_string(pos_) + ": " + msg +
                          " in \"" + s_ + "\"");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr expr() {  // addition level
        NodePtr e = term();
        for (;;) {
            if (eat('+')) e = make(Op::Add, e, term());
            else if (eat('-')) e = make(Op::Sub, e, term());
            else return e;
        }
    }
    NodePtr term() {  // multiplication level
        NodePtr e = unary();
        for (;;) {
            if (eat('*')) e = make(Op::Mul, e, unary());
            else if (eat('/')) e = make(Op::Div, e, unary());
            else return e;
        }
    }
    NodePtr unary() {
        if (eat('-')) return make(Op::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }
    NodePtr power() {  // right associative
        NodePtr base = atom();
        if (eat('^')) return make(Op::Pow, base, unary());
        return base;
    }
    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (std::isdigit((unsigned char)c) || c == '.') return number();
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isalpha((unsigned char)c)) return ident();
        fail("unexpected character");
    }
    NodePtr number() {
        size_t end = pos_;
        while (end < s_.size() &&
               (std::isdigit((unsigned char)s_[end]) || s_[end] == '.' || s_[end] == 'e' ||
                s_[end] == 'E' ||
                ((s_[end] == '+' || s_[end] == '-') && (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
            ++end;
        try {
            size_t used = 0;
            double v = std::stod(s_.substr(pos_, end - pos_), &used);
            pos_ += used;
            return make_num(v);
        } catch (const std::exception&) {
            fail("bad number");
        }
    }
    NodePtr ident() {
        size_t end = pos_;
        while (end < s_.size() && (std::isalnum((unsigned char)s_[end]) || s_[end] == '_')) ++end;
        std::string name = s_.substr(pos_, end - pos_);
        pos_ = end;
        if (name == "x" || name == "t") return make(Op::Var);
        if (name == "pi") return make_num(M_PI);
        if (name == "e") return make_num(M_E);

        auto unary_fn = [&](Op op) {
            if (!eat('(')) fail("expected '(' after " + name);
            NodePtr a = expr();
            if (!eat(')')) fail("expected ')'");
            return make(op, a);
        };
        auto binary_fn = [&](Op op) {
            if (!eat('(')) fail("expected '(' after " + name);
            NodePtr a = expr();
            if (!eat(',')) fail("expected ','");
            NodePtr b = expr();
            if (!eat(')')) fail("expected ')'");
            return make(op, a, b);
        };
        if (name == "exp") return unary_fn(Op::Exp);
        if (name == "log") return unary_fn(Op::Log);
        if (name == "sin") return unary_fn(Op::Sin);
        if (name == "cos") return unary_fn(Op::Cos);
        if (name == "abs") return unary_fn(Op::Abs);
        if (name == "sqrt") return unary_fn(Op::Sqrt);
        if (name == "pow") return binary_fn(Op::Pow);
        if (name == "min") return binary_fn(Op::Min);
        if (name == "max") return binary_fn(Op::Max);
        if (name == "indicator" || name == "ind") return binary_fn(Op::Indicator);
        fail("unknown identifier '" + name + "'");
    }
};

} // namespace

Expr Expr::parse(const std::string& src) {
    Expr e;
    e.src_ = src;
    e.root_ = Parser(src).parse();
    return e;
}

double Expr::eval(double x) const {
    if (!root_) throw SchemaError("empty expression");
    return root_->eval(x);
}

} // namespace tauber::rules
