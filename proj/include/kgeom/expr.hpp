#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <string>

#include "kgeom/dual.hpp"
#include "kgeom/linalg.hpp"

// Scalar expression DSL for user-defined immersion components. The grammar
// is closed: constants, identifiers, + - * / ^ (right-assoc), unary minus,
// parentheses, and calls of sin cos tan exp log sqrt sinh cosh. Trees are
// immutable after parse; evaluation is pure.

namespace kgeom::expr {

struct ExprError : Error {
    std::size_t offset;
    ExprError(const std::string& what, std::size_t off)
        : Error(what + " (byte " + std::to_string(off) + ")"), offset(off) {}
};

enum class UnOp { Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh };
enum class BinOp { Add, Sub, Mul, Div, Pow };

struct Node;
using NodePtr = std::unique_ptr<Node>;

struct Node {
    enum class Kind { Const, Var, Unary, Binary } kind;
    double cval = 0.0;     // Const
    std::string name;      // Var
    UnOp un{};             // Unary
    BinOp bin{};           // Binary
    NodePtr lhs, rhs;      // Unary uses lhs only
    std::size_t offset = 0;
};

class Expr {
  public:
    Expr() = default;
    explicit Expr(NodePtr root) : root_(std::move(root)) {}
    Expr(const Expr& o);
    Expr(Expr&&) = default;
    Expr& operator=(const Expr& o);
    Expr& operator=(Expr&&) = default;

    const Node* root() const { return root_.get(); }
    bool empty() const { return !root_; }

  private:
    NodePtr root_;
};

Expr parse(const std::string& src);
std::string to_string(const Expr& e);
bool structurally_equal(const Expr& a, const Expr& b);

namespace detail {

inline long integral_exponent(const Node* n, bool& ok) {
    ok = false;
    if (!n || n->kind != Node::Kind::Const) return 0;
    double r = std::round(n->cval);
    if (std::fabs(n->cval - r) > 0.0 || std::fabs(r) > 1e9) return 0;
    ok = true;
    return static_cast<long>(r);
}

template <class T>
T eval_node(const Node* n, const std::map<std::string, T>& env) {
    switch (n->kind) {
        case Node::Kind::Const:
            return T{n->cval};
        case Node::Kind::Var: {
            auto it = env.find(n->name);
            if (it == env.end()) throw ExprError("unbound variable '" + n->name + "'", n->offset);
            return it->second;
        }
        case Node::Kind::Unary: {
            T x = eval_node(n->lhs.get(), env);
            switch (n->un) {
                case UnOp::Neg: return -x;
                case UnOp::Sin: return sin(x);
                case UnOp::Cos: return cos(x);
                case UnOp::Tan: return tan(x);
                case UnOp::Exp: return exp(x);
                case UnOp::Log:
                    if (!(value(x) > 0.0)) throw ExprError("log of non-positive value", n->offset);
                    return log(x);
                case UnOp::Sqrt:
                    if (value(x) < 0.0) throw ExprError("sqrt of negative value", n->offset);
                    return sqrt(x);
                case UnOp::Sinh: return sinh(x);
                case UnOp::Cosh: return cosh(x);
            }
            throw ExprError("bad unary op", n->offset);
        }
        case Node::Kind::Binary: {
            if (n->bin == BinOp::Pow) {
                bool is_int = false;
                long k = integral_exponent(n->rhs.get(), is_int);
                T a = eval_node(n->lhs.get(), env);
                if (is_int) return powi(a, k);
                T b = eval_node(n->rhs.get(), env);
                if (!(value(a) > 0.0))
                    throw ExprError("non-integer power of non-positive base", n->offset);
                return exp(b * log(a));
            }
            T a = eval_node(n->lhs.get(), env);
            T b = eval_node(n->rhs.get(), env);
            switch (n->bin) {
                case BinOp::Add: return a + b;
                case BinOp::Sub: return a - b;
                case BinOp::Mul: return a * b;
                case BinOp::Div:
                    if (value(b) == 0.0) throw ExprError("division by zero", n->offset);
                    return a / b;
                default: break;
            }
            throw ExprError("bad binary op", n->offset);
        }
    }
    throw ExprError("bad node", 0);
}

}  // namespace detail

template <class T>
T eval(const Expr& e, const std::map<std::string, T>& env) {
    if (e.empty()) throw Error("eval: empty expression");
    return detail::eval_node(e.root(), env);
}

// order 1 via one dual layer, order 2 via nested duals (exact to roundoff).
double deriv(const Expr& e, const std::string& var, const std::map<std::string, double>& env, int order);

// Central-difference cross-check, h = 1e-5 * max(1, |x|).
double fd_deriv(const Expr& e, const std::string& var, const std::map<std::string, double>& env, int order);

}  // namespace kgeom::expr
