#include "kgeom/expr.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace kgeom::expr {

namespace {

NodePtr clone(const Node* n) {
    if (!n) return nullptr;
    auto c = std::make_unique<Node>();
    c->kind = n->kind;
    c->cval = n->cval;
    c->name = n->name;
    c->un = n->un;
    c->bin = n->bin;
    c->offset = n->offset;
    c->lhs = clone(n->lhs.get());
    c->rhs = clone(n->rhs.get());
    return c;
}

struct Parser {
    const std::string& src;
    std::size_t pos = 0;

    explicit Parser(const std::string& s) : src(s) {}

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            std::size_t at = pos;
            if (accept('+'))
                lhs = binary(BinOp::Add, std::move(lhs), parse_term(), at);
            else if (accept('-'))
                lhs = binary(BinOp::Sub, std::move(lhs), parse_term(), at);
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            std::size_t at = pos;
            if (accept('*'))
                lhs = binary(BinOp::Mul, std::move(lhs), parse_unary(), at);
            else if (accept('/'))
                lhs = binary(BinOp::Div, std::move(lhs), parse_unary(), at);
            else
                return lhs;
        }
    }

    NodePtr parse_unary() {
        std::size_t at = pos;
        if (accept('-')) {
            NodePtr inner = parse_unary();
            // fold -const so printed negative literals round-trip
            if (inner->kind == Node::Kind::Const) {
                inner->cval = -inner->cval;
                return inner;
            }
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::Unary;
            n->un = UnOp::Neg;
            n->lhs = std::move(inner);
            n->offset = at;
            return n;
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        std::size_t at = pos;
        if (accept('^')) return binary(BinOp::Pow, std::move(base), parse_unary(), at);
        return base;
    }

    NodePtr parse_primary() {
        char c = peek();
        std::size_t at = pos;
        if (c == '(') {
            ++pos;
            NodePtr e = parse_expr();
            if (!accept(')')) throw ExprError("expected ')'", pos);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src.c_str() + pos;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) throw ExprError("bad number", pos);
            pos += static_cast<std::size_t>(end - begin);
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::Const;
            n->cval = v;
            n->offset = at;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
                id.push_back(src[pos++]);
            if (peek() == '(') {
                ++pos;
                NodePtr arg = parse_expr();
                if (!accept(')')) throw ExprError("expected ')' after call", pos);
                auto n = std::make_unique<Node>();
                n->kind = Node::Kind::Unary;
                n->un = function_op(id, at);
                n->lhs = std::move(arg);
                n->offset = at;
                return n;
            }
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::Var;
            n->name = id;
            n->offset = at;
            return n;
        }
        if (c == '\0') throw ExprError("unexpected end of input", pos);
        throw ExprError(std::string("unexpected character '") + c + "'", pos);
    }

    static UnOp function_op(const std::string& id, std::size_t at) {
        if (id == "sin") return UnOp::Sin;
        if (id == "cos") return UnOp::Cos;
        if (id == "tan") return UnOp::Tan;
        if (id == "exp") return UnOp::Exp;
        if (id == "log") return UnOp::Log;
        if (id == "sqrt") return UnOp::Sqrt;
        if (id == "sinh") return UnOp::Sinh;
        if (id == "cosh") return UnOp::Cosh;
        throw ExprError("unknown function '" + id + "'", at);
    }

    static NodePtr binary(BinOp op, NodePtr l, NodePtr r, std::size_t at) {
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::Binary;
        n->bin = op;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        n->offset = at;
        return n;
    }
};

int precedence(const Node* n) {
    switch (n->kind) {
        case Node::Kind::Const:
            return n->cval < 0 ? 3 : 5;  // negative literal prints with leading '-'
        case Node::Kind::Var:
            return 5;
        case Node::Kind::Unary:
            return n->un == UnOp::Neg ? 3 : 5;  // calls are self-delimiting
        case Node::Kind::Binary:
            switch (n->bin) {
                case BinOp::Add:
                case BinOp::Sub: return 1;
                case BinOp::Mul:
                case BinOp::Div: return 2;
                case BinOp::Pow: return 4;
            }
    }
    return 5;
}

const char* fn_name(UnOp op) {
    switch (op) {
        case UnOp::Neg: return "-";
        case UnOp::Sin: return "sin";
        case UnOp::Cos: return "cos";
        case UnOp::Tan: return "tan";
        case UnOp::Exp: return "exp";
        case UnOp::Log: return "log";
        case UnOp::Sqrt: return "sqrt";
        case UnOp::Sinh: return "sinh";
        case UnOp::Cosh: return "cosh";
    }
    return "?";
}

void print_node(const Node* n, std::string& out, int min_prec) {
    int prec = precedence(n);
    bool parens = prec < min_prec;
    if (parens) out.push_back('(');
    switch (n->kind) {
        case Node::Kind::Const: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n->cval);
            out += buf;
            break;
        }
        case Node::Kind::Var:
            out += n->name;
            break;
        case Node::Kind::Unary:
            if (n->un == UnOp::Neg) {
                out.push_back('-');
                print_node(n->lhs.get(), out, 3);
            } else {
                out += fn_name(n->un);
                out.push_back('(');
                print_node(n->lhs.get(), out, 0);
                out.push_back(')');
            }
            break;
        case Node::Kind::Binary: {
            const char* op = nullptr;
            int lmin = prec, rmin = prec + 1;
            switch (n->bin) {
                case BinOp::Add: op = "+"; break;
                case BinOp::Sub: op = "-"; break;
                case BinOp::Mul: op = "*"; break;
                case BinOp::Div: op = "/"; break;
                case BinOp::Pow:
                    op = "^";
                    lmin = prec + 1;  // right-assoc
                    rmin = 3;         // exponent may be a unary chain
                    break;
            }
            print_node(n->lhs.get(), out, lmin);
            out += op;
            print_node(n->rhs.get(), out, rmin);
            break;
        }
    }
    if (parens) out.push_back(')');
}

bool equal(const Node* a, const Node* b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Node::Kind::Const: return a->cval == b->cval;
        case Node::Kind::Var: return a->name == b->name;
        case Node::Kind::Unary: return a->un == b->un && equal(a->lhs.get(), b->lhs.get());
        case Node::Kind::Binary:
            return a->bin == b->bin && equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
    }
    return false;
}

}  // namespace

Expr::Expr(const Expr& o) : root_(clone(o.root_.get())) {}
Expr& Expr::operator=(const Expr& o) {
    if (this != &o) root_ = clone(o.root_.get());
    return *this;
}

Expr parse(const std::string& src) {
    if (src.empty()) throw ExprError("empty expression", 0);
    Parser p(src);
    NodePtr root = p.parse_expr();
    p.skip_ws();
    if (p.pos != src.size()) throw ExprError("trailing input", p.pos);
    return Expr(std::move(root));
}

std::string to_string(const Expr& e) {
    std::string out;
    if (!e.empty()) print_node(e.root(), out, 0);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) { return equal(a.root(), b.root()); }

double deriv(const Expr& e, const std::string& var, const std::map<std::string, double>& env, int order) {
    if (order == 1) {
        std::map<std::string, D1> denv;
        for (const auto& [k, x] : env) denv.emplace(k, D1{x, k == var ? 1.0 : 0.0});
        return eval(e, denv).d;
    }
    if (order == 2) {
        std::map<std::string, D2> denv;
        for (const auto& [k, x] : env) {
            double s = (k == var) ? 1.0 : 0.0;
            denv.emplace(k, D2{D1{x, s}, D1{s, 0.0}});
        }
        return eval(e, denv).d.d;
    }
    throw Error("deriv: order must be 1 or 2");
}

double fd_deriv(const Expr& e, const std::string& var, const std::map<std::string, double>& env, int order) {
    auto it = env.find(var);
    if (it == env.end()) throw Error("fd_deriv: unbound variable " + var);
    double x = it->second;
    double h = 1e-5 * std::max(1.0, std::fabs(x));
    auto at = [&](double xv) {
        std::map<std::string, double> shifted = env;
        shifted[var] = xv;
        return eval(e, shifted);
    };
    if (order == 1) return (at(x + h) - at(x - h)) / (2.0 * h);
    if (order == 2) return (at(x + h) - 2.0 * at(x) + at(x - h)) / (h * h);
    throw Error("fd_deriv: order must be 1 or 2");
}

}  // namespace kgeom::expr
