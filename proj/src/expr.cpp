#include "spps/expr.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace spps {

namespace {

enum Fn {
    fn_sqrt,
    fn_exp,
    fn_log,
    fn_sin,
    fn_cos,
    fn_tan,
    fn_asin,
    fn_acos,
    fn_atan,
    fn_sinh,
    fn_cosh,
    fn_tanh,
    fn_sech,
    fn_csch,
    fn_abs,
    fn_arg,
    fn_conj,
};

const struct {
    const char* name;
    int fn;
} kFuncs[] = {
    {"sqrt", fn_sqrt}, {"exp", fn_exp},   {"log", fn_log},   {"ln", fn_log},
    {"sin", fn_sin},   {"cos", fn_cos},   {"tan", fn_tan},   {"asin", fn_asin},
    {"arcsin", fn_asin}, {"acos", fn_acos}, {"arccos", fn_acos}, {"atan", fn_atan},
    {"arctan", fn_atan}, {"sinh", fn_sinh}, {"cosh", fn_cosh}, {"tanh", fn_tanh},
    {"sech", fn_sech}, {"csch", fn_csch}, {"abs", fn_abs},   {"arg", fn_arg},
    {"conj", fn_conj},
};

struct Token {
    enum Kind { num, imag_num, ident, op, lparen, rparen, end } kind;
    double value = 0.0;
    std::string text;
    char ch = 0;
};

struct Lexer {
    const std::string& s;
    std::size_t pos = 0;

    explicit Lexer(const std::string& str) : s(str) {}

    Token next() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos >= s.size()) return {Token::end};
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* start = s.c_str() + pos;
            char* stop = nullptr;
            double v = std::strtod(start, &stop);
            if (stop == start) throw ExprError("bad numeric literal in '" + s + "'");
            pos += static_cast<std::size_t>(stop - start);
            // "0.3i" is an imaginary literal; "0.3in" would be a malformed
            // identifier and is left for the ident path to reject
            if (pos < s.size() && s[pos] == 'i' &&
                (pos + 1 == s.size() ||
                 !std::isalnum(static_cast<unsigned char>(s[pos + 1])))) {
                ++pos;
                return {Token::imag_num, v};
            }
            return {Token::num, v};
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t p = pos;
            while (p < s.size() && std::isalnum(static_cast<unsigned char>(s[p]))) ++p;
            Token t{Token::ident};
            t.text = s.substr(pos, p - pos);
            pos = p;
            return t;
        }
        if (std::strchr("+-*/^", c)) {
            ++pos;
            Token t{Token::op};
            t.ch = c;
            return t;
        }
        if (c == '(') {
            ++pos;
            return {Token::lparen};
        }
        if (c == ')') {
            ++pos;
            return {Token::rparen};
        }
        throw ExprError(std::string("unexpected character '") + c + "' in '" + s + "'");
    }
};

struct Parser {
    Lexer lex;
    Token cur;

    explicit Parser(const std::string& s) : lex(s) { cur = lex.next(); }

    void advance() { cur = lex.next(); }

    bool accept_op(char c) {
        if (cur.kind == Token::op && cur.ch == c) {
            advance();
            return true;
        }
        return false;
    }

    Expr::Node parse_expr() {
        Expr::Node n = parse_term();
        while (cur.kind == Token::op && (cur.ch == '+' || cur.ch == '-')) {
            char op = cur.ch;
            advance();
            Expr::Node rhs = parse_term();
            Expr::Node parent;
            parent.kind = Expr::Node::binop;
            parent.op = op;
            parent.kids.push_back(std::move(n));
            parent.kids.push_back(std::move(rhs));
            n = std::move(parent);
        }
        return n;
    }

    Expr::Node parse_term() {
        Expr::Node n = parse_unary();
        while (cur.kind == Token::op && (cur.ch == '*' || cur.ch == '/')) {
            char op = cur.ch;
            advance();
            Expr::Node rhs = parse_unary();
            Expr::Node parent;
            parent.kind = Expr::Node::binop;
            parent.op = op;
            parent.kids.push_back(std::move(n));
            parent.kids.push_back(std::move(rhs));
            n = std::move(parent);
        }
        return n;
    }

    Expr::Node parse_unary() {
        if (cur.kind == Token::op && (cur.ch == '-' || cur.ch == '+')) {
            char op = cur.ch;
            advance();
            Expr::Node child = parse_unary();
            if (op == '+') return child;
            Expr::Node n;
            n.kind = Expr::Node::unop;
            n.op = '-';
            n.kids.push_back(std::move(child));
            return n;
        }
        return parse_power();
    }

    Expr::Node parse_power() {
        Expr::Node base = parse_atom();
        if (accept_op('^')) {
            Expr::Node expo = parse_unary(); // right associative, binds -2 in x^-2
            Expr::Node n;
            n.kind = Expr::Node::binop;
            n.op = '^';
            n.kids.push_back(std::move(base));
            n.kids.push_back(std::move(expo));
            return n;
        }
        return base;
    }

    Expr::Node parse_atom() {
        if (cur.kind == Token::num) {
            Expr::Node n;
            n.value = cplx(cur.value, 0.0);
            advance();
            return n;
        }
        if (cur.kind == Token::imag_num) {
            Expr::Node n;
            n.value = cplx(0.0, cur.value);
            advance();
            return n;
        }
        if (cur.kind == Token::lparen) {
            advance();
            Expr::Node n = parse_expr();
            if (cur.kind != Token::rparen) throw ExprError("missing ')'");
            advance();
            return n;
        }
        if (cur.kind == Token::ident) {
            std::string name = cur.text;
            advance();
            if (name == "x") {
                Expr::Node n;
                n.kind = Expr::Node::var_x;
                return n;
            }
            if (name == "i") {
                Expr::Node n;
                n.value = cplx(0.0, 1.0);
                return n;
            }
            if (name == "pi") {
                Expr::Node n;
                n.value = cplx(3.14159265358979323846, 0.0);
                return n;
            }
            for (const auto& f : kFuncs) {
                if (name == f.name) {
                    if (cur.kind != Token::lparen) {
                        throw ExprError("function '" + name + "' needs parentheses");
                    }
                    advance();
                    Expr::Node arg = parse_expr();
                    if (cur.kind != Token::rparen) throw ExprError("missing ')'");
                    advance();
                    Expr::Node n;
                    n.kind = Expr::Node::call;
                    n.fn = f.fn;
                    n.kids.push_back(std::move(arg));
                    return n;
                }
            }
            throw ExprError("unknown name '" + name + "'");
        }
        throw ExprError("unexpected token in expression");
    }
};

cplx pow_c(cplx a, cplx b) {
    // integer exponents multiplied out: exact for things like x^2 and keeps
    // negative real bases out of the complex log
    if (b.imag() == 0.0) {
        double br = b.real();
        double r = std::round(br);
        if (br == r && std::abs(r) <= 64.0) {
            long n = static_cast<long>(r);
            bool inv = n < 0;
            if (inv) n = -n;
            cplx acc(1.0, 0.0);
            cplx base = a;
            while (n > 0) {
                if (n & 1) acc *= base;
                base *= base;
                n >>= 1;
            }
            return inv ? cplx(1.0, 0.0) / acc : acc;
        }
    }
    return std::pow(a, b);
}

cplx eval_node(const Expr::Node& n, double x, bool allow_x) {
    switch (n.kind) {
        case Expr::Node::number:
            return n.value;
        case Expr::Node::var_x:
            if (!allow_x) throw ExprError("x not allowed in a constant expression");
            return cplx(x, 0.0);
        case Expr::Node::unop:
            return -eval_node(n.kids[0], x, allow_x);
        case Expr::Node::binop: {
            cplx a = eval_node(n.kids[0], x, allow_x);
            cplx b = eval_node(n.kids[1], x, allow_x);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                case '^': return pow_c(a, b);
            }
            throw ExprError("bad operator");
        }
        case Expr::Node::call: {
            cplx a = eval_node(n.kids[0], x, allow_x);
            switch (n.fn) {
                case fn_sqrt: return std::sqrt(a);
                case fn_exp: return std::exp(a);
                case fn_log: return std::log(a);
                case fn_sin: return std::sin(a);
                case fn_cos: return std::cos(a);
                case fn_tan: return std::tan(a);
                case fn_asin: return std::asin(a);
                case fn_acos: return std::acos(a);
                case fn_atan: return std::atan(a);
                case fn_sinh: return std::sinh(a);
                case fn_cosh: return std::cosh(a);
                case fn_tanh: return std::tanh(a);
                case fn_sech: return 1.0 / std::cosh(a);
                case fn_csch: return 1.0 / std::sinh(a);
                case fn_abs: return cplx(std::abs(a), 0.0);
                case fn_arg: return cplx(std::arg(a), 0.0);
                case fn_conj: return std::conj(a);
            }
            throw ExprError("bad function");
        }
    }
    throw ExprError("bad node");
}

} // namespace

Expr parse_expression(const std::string& text) {
    Parser p(text);
    Expr e;
    e.root = p.parse_expr();
    if (p.cur.kind != Token::end) throw ExprError("trailing input in '" + text + "'");
    e.source = text;
    return e;
}

cplx eval_expression(const Expr& e, double x) { return eval_node(e.root, x, true); }

SampledFunction eval_on_nodes(const Expr& e, const Grid& g) {
    SampledFunction out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = eval_node(e.root, g.nodes[i], true);
    return out;
}

cplx eval_constant(const Expr& e) { return eval_node(e.root, 0.0, false); }

} // namespace spps
