#pragma once

#include "spps/grid.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace spps {

struct ExprError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parsed arithmetic expression in one real variable x over complex scalars.
// Grammar: + - * / ^ (right assoc), unary minus, parentheses, the constants
// i and pi, numeric literals with an optional trailing i (e.g. "0.3i"), and
// the functions sqrt exp log ln sin cos tan asin arcsin acos atan sinh cosh
// tanh sech csch abs arg conj.
struct Expr {
    struct Node {
        enum Kind { number, var_x, binop, unop, call } kind = number;
        cplx value{0.0, 0.0};
        char op = 0;
        int fn = -1;
        std::vector<Node> kids;
    };
    Node root;
    std::string source;
};

Expr parse_expression(const std::string& text);

cplx eval_expression(const Expr& e, double x);

// Evaluates on every grid node.
SampledFunction eval_on_nodes(const Expr& e, const Grid& g);

// Evaluates an expression that must not reference x (boundary-condition
// coefficients and other scalars).
cplx eval_constant(const Expr& e);

} // namespace spps
