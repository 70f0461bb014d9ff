#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace chjb {

/// Arithmetic expression in one named variable.
///
/// Grammar: number literals, the variable, unary minus, binary + - * / ^,
/// functions abs, sin, cos, exp, sqrt, min, max, and parentheses.
/// Precedence ^ > unary - > * / > + -, left associative except ^ (right).
/// Division by zero and sqrt of a negative raise an evaluation error;
/// everything else is total on finite inputs.
class Expression {
  public:
    /// Parses text. Only `variable` is accepted as an identifier besides the
    /// function names. Syntax errors report the byte offset.
    static Expression parse(std::string_view text, std::string_view variable);

    /// Convenience for a constant expression.
    static Expression constant(double value);

    double eval(double value) const;

    /// Canonical text form; parse(to_string(), variable()) rebuilds an
    /// identical tree.
    std::string to_string() const;

    const std::string& variable() const { return variable_; }

    bool operator==(const Expression& other) const;
    bool operator!=(const Expression& other) const { return !(*this == other); }

  private:
    enum class Kind : unsigned char { Number, Variable, Unary, Binary, Call };
    enum class Fn : unsigned char { Abs, Sin, Cos, Exp, Sqrt, Min, Max };

    struct Node {
        Kind kind;
        char op = 0;                // for Binary: + - * / ^
        Fn fn = Fn::Abs;            // for Call
        double number = 0.0;        // for Number
        int child[2] = {-1, -1};    // unary uses child[0]
    };

    double eval_node(int index, double value) const;
    void print_node(int index, std::string& out, int parent_prec) const;
    bool node_equal(const Expression& other, int a, int b) const;

    std::vector<Node> nodes_;
    int root_ = -1;
    std::string variable_;

    friend class ExpressionParser;
};

}  // namespace chjb
