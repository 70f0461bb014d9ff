#include "chjb/expression.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "chjb/errors.hpp"

namespace chjb {

namespace {

[[noreturn]] void syntax_error(std::string_view text, std::size_t offset, const std::string& what) {
    throw Error(ErrorKind::Expression,
                "syntax error at byte " + std::to_string(offset) + ": " + what +
                    " in \"" + std::string(text) + "\"");
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

class ExpressionParser {
  public:
    ExpressionParser(std::string_view text, std::string_view variable)
        : text_(text), expr_() {
        expr_.variable_ = std::string(variable);
    }

    Expression run() {
        expr_.root_ = parse_sum();
        skip_space();
        if (pos_ != text_.size()) syntax_error(text_, pos_, "trailing input");
        return std::move(expr_);
    }

  private:
    using Node = Expression::Node;
    using Kind = Expression::Kind;
    using Fn = Expression::Fn;

    int add(Node n) {
        expr_.nodes_.push_back(n);
        return static_cast<int>(expr_.nodes_.size()) - 1;
    }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool consume(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    // sum := product (('+'|'-') product)*
    int parse_sum() {
        int left = parse_product();
        for (;;) {
            char c = peek();
            if (c != '+' && c != '-') return left;
            ++pos_;
            int right = parse_product();
            Node n{Kind::Binary};
            n.op = c;
            n.child[0] = left;
            n.child[1] = right;
            left = add(n);
        }
    }

    // product := unary (('*'|'/') unary)*
    int parse_product() {
        int left = parse_unary();
        for (;;) {
            char c = peek();
            if (c != '*' && c != '/') return left;
            ++pos_;
            int right = parse_unary();
            Node n{Kind::Binary};
            n.op = c;
            n.child[0] = left;
            n.child[1] = right;
            left = add(n);
        }
    }

    // unary := '-' unary | power    (so -x^2 parses as -(x^2))
    int parse_unary() {
        if (peek() == '-') {
            ++pos_;
            int child = parse_unary();
            Node n{Kind::Unary};
            n.op = '-';
            n.child[0] = child;
            return add(n);
        }
        return parse_power();
    }

    // power := primary ('^' unary)?   right associative, exponent may be signed
    int parse_power() {
        int base = parse_primary();
        if (peek() == '^') {
            ++pos_;
            int exponent = parse_unary();
            Node n{Kind::Binary};
            n.op = '^';
            n.child[0] = base;
            n.child[1] = exponent;
            return add(n);
        }
        return base;
    }

    int parse_primary() {
        skip_space();
        if (pos_ >= text_.size()) syntax_error(text_, pos_, "unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            int inner = parse_sum();
            if (!consume(')')) syntax_error(text_, pos_, "expected ')'");
            return inner;
        }
        if ((c >= '0' && c <= '9') || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        syntax_error(text_, pos_, std::string("unexpected character '") + c + "'");
    }

    int parse_number() {
        double value = 0.0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc()) syntax_error(text_, pos_, "bad number literal");
        pos_ += static_cast<std::size_t>(ptr - begin);
        Node n{Kind::Number};
        n.number = value;
        return add(n);
    }

    int parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);
        if (name == expr_.variable_) {
            Node n{Kind::Variable};
            return add(n);
        }
        static constexpr struct {
            const char* name;
            Fn fn;
            int arity;
        } kFns[] = {{"abs", Fn::Abs, 1}, {"sin", Fn::Sin, 1}, {"cos", Fn::Cos, 1},
                    {"exp", Fn::Exp, 1}, {"sqrt", Fn::Sqrt, 1}, {"min", Fn::Min, 2},
                    {"max", Fn::Max, 2}};
        for (const auto& f : kFns) {
            if (name == f.name) {
                if (!consume('(')) syntax_error(text_, pos_, "expected '(' after function name");
                Node n{Kind::Call};
                n.fn = f.fn;
                n.child[0] = parse_sum();
                if (f.arity == 2) {
                    if (!consume(',')) syntax_error(text_, pos_, "expected ',' in 2-argument call");
                    n.child[1] = parse_sum();
                }
                if (!consume(')')) syntax_error(text_, pos_, "expected ')'");
                return add(n);
            }
        }
        syntax_error(text_, start, "unknown identifier \"" + std::string(name) + "\"");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Expression expr_;
};

Expression Expression::parse(std::string_view text, std::string_view variable) {
    return ExpressionParser(text, variable).run();
}

Expression Expression::constant(double value) {
    Expression e;
    Node n{Kind::Number};
    n.number = value;
    e.nodes_.push_back(n);
    e.root_ = 0;
    e.variable_ = "x";
    return e;
}

double Expression::eval(double value) const {
    return eval_node(root_, value);
}

double Expression::eval_node(int index, double value) const {
    const Node& n = nodes_[static_cast<std::size_t>(index)];
    switch (n.kind) {
        case Kind::Number: return n.number;
        case Kind::Variable: return value;
        case Kind::Unary: return -eval_node(n.child[0], value);
        case Kind::Binary: {
            double a = eval_node(n.child[0], value);
            double b = eval_node(n.child[1], value);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/':
                    if (b == 0.0) throw Error(ErrorKind::Expression, "division by zero");
                    return a / b;
                case '^': return std::pow(a, b);
            }
            break;
        }
        case Kind::Call: {
            double a = eval_node(n.child[0], value);
            switch (n.fn) {
                case Fn::Abs: return std::fabs(a);
                case Fn::Sin: return std::sin(a);
                case Fn::Cos: return std::cos(a);
                case Fn::Exp: return std::exp(a);
                case Fn::Sqrt:
                    if (a < 0.0) throw Error(ErrorKind::Expression, "sqrt of negative value");
                    return std::sqrt(a);
                case Fn::Min: return std::fmin(a, eval_node(n.child[1], value));
                case Fn::Max: return std::fmax(a, eval_node(n.child[1], value));
            }
            break;
        }
    }
    throw Error(ErrorKind::Expression, "corrupt expression tree");
}

namespace {
// Precedence levels used when printing: + - (1), * / (2), unary - (3), ^ (4).
int binary_prec(char op) {
    switch (op) {
        case '+':
        case '-': return 1;
        case '*':
        case '/': return 2;
        case '^': return 4;
    }
    return 0;
}
}  // namespace

void Expression::print_node(int index, std::string& out, int parent_prec) const {
    const Node& n = nodes_[static_cast<std::size_t>(index)];
    switch (n.kind) {
        case Kind::Number:
            out += format_number(n.number);
            return;
        case Kind::Variable:
            out += variable_;
            return;
        case Kind::Unary: {
            // unary minus binds below ^, so (-x)^2 needs the parens restored
            bool parens = parent_prec > 3;
            if (parens) out += '(';
            out += '-';
            print_node(n.child[0], out, 3);
            if (parens) out += ')';
            return;
        }
        case Kind::Binary: {
            int prec = binary_prec(n.op);
            bool parens = prec < parent_prec;
            if (parens) out += '(';
            // '^' is right associative; the others are left associative
            if (n.op == '^') {
                print_node(n.child[0], out, prec + 1);
                out += n.op;
                print_node(n.child[1], out, prec);
            } else {
                print_node(n.child[0], out, prec);
                out += ' ';
                out += n.op;
                out += ' ';
                print_node(n.child[1], out, prec + 1);
            }
            if (parens) out += ')';
            return;
        }
        case Kind::Call: {
            static constexpr const char* kNames[] = {"abs", "sin", "cos", "exp", "sqrt", "min", "max"};
            out += kNames[static_cast<int>(n.fn)];
            out += '(';
            print_node(n.child[0], out, 0);
            if (n.fn == Fn::Min || n.fn == Fn::Max) {
                out += ", ";
                print_node(n.child[1], out, 0);
            }
            out += ')';
            return;
        }
    }
}

std::string Expression::to_string() const {
    std::string out;
    print_node(root_, out, 0);
    return out;
}

bool Expression::node_equal(const Expression& other, int a, int b) const {
    const Node& na = nodes_[static_cast<std::size_t>(a)];
    const Node& nb = other.nodes_[static_cast<std::size_t>(b)];
    if (na.kind != nb.kind) return false;
    switch (na.kind) {
        case Kind::Number: return na.number == nb.number;
        case Kind::Variable: return true;
        case Kind::Unary: return node_equal(other, na.child[0], nb.child[0]);
        case Kind::Binary:
            return na.op == nb.op && node_equal(other, na.child[0], nb.child[0]) &&
                   node_equal(other, na.child[1], nb.child[1]);
        case Kind::Call:
            if (na.fn != nb.fn) return false;
            if (!node_equal(other, na.child[0], nb.child[0])) return false;
            if (na.fn == Fn::Min || na.fn == Fn::Max)
                return node_equal(other, na.child[1], nb.child[1]);
            return true;
    }
    return false;
}

bool Expression::operator==(const Expression& other) const {
    return variable_ == other.variable_ && node_equal(other, root_, other.root_);
}

}  // namespace chjb
