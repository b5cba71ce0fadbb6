#include <flatdual/expr.hpp>
#include <flatdual/functions.hpp>

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

namespace flatdual::expr {

namespace {

struct FunctionInfo {
    std::string_view name;
    int arity;
};

constexpr std::array<FunctionInfo, 19> catalogue{{
    {"sin", 1},   {"cos", 1},   {"tan", 1},   {"exp", 1},   {"log", 1},   {"sqrt", 1},  {"asin", 1},
    {"acos", 1},  {"atan", 1},  {"sinh", 1},  {"cosh", 1},  {"tanh", 1},  {"asinh", 1}, {"acosh", 1},
    {"atanh", 1}, {"inv", 1},   {"absx", 1},  {"conjg", 1}, {"atan2", 2},
}};

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class TokenKind { number, identifier, symbol, end };

struct Token {
    TokenKind kind;
    std::size_t offset;
    std::string_view text;
    double number = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
        const std::size_t start = pos_;
        if (pos_ == src_.size()) {
            return {TokenKind::end, start, {}};
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && digit_at(pos_ + 1))) {
            return lex_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size()
                   && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
            return {TokenKind::identifier, start, src_.substr(start, pos_ - start)};
        }
        if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
            ++pos_;
            return {TokenKind::symbol, start, src_.substr(start, 1)};
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", start);
    }

private:
    bool digit_at(std::size_t i) const
    {
        return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
    }

    Token lex_number()
    {
        const std::size_t start = pos_;
        while (digit_at(pos_)) {
            ++pos_;
        }
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (digit_at(pos_)) {
                ++pos_;
            }
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) {
                ++p;
            }
            if (digit_at(p)) {
                pos_ = p;
                while (digit_at(pos_)) {
                    ++pos_;
                }
            }
        }
        const std::string_view text = src_.substr(start, pos_ - start);
        Token tok{TokenKind::number, start, text};
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), tok.number);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw SyntaxError("malformed number '" + std::string(text) + "'", start);
        }
        return tok;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) { advance(); }

    NodePtr parse_all()
    {
        NodePtr e = parse_expr();
        if (tok_.kind != TokenKind::end) {
            throw SyntaxError("unexpected '" + std::string(tok_.text) + "'", tok_.offset);
        }
        return e;
    }

private:
    void advance() { tok_ = lexer_.next(); }

    bool at_symbol(char c) const { return tok_.kind == TokenKind::symbol && tok_.text[0] == c; }

    void expect_symbol(char c)
    {
        if (!at_symbol(c)) {
            throw SyntaxError(std::string("expected '") + c + "'", tok_.offset);
        }
        advance();
    }

    NodePtr parse_expr()
    {
        NodePtr lhs = parse_term();
        while (at_symbol('+') || at_symbol('-')) {
            const char op = tok_.text[0];
            advance();
            lhs = binary(op, std::move(lhs), parse_term());
        }
        return lhs;
    }

    NodePtr parse_term()
    {
        NodePtr lhs = parse_unary();
        while (at_symbol('*') || at_symbol('/')) {
            const char op = tok_.text[0];
            advance();
            lhs = binary(op, std::move(lhs), parse_unary());
        }
        return lhs;
    }

    NodePtr parse_unary()
    {
        if (at_symbol('-')) {
            advance();
            return unary('-', parse_unary());
        }
        return parse_power();
    }

    NodePtr parse_power()
    {
        NodePtr base = parse_primary();
        if (at_symbol('^')) {
            advance();
            return binary('^', std::move(base), parse_unary());
        }
        return base;
    }

    NodePtr parse_primary()
    {
        switch (tok_.kind) {
        case TokenKind::number: {
            const double v = tok_.number;
            advance();
            return number(v);
        }
        case TokenKind::identifier: return parse_identifier();
        case TokenKind::symbol:
            if (at_symbol('(')) {
                advance();
                NodePtr inner = parse_expr();
                expect_symbol(')');
                return inner;
            }
            throw SyntaxError("unexpected '" + std::string(tok_.text) + "'", tok_.offset);
        case TokenKind::end: break;
        }
        throw SyntaxError("unexpected end of input", tok_.offset);
    }

    NodePtr parse_identifier()
    {
        const Token name = tok_;
        advance();
        if (at_symbol('(')) {
            const int arity = function_arity(name.text);
            if (arity < 0) {
                throw UnknownFunction("unknown function '" + std::string(name.text) + "'", name.offset);
            }
            advance();
            std::vector<NodePtr> args;
            args.push_back(parse_expr());
            while (at_symbol(',')) {
                advance();
                args.push_back(parse_expr());
            }
            expect_symbol(')');
            if (static_cast<int>(args.size()) != arity) {
                throw ArityError(std::string(name.text) + " takes " + std::to_string(arity) + " argument(s), got "
                                     + std::to_string(args.size()),
                                 name.offset);
            }
            return call(std::string(name.text), std::move(args));
        }
        if (name.text == "pi") {
            return number(std::numbers::pi);
        }
        if (name.text == "i") {
            return number({0.0, 1.0});
        }
        return variable(std::string(name.text));
    }

    Lexer lexer_;
    Token tok_{TokenKind::end, 0, {}};
};

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

std::string format_real(double v)
{
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::string format_number(std::complex<double> z)
{
    const double re = z.real();
    const double im = z.imag();
    if (im == 0 && !std::signbit(im) && re >= 0) {
        return format_real(re);
    }
    if (z == std::complex<double>(0, 1)) {
        return "i";
    }
    // Values the parser never produces as one literal print as arithmetic on
    // literals; they evaluate to the same number.
    const auto term = [](double v) {
        return v < 0 || std::signbit(v) ? "(-" + format_real(-v) + ")" : format_real(v);
    };
    if (re == 0 && !std::signbit(re)) {
        return "(" + term(im) + " * i)";
    }
    return "(" + term(re) + " + " + term(im) + " * i)";
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

Dual apply_function(std::string_view name, const std::vector<Dual>& a)
{
    if (name == "sin") return sin(a[0]);
    if (name == "cos") return cos(a[0]);
    if (name == "tan") return tan(a[0]);
    if (name == "exp") return exp(a[0]);
    if (name == "log") return log(a[0]);
    if (name == "sqrt") return sqrt(a[0]);
    if (name == "asin") return asin(a[0]);
    if (name == "acos") return acos(a[0]);
    if (name == "atan") return atan(a[0]);
    if (name == "sinh") return sinh(a[0]);
    if (name == "cosh") return cosh(a[0]);
    if (name == "tanh") return tanh(a[0]);
    if (name == "asinh") return asinh(a[0]);
    if (name == "acosh") return acosh(a[0]);
    if (name == "atanh") return atanh(a[0]);
    if (name == "inv") return inv(a[0]);
    if (name == "absx") return absx(a[0]);
    if (name == "conjg") return conjg(a[0]);
    if (name == "atan2") return atan2(a[0], a[1]);
    // parse() only admits catalogue names; hand-built trees can reach this.
    throw std::invalid_argument("unknown function '" + std::string(name) + "'");
}

class Evaluator {
public:
    Evaluator(const Env& env, int order) : env_(env), order_(order) {}

    Dual operator()(const Number& n) const { return Dual::constant(n.value, order_); }

    Dual operator()(const Variable& v) const
    {
        const auto it = env_.find(v.name);
        if (it == env_.end()) {
            throw UnboundVariable(v.name);
        }
        return it->second;
    }

    Dual operator()(const Unary& u) const { return -eval(*u.operand); }

    Dual operator()(const Binary& b) const
    {
        if (b.op == '^') {
            const Dual base = eval(*b.lhs);
            if (const auto m = integer_literal(*b.rhs)) {
                return *m >= 0 ? pow_int(base, static_cast<int>(*m)) : inv(pow_int(base, static_cast<int>(-*m)));
            }
            return pow(base, eval(*b.rhs));
        }
        const Dual lhs = eval(*b.lhs);
        const Dual rhs = eval(*b.rhs);
        switch (b.op) {
        case '+': return lhs + rhs;
        case '-': return lhs - rhs;
        case '*': return lhs * rhs;
        case '/': return lhs / rhs;
        default: throw std::invalid_argument(std::string("unknown operator '") + b.op + "'");
        }
    }

    Dual operator()(const Call& c) const
    {
        std::vector<Dual> args;
        args.reserve(c.args.size());
        for (const auto& a : c.args) {
            args.push_back(eval(*a));
        }
        const int arity = function_arity(c.function);
        if (arity >= 0 && static_cast<int>(args.size()) != arity) {
            throw std::invalid_argument(c.function + ": wrong number of arguments");
        }
        return apply_function(c.function, args);
    }

    Dual eval(const Node& n) const { return std::visit(*this, n.data); }

private:
    const Env& env_;
    int order_;
};

}  // namespace

NodePtr number(std::complex<double> value) { return std::make_shared<const Node>(Node{Number{value}}); }

NodePtr variable(std::string name) { return std::make_shared<const Node>(Node{Variable{std::move(name)}}); }

NodePtr unary(char op, NodePtr operand) { return std::make_shared<const Node>(Node{Unary{op, std::move(operand)}}); }

NodePtr binary(char op, NodePtr lhs, NodePtr rhs)
{
    return std::make_shared<const Node>(Node{Binary{op, std::move(lhs), std::move(rhs)}});
}

NodePtr call(std::string function, std::vector<NodePtr> args)
{
    return std::make_shared<const Node>(Node{Call{std::move(function), std::move(args)}});
}

int function_arity(std::string_view name)
{
    for (const auto& f : catalogue) {
        if (f.name == name) {
            return f.arity;
        }
    }
    return -1;
}

bool operator==(const Node& a, const Node& b)
{
    if (a.data.index() != b.data.index()) {
        return false;
    }
    return std::visit(
        [&b](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(b.data);
            if constexpr (std::is_same_v<T, Number>) {
                return lhs.value == rhs.value;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return lhs.name == rhs.name;
            } else if constexpr (std::is_same_v<T, Unary>) {
                return lhs.op == rhs.op && *lhs.operand == *rhs.operand;
            } else if constexpr (std::is_same_v<T, Binary>) {
                return lhs.op == rhs.op && *lhs.lhs == *rhs.lhs && *lhs.rhs == *rhs.rhs;
            } else {
                if (lhs.function != rhs.function || lhs.args.size() != rhs.args.size()) {
                    return false;
                }
                for (std::size_t i = 0; i < lhs.args.size(); ++i) {
                    if (!(*lhs.args[i] == *rhs.args[i])) {
                        return false;
                    }
                }
                return true;
            }
        },
        a.data);
}

std::string to_string(const Node& node)
{
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Number>) {
                return format_number(n.value);
            } else if constexpr (std::is_same_v<T, Variable>) {
                return n.name;
            } else if constexpr (std::is_same_v<T, Unary>) {
                return std::string("(") + n.op + to_string(*n.operand) + ")";
            } else if constexpr (std::is_same_v<T, Binary>) {
                return "(" + to_string(*n.lhs) + " " + n.op + " " + to_string(*n.rhs) + ")";
            } else {
                std::string s = n.function + "(";
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    s += (i ? ", " : "") + to_string(*n.args[i]);
                }
                return s + ")";
            }
        },
        node.data);
}

std::set<std::string> free_variables(const Node& node)
{
    std::set<std::string> out;
    const auto collect = [&out](const auto& self, const Node& n) -> void {
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Variable>) {
                    out.insert(v.name);
                } else if constexpr (std::is_same_v<T, Unary>) {
                    self(self, *v.operand);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    self(self, *v.lhs);
                    self(self, *v.rhs);
                } else if constexpr (std::is_same_v<T, Call>) {
                    for (const auto& a : v.args) {
                        self(self, *a);
                    }
                }
            },
            n.data);
    };
    collect(collect, node);
    return out;
}

std::optional<long> integer_literal(const Node& node)
{
    if (const auto* n = std::get_if<Number>(&node.data)) {
        const double re = n->value.real();
        if (n->value.imag() == 0 && std::isfinite(re) && std::trunc(re) == re && std::abs(re) <= 2147483647.0) {
            return static_cast<long>(re);
        }
        return std::nullopt;
    }
    if (const auto* u = std::get_if<Unary>(&node.data); u && u->op == '-') {
        if (const auto m = integer_literal(*u->operand)) {
            return -*m;
        }
    }
    return std::nullopt;
}

NodePtr parse(std::string_view text) { return Parser(text).parse_all(); }

Dual eval_dual(const Node& node, const Env& env, int order_if_empty)
{
    int order = order_if_empty;
    if (!env.empty()) {
        order = env.begin()->second.order();
        for (const auto& [name, value] : env) {
            if (value.order() != order) {
                throw OrderMismatch(order, value.order());
            }
        }
    }
    return Evaluator(env, order).eval(node);
}

}  // namespace flatdual::expr
