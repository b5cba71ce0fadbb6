#pragma once

/// \file
/// A small math-expression language evaluated over flat duals.
///
/// Grammar (whitespace ignored):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := primary ('^' unary)?
///     primary := number | 'pi' | 'i' | name | name '(' args ')' | '(' expr ')'
///     args    := expr (',' expr)*
///
/// '^' binds tighter than unary minus on its base (-x^2 is -(x^2)) and is
/// right associative (2^3^2 is 2^(3^2)); a minus may open an exponent
/// (x^-2). Numbers are decimal with an optional exponent; `i` is the
/// imaginary unit. Implicit multiplication ("2x") is a syntax error.
///
/// Functions: sin cos tan exp log sqrt asin acos atan sinh cosh tanh asinh
/// acosh atanh inv absx conjg (one argument) and atan2 (two).

#include <flatdual/dual.hpp>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace flatdual::expr {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
    std::complex<double> value;
};

struct Variable {
    std::string name;
};

struct Unary {
    char op;  // '-'
    NodePtr operand;
};

struct Binary {
    char op;  // + - * / ^
    NodePtr lhs;
    NodePtr rhs;
};

struct Call {
    std::string function;
    std::vector<NodePtr> args;
};

struct Node {
    std::variant<Number, Variable, Unary, Binary, Call> data;
};

NodePtr number(std::complex<double> value);
NodePtr variable(std::string name);
NodePtr unary(char op, NodePtr operand);
NodePtr binary(char op, NodePtr lhs, NodePtr rhs);
NodePtr call(std::string function, std::vector<NodePtr> args);

/// Structural equality; numbers compare exactly.
bool operator==(const Node& a, const Node& b);

/// Fully parenthesized text that parses back to an identical tree.
std::string to_string(const Node& node);

std::set<std::string> free_variables(const Node& node);

/// Number of arguments a catalogue function takes, or -1 if unknown.
int function_arity(std::string_view name);

/// Base of every parse failure; `offset` is the byte offset into the input.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " at offset " + std::to_string(offset)), offset(offset)
    {}

    std::size_t offset;
};

class SyntaxError : public ParseError {
public:
    using ParseError::ParseError;
};

class UnknownFunction : public ParseError {
public:
    using ParseError::ParseError;
};

class ArityError : public ParseError {
public:
    using ParseError::ParseError;
};

class UnboundVariable : public std::runtime_error {
public:
    explicit UnboundVariable(const std::string& name)
        : std::runtime_error("unbound variable '" + name + "'"), name(name)
    {}

    std::string name;
};

NodePtr parse(std::string_view text);

using Env = std::map<std::string, Dual, std::less<>>;

/// Evaluates over duals. The order is taken from the bindings, which must
/// agree (OrderMismatch otherwise); an empty environment evaluates at
/// `order_if_empty`.
Dual eval_dual(const Node& node, const Env& env, int order_if_empty = 0);

/// Literal integer exponent, if `node` is one (possibly negated).
std::optional<long> integer_literal(const Node& node);

}  // namespace flatdual::expr
