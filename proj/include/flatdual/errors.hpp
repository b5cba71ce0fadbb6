#pragma once

#include <stdexcept>
#include <string>

namespace flatdual {

/// Two dual operands with different orders were combined.
class OrderMismatch : public std::invalid_argument {
public:
    OrderMismatch(int lhs, int rhs)
        : std::invalid_argument("dual order mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)),
          lhs_order(lhs), rhs_order(rhs)
    {}

    int lhs_order;
    int rhs_order;
};

class InvalidOrder : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IndexOutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace flatdual
