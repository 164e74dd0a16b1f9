#pragma once

// Surface syntax for operator polynomials.
//
//   sum     := signed (('+' | '-') signed)*
//   signed  := '-' signed | '+' signed | product
//   product := power (['*'] power)*      juxtaposition is a product
//   power   := atom ['^' INTEGER]
//   atom    := NUMBER | 'S' | 'T' | "S'" | "T'" | 'i' | '(' sum ')'
//
// NUMBER is digits with an optional "/digits" and an optional attached 'i'
// ("3", "1/2", "2i", "1/2i").

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "weakcr/exact.hpp"
#include "weakcr/ncpoly.hpp"

namespace weakcr {

struct OperatorExpr {
  enum class Kind { Number, Generator, Add, Sub, Neg, Mul, Pow };

  Kind kind = Kind::Number;
  GaussRational number;  ///< Number
  Gen gen = Gen::S;      ///< Generator
  int exponent = 0;      ///< Pow
  std::vector<std::shared_ptr<const OperatorExpr>> children;
  int line = 1;
  int column = 1;
};

/// Throws SyntaxError with a 1-based line and column.
OperatorExpr parse_operator_expr(std::string_view text);

/// Exact lowering to the free algebra (no reordering).
NCPoly lower(const OperatorExpr& e);

/// parse + lower.
NCPoly parse_polynomial(std::string_view text);

/// Canonical rendering; parse_polynomial(pretty_print(p)) == p.
std::string pretty_print(const NCPoly& p);

}  // namespace weakcr
