#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "invmet/types.hpp"

namespace invmet {

/// Syntax error in a defining-function expression; column is 1-based.
class ExprError : public std::runtime_error {
 public:
  ExprError(const std::string& msg, int column)
      : std::runtime_error(msg), column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

/// A compiled real-valued expression in the coordinates z1..zn.
///
/// Grammar (whitespace ignored):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := ('-' | '+') unary | power
///     power   := atom ('^' unary)?
///     atom    := number | 'i' | 'pi' | zK | xK | yK
///              | func '(' expr ')' | '(' expr ')' | '|' expr '|'
///     func    := re | im | conj | abs | sqrt | exp | log
///
/// zK is the K-th complex coordinate (1-based), xK/yK its real and imaginary
/// parts, |e| the modulus. Evaluation is complex; the result must be real.
class Expression {
 public:
  /// Parses text; throws ExprError on bad syntax or a coordinate index
  /// outside 1..dim.
  static Expression parse(std::string_view text, int dim);

  double operator()(const CPoint& z) const;
  cplx evaluate(const CPoint& z) const;

  const std::string& source() const { return source_; }
  int dim() const { return dim_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
  int dim_ = 0;
};

}  // namespace invmet
