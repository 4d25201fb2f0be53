#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "gp/point.hpp"

namespace gp {

/// Small arithmetic expression over the coordinates of a PhasePoint.
///
/// Grammar: numbers, + - * / ^, parentheses, functions sin cos exp log sqrt,
/// the constant pi, and variables
///   q1.. p1..        base position / momentum
///   x1.. I1.. z1..   the dual-vector sector (g*, charge, h* or zeta^r)
///   re_gRC im_gRC    real / imaginary part of the group matrix entry (R,C)
///   retr imtr        real / imaginary part of tr g
/// Indices are 1-based.
class Expression {
 public:
  struct Node;

  Expression();
  /// Throws ExpressionParseError.
  explicit Expression(std::string_view source);

  double operator()(const PhasePoint& pt) const;
  const std::string& source() const noexcept { return source_; }

  /// Largest 1-based index referenced in each sector (0 when unused).
  int max_q_index() const noexcept { return max_q_; }
  int max_p_index() const noexcept { return max_p_; }
  int max_x_index() const noexcept { return max_x_; }
  bool uses_group() const noexcept { return uses_group_; }

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
  int max_q_ = 0, max_p_ = 0, max_x_ = 0;
  bool uses_group_ = false;
};

/// ScalarField view of an expression.
inline ScalarField as_field(Expression e) {
  return [e = std::move(e)](const PhasePoint& pt) { return e(pt); };
}

}  // namespace gp
