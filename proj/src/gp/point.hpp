#pragma once

#include <functional>
#include <optional>

#include "gp/group.hpp"

namespace gp {

/// A point of any of the phase spaces the brackets live on. Unused sectors
/// stay empty:
///   g*            -> x
///   g* x G        -> x, g
///   G x h*        -> g, x (h* coordinates)
///   R^n x R^n x g* -> q, p, x (the charge I)
///   T*R^n x G x h* -> q, p, g, x
struct PhasePoint {
  Vector q;
  Vector p;
  Vector x;
  std::optional<GroupElement> g;
};

using ScalarField = std::function<double(const PhasePoint&)>;

/// (x, g) in g* x G, the image of a covector under (zeta^l, pi).
struct TrivializedCovector {
  Vector x;
  GroupElement g;

  PhasePoint point() const { return PhasePoint{{}, {}, x, g}; }
};

/// (q, p, I) in R^n x R^n x g*.
struct WongState {
  Vector q;
  Vector p;
  Vector I;

  PhasePoint point() const { return PhasePoint{q, p, I, std::nullopt}; }
  static WongState from_point(const PhasePoint& pt) { return WongState{pt.q, pt.p, pt.x}; }
};

}  // namespace gp
