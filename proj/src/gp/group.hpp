#pragma once

#include <functional>
#include <utility>

#include "gp/algebra.hpp"

namespace gp {

inline constexpr double kMembershipTolerance = 1e-9;
inline constexpr double kGroupStep = 1e-5;

/// A matrix group element tied to the algebra whose exponential produced it.
struct GroupElement {
  CMatrix matrix;
  AlgebraPtr algebra;
};

enum class Side { Left, Right };

using GroupFunction = std::function<double(const GroupElement&)>;

/// ||g*g - 1|| plus |det g - 1| for special groups; 0 for GroupKind::General.
double membership_defect(const GroupElement& g);

GroupElement identity_element(AlgebraPtr L);
/// Wraps a matrix, rejecting it when its membership defect exceeds 1e-9.
GroupElement make_element(AlgebraPtr L, CMatrix m);
/// Matrix exponential of sum_i X^i M_i. Throws NoMatrixBasis.
GroupElement exp(AlgebraPtr L, const Vector& X);

GroupElement multiply(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& a);
/// Nearest group element by polar decomposition. Never called implicitly.
GroupElement renormalize(const GroupElement& g);

/// Columns are the coordinates of g X_i g^-1, i.e. Ad(g) X_i = sum_j A(j,i) X_j.
Matrix adjoint_matrix(const LieAlgebra& L, const GroupElement& g);
/// Ad*(g) xi = xi o Ad(g^-1), in dual-basis components.
Vector coadjoint(const LieAlgebra& L, const GroupElement& g, const Vector& xi);

/// Element of g* x G with the semidirect product
/// (a, xi).(b, eta) = (ab, Ad*(b^-1) xi + eta).
struct CotangentElement {
  GroupElement g;
  Vector xi;
};
CotangentElement semidirect_multiply(const LieAlgebra& L, const CotangentElement& a, const CotangentElement& b);
CotangentElement semidirect_inverse(const LieAlgebra& L, const CotangentElement& a);

/// Element of TG. Right trivialization stores (X, a) with X = kappa^r;
/// left trivialization stores (a, X) with X = kappa^l.
struct TangentElement {
  Vector X;
  GroupElement g;
};
/// (X,a).(Y,b) = (X + Ad(a)Y, ab)
TangentElement tangent_group_multiply(const LieAlgebra& L, const TangentElement& a, const TangentElement& b);
TangentElement tangent_group_inverse(const LieAlgebra& L, const TangentElement& a);
/// (a,X).(b,Y) = (ab, Ad(b^-1)X + Y)
TangentElement left_tangent_group_multiply(const LieAlgebra& L, const TangentElement& a, const TangentElement& b);
TangentElement left_tangent_group_inverse(const LieAlgebra& L, const TangentElement& a);

/// <x, Ad(g) X_i>, the i-th right momentum at the point (x, g) of g* x G.
double zeta_r(const LieAlgebra& L, const Vector& x, const GroupElement& g, int i);
/// All components at once: Ad(g)^T x.
Vector zeta_r(const LieAlgebra& L, const Vector& x, const GroupElement& g);

/// g.exp(tX) for Side::Left (flow of L_X), exp(tX).g for Side::Right.
GroupElement translate(const GroupElement& g, Side side, const Vector& X, double t);

/// Central difference (phi(c(h)) - phi(c(-h))) / 2h along the flow of the
/// left or right invariant field of X.
double invariant_derivative_along(Side side, const Vector& X, const GroupFunction& phi, const GroupElement& g,
                                  double h = kGroupStep);
double invariant_derivative(const LieAlgebra& L, Side side, int i, const GroupFunction& phi,
                            const GroupElement& g, double h = kGroupStep);

}  // namespace gp
