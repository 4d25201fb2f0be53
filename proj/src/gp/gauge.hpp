#pragma once

#include <functional>
#include <string>

#include "gp/point.hpp"
#include "json.hpp"

namespace gp {

/// Derivative stencil for potentials and gauge maps: five-point central
/// difference, error O(h^4).
inline constexpr double kPotentialStep = 1e-3;

enum class PotentialKind { Zero, Constant, UniformB, Hedgehog, Expression, Derived };

/// A = sum A^j_i dq_i (x) X_j on R^n x G. value(q) is the dim x n matrix
/// whose column i is A_q(d/dq_i) in algebra coordinates.
class VectorPotential {
 public:
  using Fn = std::function<Matrix(const Vector&)>;

  VectorPotential(PotentialKind kind, int n_base, int dim, Fn fn);

  static VectorPotential zero(int n_base, int dim);
  static VectorPotential constant(Matrix value);
  /// (-B q2 / 2, B q1 / 2) along algebra direction `axis`; n_base >= 2.
  static VectorPotential uniform_b(double B, int n_base, int dim, int axis = 0);
  /// A^j_i = kappa * eps_jik q_k, for a 3-dimensional algebra on R^3.
  static VectorPotential hedgehog(double kappa, int dim);
  /// entries (j, i, expression in q), 0-based indices.
  static VectorPotential expression(int n_base, int dim, const std::vector<std::tuple<int, int, std::string>>& entries);

  /// {"kind": "zero" | "constant" | "uniform_b" | "hedgehog" | "expression", ...}.
  /// Indices are 1-based; "scale" multiplies the whole potential.
  static VectorPotential from_json(const nlohmann::json& j, int dim);

  PotentialKind kind() const noexcept { return kind_; }
  int n_base() const noexcept { return n_; }
  int dim() const noexcept { return dim_; }
  /// Throws DimensionMismatch on a wrong-length q, NonFiniteValue on blow-up.
  Matrix operator()(const Vector& q) const;
  /// dA/dq_j at q, same layout as operator().
  Matrix derivative(const Vector& q, int j) const;

  VectorPotential scaled(double s) const;

 private:
  PotentialKind kind_;
  int n_;
  int dim_;
  Fn fn_;
};

/// Curvature at a point, stored with half the two-form coefficient:
/// F[i](j,k) = F^i_jk, and the two-form value on (d_j, d_k) is 2 F^i_jk.
struct Curvature {
  std::vector<Matrix> F;

  double operator()(int i, int j, int k) const { return F[i](j, k); }
  /// F^(d_j, d_k) in algebra coordinates.
  Vector two_form(int j, int k) const;
  /// sum_i I_i F^i, an antisymmetric n x n matrix.
  Matrix contract(const Vector& I) const;
  int dim() const noexcept { return static_cast<int>(F.size()); }
};

Curvature curvature(const LieAlgebra& L, const VectorPotential& A, const Vector& q);

/// q -> F_q for a fixed potential.
class CurvatureField {
 public:
  CurvatureField(AlgebraPtr L, VectorPotential A) : L_(std::move(L)), A_(std::move(A)) {}
  Curvature operator()(const Vector& q) const { return curvature(*L_, A_, q); }
  double operator()(const Vector& q, int i, int j, int k) const { return (*this)(q)(i, j, k); }

 private:
  AlgebraPtr L_;
  VectorPotential A_;
};

/// gamma(v + fiber(w)) = w + Ad(g^-1) A_q(v).
Vector connection_eval(const LieAlgebra& L, const VectorPotential& A, const Vector& q, const GroupElement& g,
                       const Vector& v, const Vector& w);

/// q -> s(q) in G.
class GaugeMap {
 public:
  using Fn = std::function<GroupElement(const Vector&)>;
  explicit GaugeMap(Fn fn) : fn_(std::move(fn)) {}

  /// s(q) = exp(sum_a chi_a(q) X_a).
  static GaugeMap exponential(AlgebraPtr L, std::vector<std::string> chi);
  static GaugeMap identity(AlgebraPtr L);
  /// {"kind": "exp", "chi": ["poly in q", ...]} with one entry per basis vector.
  static GaugeMap from_json(AlgebraPtr L, const nlohmann::json& j);

  GroupElement operator()(const Vector& q) const { return fn_(q); }

 private:
  Fn fn_;
};

/// (s* kappa^l + Ad(s^-1) A)_q as a dim x n matrix.
Matrix gauge_transform_potential(const LieAlgebra& L, const VectorPotential& A, const GaugeMap& s, const Vector& q);
/// The transformed potential as a field on the base.
VectorPotential gauge_transformed(AlgebraPtr L, const VectorPotential& A, GaugeMap s);
/// Ad(s(q)^-1) applied to the algebra index of F.
Curvature gauge_transform_curvature(const LieAlgebra& L, const Curvature& F, const GaugeMap& s, const Vector& q);

}  // namespace gp
