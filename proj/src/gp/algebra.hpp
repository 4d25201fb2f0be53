#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gp/types.hpp"

namespace gp {

/// Which matrix group the exponential of the basis lands in. Used only for
/// membership checks and renormalization.
enum class GroupKind { General, Unitary, SpecialUnitary, SpecialOrthogonal };

enum class Validation {
  Full,              // antisymmetry, Jacobi and matrix-basis consistency
  AntisymmetryOnly,  // Jacobi left to the caller (used by `verify`)
  None,
};

inline constexpr double kStructureTolerance = 1e-10;

/// Finite-dimensional real Lie algebra given by structure constants
/// [X_i, X_j] = sum_k c^k_ij X_k, optionally realized by complex matrices.
///
/// Immutable after construction. Everything downstream takes it by
/// shared_ptr<const LieAlgebra> or const reference.
class LieAlgebra {
 public:
  /// `c[k]` is the n x n matrix (c^k_ij)_{ij}.
  LieAlgebra(std::string name, std::vector<Matrix> c, std::vector<std::string> labels = {},
             std::vector<CMatrix> matrix_basis = {}, GroupKind kind = GroupKind::General,
             std::optional<Matrix> invariant_form = std::nullopt,
             Validation validation = Validation::Full);

  int dim() const noexcept { return dim_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  double c(int k, int i, int j) const { return c_[k](i, j); }
  /// (c^k_ij)_{ij} for fixed k.
  const Matrix& c(int k) const { return c_[k]; }

  /// P_jk = sum_i x_i c^i_jk, the Lie-Poisson tensor at x.
  Matrix contract_upper(const Vector& x) const;

  bool has_matrix_basis() const noexcept { return !basis_.empty(); }
  const std::vector<CMatrix>& matrix_basis() const noexcept { return basis_; }
  int matrix_size() const noexcept { return has_matrix_basis() ? static_cast<int>(basis_[0].rows()) : 0; }
  GroupKind group_kind() const noexcept { return kind_; }

  /// Sum_i X^i M_i. Throws NoMatrixBasis.
  CMatrix to_matrix(const Vector& X) const;
  /// Least-squares coordinates of M in the matrix basis. Throws NoMatrixBasis.
  Vector coordinates(const CMatrix& M) const;

  /// Bilinear form used for the quadratic Casimir: the user override when
  /// given, otherwise the Killing form.
  const Matrix& invariant_form() const noexcept { return form_; }
  bool form_is_override() const noexcept { return form_override_; }
  /// Inverse of invariant_form(), absent when it is singular.
  const std::optional<Matrix>& inverse_form() const noexcept { return inverse_form_; }

 private:
  std::string name_;
  int dim_;
  std::vector<Matrix> c_;
  std::vector<std::string> labels_;
  std::vector<CMatrix> basis_;
  GroupKind kind_;
  Matrix gram_inverse_;
  Matrix form_;
  bool form_override_ = false;
  std::optional<Matrix> inverse_form_;
};

using AlgebraPtr = std::shared_ptr<const LieAlgebra>;

/// Built-in algebras: "u1", "so3", "su2", "su3".
AlgebraPtr builtin_algebra(std::string_view name);

/// Accepts a built-in name or JSON text of the form
/// {"name": str, "dim": int, "c": [[[k,i,j], value], ...], "form": [[...]]}.
/// Indices in the file are 1-based. An entry for (k,i,j) implies the
/// antisymmetric partner (k,j,i) unless that one is listed as well.
AlgebraPtr load_algebra(std::string_view spec, Validation validation = Validation::Full);
AlgebraPtr load_algebra(const nlohmann::json& spec, Validation validation = Validation::Full);

/// Structure constants of the span of `basis`, computed from commutators.
std::vector<Matrix> structure_constants_from_basis(const std::vector<CMatrix>& basis);

Vector bracket_vectors(const LieAlgebra& L, const Vector& X, const Vector& Y);
/// (ad*_X xi)(Y) = xi([X, Y]).
Vector ad_star(const LieAlgebra& L, const Vector& X, const Vector& xi);
/// B_ij = sum_{s,t} c^s_it c^t_js.
Matrix killing_form(const LieAlgebra& L);
/// C(xi) = sum (B^-1)^ij xi_i xi_j. Throws SingularKillingForm.
double quadratic_casimir(const LieAlgebra& L, const Vector& xi);

double jacobi_defect(const LieAlgebra& L);
double antisymmetry_defect(const LieAlgebra& L);
/// Max entrywise gap between c and the constants recovered from the matrix
/// basis; 0 when there is no basis.
double matrix_basis_defect(const LieAlgebra& L);

}  // namespace gp
