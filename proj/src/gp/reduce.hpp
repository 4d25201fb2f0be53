#pragma once

#include <vector>

#include "gp/gauge.hpp"
#include "gp/poisson.hpp"

namespace gp {

inline constexpr double kWeylWallTolerance = 1e-9;
inline constexpr double kRankTolerance = 1e-9;
inline constexpr double kOrbitTolerance = 1e-8;

/// A positive root with its real root vectors: E_alpha = U + iV satisfies
/// [H, E_alpha] = i alpha(H) E_alpha, normalized so -B(U,U) = 1/B*(alpha,alpha).
struct Root {
  Vector alpha;  // components alpha(H_j)
  Vector U;      // algebra coordinates; spans with V the root plane
  Vector V;
  double norm_sq = 0.0;  // B*(alpha, alpha)
};

struct RootSystemData {
  AlgebraPtr algebra;
  std::vector<int> cartan_indices;  // H_j = X_{cartan_indices[j]}
  std::vector<Root> positive_roots;
  Matrix killing_dual;  // B* on h*, positive definite
  double validation_defect = 0.0;

  int rank() const noexcept { return static_cast<int>(cartan_indices.size()); }
  double pairing(const Vector& a, const Vector& b) const { return a.dot(killing_dual * b); }
};

/// Cartan data of su2, su3 (and the trivial u1), computed from the
/// structure constants. Throws UnsupportedAlgebra otherwise.
RootSystemData root_system(AlgebraPtr L);
/// [H_j, E_alpha] - i alpha_j E_alpha, max entry over roots and j, via the
/// matrix basis.
double root_system_defect(const RootSystemData& R);
nlohmann::json to_json(const RootSystemData& R);

/// Generalized momentum f: g* -> g*, given in zeta^r coordinates z1..zn.
class MomentumMap {
 public:
  /// Throws ConfigParseError when a component uses anything besides z.
  MomentumMap(int dim, std::vector<std::string> components);
  static MomentumMap identity(int dim);
  static MomentumMap constant(const Vector& xi);
  /// ["z1", ...] or {"kind": "identity"} or {"kind": "constant", "xi": [...]}
  static MomentumMap from_json(const nlohmann::json& j, int dim);

  int dim() const noexcept { return dim_; }
  Vector operator()(const Vector& zr) const;
  /// J(m, i) = d f_i / d z_m.
  Matrix jacobian(const Vector& zr, const DiffOptions& d = {}) const;
  bool is_constant() const noexcept { return constant_; }
  const std::vector<std::string>& sources() const noexcept { return sources_; }

 private:
  int dim_;
  std::vector<std::string> sources_;
  std::vector<Expression> f_;
  bool constant_ = true;
};

/// Matrix of omega_f in the frame (L_1..L_n, d/dz_1..d/dz_n):
/// [[C, -J^T], [J, 0]] with C_jk = -sum_i f_i c^i_jk.
Matrix omega_f_matrix(const LieAlgebra& L, const MomentumMap& f, const Vector& zr, const DiffOptions& d = {});

struct KernelRank {
  int rank = 0;
  Matrix kernel;  // orthonormal columns
  Vector singular_values;
};
/// Singular values <= tol * largest count as zero.
KernelRank kernel_rank(const Matrix& M, double tol = kRankTolerance);
/// dim of the coadjoint orbit through xi: rank of X -> ad*_X xi.
int coadjoint_orbit_dim(const LieAlgebra& L, const Vector& xi, double tol = kRankTolerance);

/// Lie-Poisson bracket restricted to the Casimir level set.
/// Throws OffOrbit, SingularKillingForm.
double coadjoint_orbit_bracket(const LieAlgebra& L, const ScalarField& f, const ScalarField& g, const Vector& x,
                               double level, const DiffOptions& d = {});

/// Throws WeylWallSingularity when zh lies on (or within 1e-9 relative of) a wall.
void check_weyl_chamber(const RootSystemData& R, const Vector& zh);

/// On G x h* (point: g, x = zh):
/// sum_j dz_j ^ L_{H_j} - sum_{alpha>0} B*(alpha,alpha)/B*(zh,alpha) L_{V_alpha} ^ L_{U_alpha}.
BivectorSpec cartan_reduced_bivector(const RootSystemData& R);
double cartan_reduced_bracket(const RootSystemData& R, const ScalarField& f, const ScalarField& g, const PhasePoint& pt,
                              const DiffOptions& d = {});

/// On R^n x R^n x g* (point: q, p, x = I):
/// sum dp_j ^ dq_j - 1/2 sum I_i c^i_jk dI_j ^ dI_k - sum I_i F^i_jk dp_j ^ dp_k
/// - sum I_i c^i_ks A^s_j dp_j ^ dI_k.
BivectorSpec gauged_bivector(AlgebraPtr L, VectorPotential A);
double gauged_bracket(AlgebraPtr L, const VectorPotential& A, const ScalarField& f, const ScalarField& g,
                      const WongState& s, const DiffOptions& d = {});

/// On T*R^n x G x h* (point: q, p, g, x = zh): the Cartan-reduced structure
/// coupled to the connection, with the dp ^ dp term built from
/// Ad(g^-1) F paired with zh and dp ^ L terms from Ad(g^-1) A.
BivectorSpec cartan_gauged_bivector(const RootSystemData& R, VectorPotential A);
double cartan_gauged_bracket(const RootSystemData& R, const VectorPotential& A, const ScalarField& f,
                             const ScalarField& g, const PhasePoint& pt, const DiffOptions& d = {});

}  // namespace gp
