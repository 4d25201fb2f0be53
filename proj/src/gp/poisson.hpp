#pragma once

#include <string>
#include <variant>
#include <vector>

#include "gp/expression.hpp"
#include "json.hpp"

namespace gp {

/// Finite-difference steps. Coordinate partials use rel_step * max(1, |coord|);
/// invariant derivatives on G use group_step as the flow time.
struct DiffOptions {
  double rel_step = 1e-5;
  double group_step = 1e-5;
};

/// Steps for derivatives of brackets (Jacobiator and friends).
inline constexpr DiffOptions kNestedDiff{1e-4, 1e-4};

enum class FrameKind { DQ, DP, DX, Left, Right };

/// A named vector field acting on scalar fields: a coordinate partial
/// (dq_j, dp_j, dx_j with aliases dI_j, dz_j, Z_j) or an invariant field on
/// G (L_i, R_i), optionally along an arbitrary algebra direction.
struct FrameField {
  FrameKind kind = FrameKind::DX;
  int index = 0;     // 0-based
  Vector direction;  // for Left/Right: overrides the basis vector `index` when non-empty
  std::string name;

  static FrameField coordinate(FrameKind kind, int index);
  static FrameField invariant(FrameKind kind, int index);
  static FrameField invariant_along(FrameKind kind, Vector direction, std::string name);
  /// Parses the 1-based names above. Throws UnresolvableFrameField.
  static FrameField parse(std::string_view name);
};

/// (A f)(pt) for a frame field A. Throws UnresolvableFrameField when the
/// point lacks the sector the field acts on, NonFiniteValue on blow-up.
double apply_frame(const FrameField& A, const ScalarField& f, const PhasePoint& pt, const DiffOptions& d = {});

using CoefficientFn = std::function<double(const PhasePoint&)>;
using Coefficient = std::variant<Expression, CoefficientFn>;

/// coeff * (a ^ b)
struct WedgeTerm {
  FrameField a;
  FrameField b;
  Coefficient coeff;
};

/// sum_{a<b} M(pt)_ab frames[a] ^ frames[b], for bivectors whose coefficients
/// share expensive intermediate quantities.
struct MatrixBlock {
  std::vector<FrameField> frames;
  std::function<Matrix(const PhasePoint&)> matrix;
};

/// Bivector field written as a sum of wedges of frame fields.
struct BivectorSpec {
  std::vector<WedgeTerm> terms;
  std::vector<MatrixBlock> blocks;

  /// [{"a": "R_1", "b": "dx_1", "coeff": "-1"}, ...]
  static BivectorSpec from_json(const nlohmann::json& j);
  /// Throws InvalidArgument when a coefficient is not an Expression or
  /// the spec has matrix blocks.
  nlohmann::json to_json() const;
};

/// Polymorphic bracket {f, g}. All engines evaluate Lambda(df, dg) with the
/// wedge convention (A ^ B)(df, dg) = (Af)(Bg) - (Ag)(Bf).
class BracketEngine {
 public:
  virtual ~BracketEngine() = default;
  virtual double bracket(const ScalarField& f, const ScalarField& g, const PhasePoint& pt,
                         const DiffOptions& d = {}) const = 0;
  virtual std::string name() const = 0;
};

/// {f,g}(x) = -sum x^i c^i_jk df/dx^j dg/dx^k on g*.
double lie_poisson_bracket(const LieAlgebra& L, const ScalarField& f, const ScalarField& g, const Vector& x,
                           const DiffOptions& d = {});

/// Canonical bracket of g* x G transported from T*G by (zeta^l, pi):
/// {f,g} = -sum (R_i f) dg/dx^i + sum (R_i g) df/dx^i - sum x^i c^i_jk df/dx^j dg/dx^k.
double tstar_g_bracket(const LieAlgebra& L, const ScalarField& f, const ScalarField& g, const TrivializedCovector& pt,
                       const DiffOptions& d = {});

double bivector_bracket(const BivectorSpec& spec, const ScalarField& f, const ScalarField& g, const PhasePoint& pt,
                        const DiffOptions& d = {});

/// -sum R_i ^ dx_i - 1/2 sum x^i c^i_jk dx_j ^ dx_k, the T*G structure as a
/// bivector on g* x G.
BivectorSpec tstar_g_bivector(const LieAlgebra& L);
/// sum_j dp_j ^ dq_j on R^n x R^n.
BivectorSpec canonical_bivector(int n);

class LiePoissonEngine final : public BracketEngine {
 public:
  explicit LiePoissonEngine(AlgebraPtr L) : L_(std::move(L)) {}
  double bracket(const ScalarField& f, const ScalarField& g, const PhasePoint& pt, const DiffOptions& d) const override;
  std::string name() const override { return "lie_poisson"; }

 private:
  AlgebraPtr L_;
};

class TStarGEngine final : public BracketEngine {
 public:
  explicit TStarGEngine(AlgebraPtr L) : L_(std::move(L)) {}
  double bracket(const ScalarField& f, const ScalarField& g, const PhasePoint& pt, const DiffOptions& d) const override;
  std::string name() const override { return "tstar_g"; }

 private:
  AlgebraPtr L_;
};

class BivectorEngine : public BracketEngine {
 public:
  explicit BivectorEngine(BivectorSpec spec, std::string name = "bivector")
      : spec_(std::move(spec)), name_(std::move(name)) {}
  double bracket(const ScalarField& f, const ScalarField& g, const PhasePoint& pt, const DiffOptions& d) const override;
  std::string name() const override { return name_; }
  const BivectorSpec& spec() const noexcept { return spec_; }

 private:
  BivectorSpec spec_;
  std::string name_;
};

/// X_H = Lambda(dH, .): component a is {H, coords[a]}. With Lambda = dp ^ dq
/// this gives dq/dt = dH/dp.
Vector hamiltonian_vector_field(const BracketEngine& engine, const ScalarField& H, const PhasePoint& pt,
                                const std::vector<ScalarField>& coords, const DiffOptions& d = {});

/// {{f,g},h} + {{g,h},f} + {{h,f},g}; the inner brackets use `inner`, the
/// outer ones `outer`.
double jacobiator(const BracketEngine& engine, const ScalarField& f, const ScalarField& g, const ScalarField& h,
                  const PhasePoint& pt, const DiffOptions& inner = kNestedDiff, const DiffOptions& outer = kNestedDiff);

/// Coordinate functions q_j, p_j, x_j as fields.
ScalarField coordinate_field(FrameKind sector, int index);

}  // namespace gp
