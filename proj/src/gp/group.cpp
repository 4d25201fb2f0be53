#include "gp/group.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "gp/errors.hpp"

namespace gp {

namespace {

const LieAlgebra& algebra_of(const GroupElement& g) {
  if (!g.algebra) fail(ErrorCode::InvalidArgument, "group element has no algebra");
  return *g.algebra;
}

void require_same_group(const GroupElement& a, const GroupElement& b) {
  if (a.algebra != b.algebra && (!a.algebra || !b.algebra || a.algebra->name() != b.algebra->name()))
    fail(ErrorCode::DimensionMismatch, "group elements belong to different groups");
  if (a.matrix.rows() != b.matrix.rows()) fail(ErrorCode::DimensionMismatch, "group element sizes differ");
}

}  // namespace

double membership_defect(const GroupElement& g) {
  const auto kind = algebra_of(g).group_kind();
  const CMatrix& m = g.matrix;
  const auto d = m.rows();
  double defect = 0.0;
  switch (kind) {
    case GroupKind::General:
      return 0.0;
    case GroupKind::SpecialOrthogonal:
      defect = std::max(defect, m.imag().cwiseAbs().maxCoeff());
      [[fallthrough]];
    case GroupKind::Unitary:
    case GroupKind::SpecialUnitary:
      defect = std::max(defect, (m.adjoint() * m - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff());
      break;
  }
  if (kind == GroupKind::SpecialUnitary || kind == GroupKind::SpecialOrthogonal)
    defect = std::max(defect, std::abs(m.determinant() - Complex(1.0, 0.0)));
  return defect;
}

GroupElement identity_element(AlgebraPtr L) {
  if (!L->has_matrix_basis()) fail(ErrorCode::NoMatrixBasis, "algebra '" + L->name() + "' has no matrix basis");
  const int d = L->matrix_size();
  return GroupElement{CMatrix::Identity(d, d), std::move(L)};
}

GroupElement make_element(AlgebraPtr L, CMatrix m) {
  if (!L->has_matrix_basis()) fail(ErrorCode::NoMatrixBasis, "algebra '" + L->name() + "' has no matrix basis");
  if (m.rows() != L->matrix_size() || m.cols() != L->matrix_size())
    fail(ErrorCode::DimensionMismatch, "group matrix must be " + std::to_string(L->matrix_size()) + "x" +
                                           std::to_string(L->matrix_size()));
  GroupElement g{std::move(m), std::move(L)};
  const double defect = membership_defect(g);
  if (!(defect <= kMembershipTolerance)) {
    std::ostringstream msg;
    msg << "matrix is not in the group (membership defect " << defect << ")";
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  return g;
}

GroupElement exp(AlgebraPtr L, const Vector& X) {
  CMatrix m = L->to_matrix(X).exp();
  return GroupElement{std::move(m), std::move(L)};
}

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  require_same_group(a, b);
  return GroupElement{a.matrix * b.matrix, a.algebra};
}

GroupElement inverse(const GroupElement& a) { return GroupElement{a.matrix.inverse(), a.algebra}; }

GroupElement renormalize(const GroupElement& g) {
  const auto kind = algebra_of(g).group_kind();
  if (kind == GroupKind::General) return g;
  Eigen::JacobiSVD<CMatrix> svd(g.matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CMatrix u = svd.matrixU() * svd.matrixV().adjoint();
  if (kind == GroupKind::SpecialOrthogonal) u = CMatrix(u.real().cast<Complex>());
  if (kind == GroupKind::SpecialUnitary || kind == GroupKind::SpecialOrthogonal) {
    // remove the residual determinant phase, spread evenly over the diagonal
    const Complex det = u.determinant();
    const double phase = std::arg(det) / static_cast<double>(u.rows());
    u *= std::polar(1.0, -phase);
  }
  return GroupElement{std::move(u), g.algebra};
}

Matrix adjoint_matrix(const LieAlgebra& L, const GroupElement& g) {
  if (!L.has_matrix_basis()) fail(ErrorCode::NoMatrixBasis, "algebra '" + L.name() + "' has no matrix basis");
  if (g.matrix.rows() != L.matrix_size()) fail(ErrorCode::DimensionMismatch, "group element size differs from the basis");
  const CMatrix ginv = g.matrix.inverse();
  Matrix Ad(L.dim(), L.dim());
  for (int i = 0; i < L.dim(); ++i) Ad.col(i) = L.coordinates(g.matrix * L.matrix_basis()[i] * ginv);
  return Ad;
}

Vector coadjoint(const LieAlgebra& L, const GroupElement& g, const Vector& xi) {
  if (xi.size() != L.dim()) fail(ErrorCode::DimensionMismatch, "dual vector length differs from dimension");
  return adjoint_matrix(L, inverse(g)).transpose() * xi;
}

CotangentElement semidirect_multiply(const LieAlgebra& L, const CotangentElement& a, const CotangentElement& b) {
  // Ad*(b^-1) = Ad(b)^T on components
  return CotangentElement{multiply(a.g, b.g), adjoint_matrix(L, b.g).transpose() * a.xi + b.xi};
}

CotangentElement semidirect_inverse(const LieAlgebra& L, const CotangentElement& a) {
  return CotangentElement{inverse(a.g), -coadjoint(L, a.g, a.xi)};
}

TangentElement tangent_group_multiply(const LieAlgebra& L, const TangentElement& a, const TangentElement& b) {
  return TangentElement{a.X + adjoint_matrix(L, a.g) * b.X, multiply(a.g, b.g)};
}

TangentElement tangent_group_inverse(const LieAlgebra& L, const TangentElement& a) {
  const GroupElement ainv = inverse(a.g);
  return TangentElement{-(adjoint_matrix(L, ainv) * a.X), ainv};
}

TangentElement left_tangent_group_multiply(const LieAlgebra& L, const TangentElement& a, const TangentElement& b) {
  return TangentElement{adjoint_matrix(L, inverse(b.g)) * a.X + b.X, multiply(a.g, b.g)};
}

TangentElement left_tangent_group_inverse(const LieAlgebra& L, const TangentElement& a) {
  return TangentElement{-(adjoint_matrix(L, a.g) * a.X), inverse(a.g)};
}

double zeta_r(const LieAlgebra& L, const Vector& x, const GroupElement& g, int i) {
  if (i < 0 || i >= L.dim()) fail(ErrorCode::DimensionMismatch, "basis index out of range");
  return zeta_r(L, x, g)(i);
}

Vector zeta_r(const LieAlgebra& L, const Vector& x, const GroupElement& g) {
  if (x.size() != L.dim()) fail(ErrorCode::DimensionMismatch, "dual vector length differs from dimension");
  return adjoint_matrix(L, g).transpose() * x;
}

GroupElement translate(const GroupElement& g, Side side, const Vector& X, double t) {
  const CMatrix step = (t * algebra_of(g).to_matrix(X)).exp();
  return GroupElement{side == Side::Left ? CMatrix(g.matrix * step) : CMatrix(step * g.matrix), g.algebra};
}

double invariant_derivative_along(Side side, const Vector& X, const GroupFunction& phi, const GroupElement& g,
                                  double h) {
  if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "finite-difference step must be positive");
  const double plus = phi(translate(g, side, X, h));
  const double minus = phi(translate(g, side, X, -h));
  if (!std::isfinite(plus) || !std::isfinite(minus))
    fail(ErrorCode::NonFiniteValue, "group function is not finite near the evaluation point");
  return (plus - minus) / (2.0 * h);
}

double invariant_derivative(const LieAlgebra& L, Side side, int i, const GroupFunction& phi,
                            const GroupElement& g, double h) {
  if (i < 0 || i >= L.dim()) fail(ErrorCode::DimensionMismatch, "basis index out of range");
  return invariant_derivative_along(side, Vector::Unit(L.dim(), i), phi, g, h);
}

}  // namespace gp
