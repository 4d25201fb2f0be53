#include "gp/algebra.hpp"

#include <cmath>
#include <sstream>

#include "gp/errors.hpp"

namespace gp {

namespace {

std::optional<Matrix> invert_if_regular(const Matrix& form) {
  if (form.rows() == 0) return std::nullopt;
  Eigen::JacobiSVD<Matrix> svd(form, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double largest = s(0);
  if (largest == 0.0 || s(s.size() - 1) <= 1e-12 * largest) return std::nullopt;
  return Matrix(svd.solve(Matrix::Identity(form.rows(), form.cols())));
}

double real_inner(const CMatrix& a, const CMatrix& b) {
  return (a.adjoint() * b).trace().real();
}

Matrix gram_inverse_of(const std::vector<CMatrix>& basis) {
  const int n = static_cast<int>(basis.size());
  Matrix gram(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) gram(a, b) = real_inner(basis[a], basis[b]);
  auto inv = invert_if_regular(gram);
  if (!inv) fail(ErrorCode::BasisGramSingular, "matrix basis is linearly dependent");
  return *inv;
}

}  // namespace

LieAlgebra::LieAlgebra(std::string name, std::vector<Matrix> c, std::vector<std::string> labels,
                       std::vector<CMatrix> matrix_basis, GroupKind kind,
                       std::optional<Matrix> invariant_form, Validation validation)
    : name_(std::move(name)),
      dim_(static_cast<int>(c.size())),
      c_(std::move(c)),
      labels_(std::move(labels)),
      basis_(std::move(matrix_basis)),
      kind_(kind) {
  if (dim_ <= 0) fail(ErrorCode::DimensionMismatch, "algebra dimension must be positive");
  for (const auto& ck : c_)
    if (ck.rows() != dim_ || ck.cols() != dim_)
      fail(ErrorCode::DimensionMismatch, "structure constant slice is not " +
                                             std::to_string(dim_) + "x" + std::to_string(dim_));
  if (labels_.empty())
    for (int i = 0; i < dim_; ++i) labels_.push_back("X" + std::to_string(i + 1));
  if (static_cast<int>(labels_.size()) != dim_)
    fail(ErrorCode::DimensionMismatch, "label count differs from dimension");
  if (!basis_.empty()) {
    if (static_cast<int>(basis_.size()) != dim_)
      fail(ErrorCode::DimensionMismatch, "matrix basis size differs from dimension");
    const auto d = basis_[0].rows();
    for (const auto& m : basis_)
      if (m.rows() != d || m.cols() != d)
        fail(ErrorCode::DimensionMismatch, "matrix basis elements must share one square shape");
    gram_inverse_ = gram_inverse_of(basis_);
  }

  if (validation != Validation::None) {
    for (int k = 0; k < dim_; ++k)
      for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
          if (c_[k](i, j) != -c_[k](j, i)) {
            std::ostringstream msg;
            msg << "c^" << k + 1 << "_" << i + 1 << j + 1 << " = " << c_[k](i, j) << " but c^"
                << k + 1 << "_" << j + 1 << i + 1 << " = " << c_[k](j, i);
            fail(ErrorCode::AntisymmetryViolation, msg.str());
          }
  }
  if (validation == Validation::Full) {
    const double defect = jacobi_defect(*this);
    if (defect > kStructureTolerance) {
      std::ostringstream msg;
      msg << "max Jacobi defect " << defect << " exceeds " << kStructureTolerance;
      fail(ErrorCode::JacobiViolation, msg.str());
    }
    const double basis_defect = matrix_basis_defect(*this);
    if (basis_defect > kStructureTolerance) {
      std::ostringstream msg;
      msg << "matrix basis commutators differ from c by " << basis_defect;
      fail(ErrorCode::DimensionMismatch, msg.str());
    }
  }

  if (invariant_form) {
    if (invariant_form->rows() != dim_ || invariant_form->cols() != dim_)
      fail(ErrorCode::DimensionMismatch, "invariant form must be dim x dim");
    form_ = *invariant_form;
    form_override_ = true;
  } else {
    form_ = killing_form(*this);
  }
  inverse_form_ = invert_if_regular(form_);
}

Matrix LieAlgebra::contract_upper(const Vector& x) const {
  if (x.size() != dim_) fail(ErrorCode::DimensionMismatch, "dual vector length differs from dimension");
  Matrix P = Matrix::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    if (x(i) != 0.0) P += x(i) * c_[i];
  return P;
}

CMatrix LieAlgebra::to_matrix(const Vector& X) const {
  if (!has_matrix_basis()) fail(ErrorCode::NoMatrixBasis, "algebra '" + name_ + "' has no matrix basis");
  if (X.size() != dim_) fail(ErrorCode::DimensionMismatch, "algebra vector length differs from dimension");
  CMatrix M = CMatrix::Zero(matrix_size(), matrix_size());
  for (int i = 0; i < dim_; ++i) M += X(i) * basis_[i];
  return M;
}

Vector LieAlgebra::coordinates(const CMatrix& M) const {
  if (!has_matrix_basis()) fail(ErrorCode::NoMatrixBasis, "algebra '" + name_ + "' has no matrix basis");
  Vector rhs(dim_);
  for (int a = 0; a < dim_; ++a) rhs(a) = real_inner(basis_[a], M);
  return gram_inverse_ * rhs;
}

std::vector<Matrix> structure_constants_from_basis(const std::vector<CMatrix>& basis) {
  const int n = static_cast<int>(basis.size());
  const Matrix gram_inv = gram_inverse_of(basis);
  std::vector<Matrix> c(n, Matrix::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const CMatrix comm = basis[i] * basis[j] - basis[j] * basis[i];
      Vector rhs(n);
      for (int a = 0; a < n; ++a) rhs(a) = real_inner(basis[a], comm);
      const Vector coeff = gram_inv * rhs;
      for (int k = 0; k < n; ++k) {
        c[k](i, j) = coeff(k);
        c[k](j, i) = -coeff(k);
      }
    }
  return c;
}

namespace {

const Complex I1{0.0, 1.0};

std::vector<CMatrix> su2_basis() {
  CMatrix s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -I1, I1, 0;
  s3 << 1, 0, 0, -1;
  return {0.5 * I1 * s1, 0.5 * I1 * s2, 0.5 * I1 * s3};
}

std::vector<CMatrix> su3_basis() {
  std::vector<CMatrix> lambda(8, CMatrix::Zero(3, 3));
  lambda[0](0, 1) = lambda[0](1, 0) = 1;
  lambda[1](0, 1) = -I1;
  lambda[1](1, 0) = I1;
  lambda[2](0, 0) = 1;
  lambda[2](1, 1) = -1;
  lambda[3](0, 2) = lambda[3](2, 0) = 1;
  lambda[4](0, 2) = -I1;
  lambda[4](2, 0) = I1;
  lambda[5](1, 2) = lambda[5](2, 1) = 1;
  lambda[6](1, 2) = -I1;
  lambda[6](2, 1) = I1;
  const double r3 = 1.0 / std::sqrt(3.0);
  lambda[7](0, 0) = r3;
  lambda[7](1, 1) = r3;
  lambda[7](2, 2) = -2.0 * r3;
  for (auto& m : lambda) m = 0.5 * I1 * m;
  return lambda;
}

std::vector<CMatrix> so3_basis() {
  std::vector<CMatrix> L(3, CMatrix::Zero(3, 3));
  // (L_i)_{jk} = -eps_ijk, so that L_i v = e_i x v
  L[0](1, 2) = -1;
  L[0](2, 1) = 1;
  L[1](0, 2) = 1;
  L[1](2, 0) = -1;
  L[2](0, 1) = -1;
  L[2](1, 0) = 1;
  return L;
}

}  // namespace

AlgebraPtr builtin_algebra(std::string_view name) {
  if (name == "u1") {
    std::vector<CMatrix> basis{CMatrix::Constant(1, 1, I1)};
    return std::make_shared<const LieAlgebra>("u1", std::vector<Matrix>{Matrix::Zero(1, 1)},
                                              std::vector<std::string>{"X1"}, basis, GroupKind::Unitary);
  }
  if (name == "so3") {
    std::vector<Matrix> c(3, Matrix::Zero(3, 3));
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      c[k](i, j) = 1.0;
      c[k](j, i) = -1.0;
    }
    return std::make_shared<const LieAlgebra>("so3", std::move(c), std::vector<std::string>{"e1", "e2", "e3"},
                                              so3_basis(), GroupKind::SpecialOrthogonal);
  }
  if (name == "su2") {
    auto basis = su2_basis();
    auto c = structure_constants_from_basis(basis);
    return std::make_shared<const LieAlgebra>("su2", std::move(c), std::vector<std::string>{"X1", "X2", "X3"},
                                              std::move(basis), GroupKind::SpecialUnitary);
  }
  if (name == "su3") {
    auto basis = su3_basis();
    auto c = structure_constants_from_basis(basis);
    std::vector<std::string> labels;
    for (int i = 1; i <= 8; ++i) labels.push_back("T" + std::to_string(i));
    return std::make_shared<const LieAlgebra>("su3", std::move(c), std::move(labels), std::move(basis),
                                              GroupKind::SpecialUnitary);
  }
  fail(ErrorCode::UnsupportedAlgebra, "no built-in algebra named '" + std::string(name) + "'");
}

AlgebraPtr load_algebra(const nlohmann::json& spec, Validation validation) {
  if (spec.is_string()) return builtin_algebra(spec.get<std::string>());
  try {
    if (!spec.is_object()) fail(ErrorCode::ConfigParseError, "algebra spec must be a name or an object");
    if (spec.contains("builtin")) return builtin_algebra(spec.at("builtin").get<std::string>());
    const int n = spec.at("dim").get<int>();
    if (n <= 0) fail(ErrorCode::DimensionMismatch, "dim must be positive");
    std::vector<Matrix> c(n, Matrix::Zero(n, n));
    std::vector<std::vector<std::vector<bool>>> listed(
        n, std::vector<std::vector<bool>>(n, std::vector<bool>(n, false)));
    for (const auto& entry : spec.at("c")) {
      const auto& idx = entry.at(0);
      const int k = idx.at(0).get<int>() - 1, i = idx.at(1).get<int>() - 1, j = idx.at(2).get<int>() - 1;
      if (k < 0 || i < 0 || j < 0 || k >= n || i >= n || j >= n)
        fail(ErrorCode::DimensionMismatch, "structure constant index out of range 1.." + std::to_string(n));
      const double value = entry.at(1).get<double>();
      c[k](i, j) = value;
      listed[k][i][j] = true;
      if (!listed[k][j][i] && i != j) c[k](j, i) = -value;
    }
    std::optional<Matrix> form;
    if (spec.contains("form")) {
      const auto& rows = spec.at("form");
      Matrix f(n, n);
      if (static_cast<int>(rows.size()) != n) fail(ErrorCode::DimensionMismatch, "form must be dim x dim");
      for (int r = 0; r < n; ++r) {
        if (static_cast<int>(rows.at(r).size()) != n) fail(ErrorCode::DimensionMismatch, "form must be dim x dim");
        for (int s = 0; s < n; ++s) f(r, s) = rows.at(r).at(s).get<double>();
      }
      form = f;
    }
    std::vector<std::string> labels;
    if (spec.contains("labels")) labels = spec.at("labels").get<std::vector<std::string>>();
    const std::string name = spec.value("name", std::string("custom"));
    return std::make_shared<const LieAlgebra>(name, std::move(c), std::move(labels), std::vector<CMatrix>{},
                                              GroupKind::General, form, validation);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ConfigParseError, std::string("malformed algebra spec: ") + e.what());
  }
}

AlgebraPtr load_algebra(std::string_view spec, Validation validation) {
  const auto first = spec.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && spec[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(spec);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::ConfigParseError, std::string("algebra spec is not valid JSON: ") + e.what());
    }
    return load_algebra(j, validation);
  }
  return builtin_algebra(spec);
}

Vector bracket_vectors(const LieAlgebra& L, const Vector& X, const Vector& Y) {
  const int n = L.dim();
  if (X.size() != n || Y.size() != n) fail(ErrorCode::DimensionMismatch, "bracket arguments must have length " + std::to_string(n));
  Vector out(n);
  for (int k = 0; k < n; ++k) out(k) = X.dot(L.c(k) * Y);
  return out;
}

Vector ad_star(const LieAlgebra& L, const Vector& X, const Vector& xi) {
  const int n = L.dim();
  if (X.size() != n || xi.size() != n) fail(ErrorCode::DimensionMismatch, "ad* arguments must have length " + std::to_string(n));
  // (ad*_X xi)_k = sum_{i,j} xi_j c^j_ik X^i
  Vector out = Vector::Zero(n);
  for (int j = 0; j < n; ++j)
    if (xi(j) != 0.0) out += xi(j) * (L.c(j).transpose() * X);
  return out;
}

Matrix killing_form(const LieAlgebra& L) {
  const int n = L.dim();
  // ad(X_i) as a matrix: (ad_i)_{t s} = c^t_is
  std::vector<Matrix> ad(n, Matrix(n, n));
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < n; ++t)
      for (int s = 0; s < n; ++s) ad[i](t, s) = L.c(t, i, s);
  Matrix B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) B(i, j) = B(j, i) = (ad[i] * ad[j]).trace();
  return B;
}

double quadratic_casimir(const LieAlgebra& L, const Vector& xi) {
  if (xi.size() != L.dim()) fail(ErrorCode::DimensionMismatch, "dual vector length differs from dimension");
  if (!L.inverse_form())
    fail(ErrorCode::SingularKillingForm, "invariant form of '" + L.name() + "' is singular");
  return xi.dot(*L.inverse_form() * xi);
}

double jacobi_defect(const LieAlgebra& L) {
  const int n = L.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double sum = 0.0;
          for (int m = 0; m < n; ++m)
            sum += L.c(m, i, j) * L.c(l, m, k) + L.c(m, j, k) * L.c(l, m, i) + L.c(m, k, i) * L.c(l, m, j);
          worst = std::max(worst, std::abs(sum));
        }
  return worst;
}

double antisymmetry_defect(const LieAlgebra& L) {
  double worst = 0.0;
  for (int k = 0; k < L.dim(); ++k) worst = std::max(worst, (L.c(k) + L.c(k).transpose()).cwiseAbs().maxCoeff());
  return worst;
}

double matrix_basis_defect(const LieAlgebra& L) {
  if (!L.has_matrix_basis()) return 0.0;
  const auto recovered = structure_constants_from_basis(L.matrix_basis());
  double worst = 0.0;
  for (int k = 0; k < L.dim(); ++k) worst = std::max(worst, (recovered[k] - L.c(k)).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace gp
