#include "gp/reduce.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "gp/errors.hpp"

namespace gp {

namespace {

std::vector<int> cartan_table(const std::string& name) {
  if (name == "u1") return {0};
  if (name == "su2") return {2};
  if (name == "su3") return {2, 7};
  fail(ErrorCode::UnsupportedAlgebra, "no Cartan data for algebra '" + name + "' (supported: su2, su3, u1)");
}

Matrix ad_matrix(const LieAlgebra& L, int h) {
  const int n = L.dim();
  Matrix ad(n, n);
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < n; ++s) ad(t, s) = L.c(t, h, s);
  return ad;
}

}  // namespace

RootSystemData root_system(AlgebraPtr L) {
  RootSystemData R;
  R.cartan_indices = cartan_table(L->name());
  const int n = L->dim();
  const int k = R.rank();
  for (int h : R.cartan_indices)
    if (h >= n) fail(ErrorCode::UnsupportedAlgebra, "algebra '" + L->name() + "' is not the built-in one");

  const Matrix B = killing_form(*L);
  Matrix Bh(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) Bh(a, b) = B(R.cartan_indices[a], R.cartan_indices[b]);
  if (n == k) {
    // abelian: no roots, the dual form is never paired with one
    R.killing_dual = Matrix::Identity(k, k);
  } else {
    R.killing_dual = -Bh.inverse();
  }

  std::vector<Matrix> ad;
  Matrix T = Matrix::Zero(n, n);
  for (int j = 0; j < k; ++j) {
    ad.push_back(ad_matrix(*L, R.cartan_indices[j]));
    T += ad.back() / (j + std::sqrt(2.0));
  }
  Eigen::EigenSolver<Matrix> es(T);
  const double scale = std::max(1.0, T.cwiseAbs().maxCoeff());
  std::vector<std::pair<double, Root>> found;
  for (int e = 0; e < n; ++e) {
    const Complex lambda = es.eigenvalues()(e);
    if (lambda.imag() <= 1e-8 * scale) continue;
    Eigen::VectorXcd E = es.eigenvectors().col(e);
    Eigen::Index big = 0;
    E.cwiseAbs().maxCoeff(&big);
    E *= std::conj(E(big)) / std::abs(E(big));
    Root r;
    r.alpha.resize(k);
    const double nn = E.squaredNorm();
    for (int j = 0; j < k; ++j) r.alpha(j) = (E.adjoint() * ad[j].cast<Complex>() * E)(0, 0).imag() / nn;
    r.U = E.real();
    r.V = E.imag();
    r.norm_sq = r.alpha.dot(R.killing_dual * r.alpha);
    const double minus_b_uu = -r.U.dot(B * r.U);
    if (!(minus_b_uu > 0.0) || !(r.norm_sq > 0.0))
      fail(ErrorCode::UnsupportedAlgebra, "Killing form is not negative definite on a root plane");
    const double s = std::sqrt(1.0 / (r.norm_sq * minus_b_uu));
    r.U *= s;
    r.V *= s;
    found.emplace_back(lambda.imag(), std::move(r));
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [_, r] : found) R.positive_roots.push_back(std::move(r));
  R.algebra = std::move(L);
  if (R.algebra->has_matrix_basis()) R.validation_defect = root_system_defect(R);
  return R;
}

double root_system_defect(const RootSystemData& R) {
  const LieAlgebra& L = *R.algebra;
  if (!L.has_matrix_basis()) fail(ErrorCode::NoMatrixBasis, "root check needs a matrix basis");
  double defect = 0.0;
  for (const auto& r : R.positive_roots) {
    const CMatrix E = L.to_matrix(r.U) + Complex(0.0, 1.0) * L.to_matrix(r.V);
    for (int j = 0; j < R.rank(); ++j) {
      const CMatrix& H = L.matrix_basis()[R.cartan_indices[j]];
      const CMatrix gap = H * E - E * H - Complex(0.0, r.alpha(j)) * E;
      defect = std::max(defect, gap.cwiseAbs().maxCoeff());
    }
  }
  return defect;
}

nlohmann::json to_json(const RootSystemData& R) {
  const auto vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::json roots = nlohmann::json::array();
  for (const auto& r : R.positive_roots)
    roots.push_back({{"alpha", vec(r.alpha)}, {"U", vec(r.U)}, {"V", vec(r.V)}, {"norm_sq", r.norm_sq}});
  std::vector<int> cartan;
  for (int h : R.cartan_indices) cartan.push_back(h + 1);
  std::vector<std::vector<double>> dual;
  for (int a = 0; a < R.killing_dual.rows(); ++a) dual.push_back(vec(R.killing_dual.row(a).transpose()));
  return {{"algebra", R.algebra->name()}, {"rank", R.rank()},           {"cartan_indices", cartan},
          {"positive_roots", roots},      {"killing_dual", dual},       {"validation_defect", R.validation_defect}};
}

MomentumMap::MomentumMap(int dim, std::vector<std::string> components) : dim_(dim), sources_(std::move(components)) {
  if (static_cast<int>(sources_.size()) != dim)
    fail(ErrorCode::DimensionMismatch, "momentum map needs " + std::to_string(dim) + " components");
  for (const auto& s : sources_) {
    Expression e(s);
    if (e.max_q_index() > 0 || e.max_p_index() > 0 || e.uses_group())
      fail(ErrorCode::ConfigParseError, "momentum map component '" + s + "' must be a function of z only");
    if (e.max_x_index() > dim) fail(ErrorCode::DimensionMismatch, "momentum map component '" + s + "' exceeds the dimension");
    if (e.max_x_index() > 0) constant_ = false;
    f_.push_back(std::move(e));
  }
}

MomentumMap MomentumMap::identity(int dim) {
  std::vector<std::string> c;
  for (int i = 1; i <= dim; ++i) c.push_back("z" + std::to_string(i));
  return MomentumMap(dim, c);
}

MomentumMap MomentumMap::constant(const Vector& xi) {
  std::vector<std::string> c;
  for (int i = 0; i < xi.size(); ++i) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, xi(i));
    c.emplace_back(buf, ptr);
  }
  return MomentumMap(static_cast<int>(xi.size()), c);
}

MomentumMap MomentumMap::from_json(const nlohmann::json& j, int dim) {
  try {
    if (j.is_array()) return MomentumMap(dim, j.get<std::vector<std::string>>());
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return identity(dim);
    if (kind == "constant") {
      const auto xi = j.at("xi").get<std::vector<double>>();
      if (static_cast<int>(xi.size()) != dim) fail(ErrorCode::DimensionMismatch, "constant momentum has wrong length");
      return constant(Eigen::Map<const Vector>(xi.data(), dim));
    }
    if (kind == "components") return MomentumMap(dim, j.at("f").get<std::vector<std::string>>());
    fail(ErrorCode::ConfigParseError, "unknown momentum map kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ConfigParseError, std::string("f_spec: ") + e.what());
  }
}

Vector MomentumMap::operator()(const Vector& zr) const {
  if (zr.size() != dim_) fail(ErrorCode::DimensionMismatch, "momentum point has wrong length");
  const PhasePoint pt{{}, {}, zr, std::nullopt};
  Vector out(dim_);
  for (int i = 0; i < dim_; ++i) out(i) = f_[i](pt);
  if (!out.allFinite()) fail(ErrorCode::NonFiniteValue, "momentum map is not finite at the point");
  return out;
}

Matrix MomentumMap::jacobian(const Vector& zr, const DiffOptions& d) const {
  Matrix J(dim_, dim_);
  if (constant_) return Matrix::Zero(dim_, dim_);
  const PhasePoint pt{{}, {}, zr, std::nullopt};
  for (int i = 0; i < dim_; ++i) {
    const ScalarField fi = as_field(f_[i]);
    for (int m = 0; m < dim_; ++m) J(m, i) = apply_frame(FrameField::coordinate(FrameKind::DX, m), fi, pt, d);
  }
  return J;
}

Matrix omega_f_matrix(const LieAlgebra& L, const MomentumMap& f, const Vector& zr, const DiffOptions& d) {
  const int n = L.dim();
  if (f.dim() != n) fail(ErrorCode::DimensionMismatch, "momentum map dimension differs from the algebra");
  const Vector fv = f(zr);
  const Matrix J = f.jacobian(zr, d);
  Matrix W = Matrix::Zero(2 * n, 2 * n);
  W.topLeftCorner(n, n) = -L.contract_upper(fv);
  W.topRightCorner(n, n) = -J.transpose();
  W.bottomLeftCorner(n, n) = J;
  return W;
}

KernelRank kernel_rank(const Matrix& M, double tol) {
  KernelRank out;
  const auto n = M.cols();
  if (n == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const double top = out.singular_values.size() ? out.singular_values(0) : 0.0;
  for (Eigen::Index i = 0; i < out.singular_values.size(); ++i)
    if (top > 0.0 && out.singular_values(i) > tol * top) ++out.rank;
  out.kernel = svd.matrixV().rightCols(n - out.rank);
  return out;
}

int coadjoint_orbit_dim(const LieAlgebra& L, const Vector& xi, double tol) {
  const int n = L.dim();
  Matrix T(n, n);
  for (int i = 0; i < n; ++i) T.col(i) = ad_star(L, Vector::Unit(n, i), xi);
  return kernel_rank(T, tol).rank;
}

double coadjoint_orbit_bracket(const LieAlgebra& L, const ScalarField& f, const ScalarField& g, const Vector& x,
                               double level, const DiffOptions& d) {
  const double c = quadratic_casimir(L, x);
  if (!(std::abs(c - level) <= kOrbitTolerance))
    fail(ErrorCode::OffOrbit, "Casimir value " + std::to_string(c) + " differs from the orbit level " +
                                  std::to_string(level));
  return lie_poisson_bracket(L, f, g, x, d);
}

void check_weyl_chamber(const RootSystemData& R, const Vector& zh) {
  if (zh.size() != R.rank()) fail(ErrorCode::DimensionMismatch, "point of h* must have length " + std::to_string(R.rank()));
  if (!zh.allFinite()) fail(ErrorCode::NonFiniteValue, "point of h* is not finite");
  const double norm = zh.norm();
  for (std::size_t a = 0; a < R.positive_roots.size(); ++a) {
    const double pairing = R.pairing(zh, R.positive_roots[a].alpha);
    if (!(std::abs(pairing) > kWeylWallTolerance * norm))
      fail(ErrorCode::WeylWallSingularity, "point lies on the Weyl wall of positive root " + std::to_string(a + 1) +
                                               " (B*(z, alpha) = " + std::to_string(pairing) + ")");
  }
}

namespace {

double root_coefficient(const RootSystemData& R, const Root& r, const Vector& zh) {
  check_weyl_chamber(R, zh);
  return -r.norm_sq / R.pairing(zh, r.alpha);
}

std::string root_frame_name(bool plus, std::size_t a) {
  return std::string(plus ? "L_+a" : "L_-a") + std::to_string(a + 1);
}

}  // namespace

BivectorSpec cartan_reduced_bivector(const RootSystemData& R) {
  BivectorSpec spec;
  for (int j = 0; j < R.rank(); ++j)
    spec.terms.push_back({FrameField::coordinate(FrameKind::DX, j),
                          FrameField::invariant(FrameKind::Left, R.cartan_indices[j]), Expression("1")});
  for (std::size_t a = 0; a < R.positive_roots.size(); ++a) {
    const Root& r = R.positive_roots[a];
    spec.terms.push_back({FrameField::invariant_along(FrameKind::Left, r.V, root_frame_name(true, a)),
                          FrameField::invariant_along(FrameKind::Left, r.U, root_frame_name(false, a)),
                          CoefficientFn([&R, a](const PhasePoint& pt) {
                            return root_coefficient(R, R.positive_roots[a], pt.x);
                          })});
  }
  return spec;
}

double cartan_reduced_bracket(const RootSystemData& R, const ScalarField& f, const ScalarField& g, const PhasePoint& pt,
                              const DiffOptions& d) {
  if (!pt.g) fail(ErrorCode::UnresolvableFrameField, "the Cartan-reduced bracket needs a group point");
  check_weyl_chamber(R, pt.x);
  return bivector_bracket(cartan_reduced_bivector(R), f, g, pt, d);
}

BivectorSpec gauged_bivector(AlgebraPtr L, VectorPotential A) {
  if (A.dim() != L->dim()) fail(ErrorCode::DimensionMismatch, "potential and algebra dimensions differ");
  const int n = A.n_base();
  const int m = L->dim();
  MatrixBlock block;
  for (int j = 0; j < n; ++j) block.frames.push_back(FrameField::coordinate(FrameKind::DQ, j));
  for (int j = 0; j < n; ++j) block.frames.push_back(FrameField::coordinate(FrameKind::DP, j));
  for (int k = 0; k < m; ++k) block.frames.push_back(FrameField::coordinate(FrameKind::DX, k));
  block.matrix = [L = std::move(L), A = std::move(A), n, m](const PhasePoint& pt) {
    if (pt.x.size() != m) fail(ErrorCode::DimensionMismatch, "charge length differs from the algebra dimension");
    const Vector& I = pt.x;
    const Matrix Aq = A(pt.q);
    const Matrix FI = curvature(*L, A, pt.q).contract(I);
    const Matrix P = L->contract_upper(I);
    Matrix W = Matrix::Zero(2 * n + m, 2 * n + m);
    const auto set = [&W](int a, int b, double v) {
      W(a, b) += v;
      W(b, a) -= v;
    };
    for (int j = 0; j < n; ++j) set(n + j, j, 1.0);
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) set(n + j, n + k, -2.0 * FI(j, k));
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) set(2 * n + a, 2 * n + b, -P(a, b));
    // coefficient of dp_j ^ dI_k: -sum_s (I.c)_{ks} A^s_j
    const Matrix PA = P * Aq;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < m; ++k) set(n + j, 2 * n + k, -PA(k, j));
    return W;
  };
  BivectorSpec spec;
  spec.blocks.push_back(std::move(block));
  return spec;
}

double gauged_bracket(AlgebraPtr L, const VectorPotential& A, const ScalarField& f, const ScalarField& g,
                      const WongState& s, const DiffOptions& d) {
  if (s.q.size() != A.n_base() || s.p.size() != A.n_base())
    fail(ErrorCode::DimensionMismatch, "state base dimension differs from the potential");
  if (s.I.size() != L->dim()) fail(ErrorCode::DimensionMismatch, "charge length differs from the algebra dimension");
  return bivector_bracket(gauged_bivector(std::move(L), A), f, g, s.point(), d);
}

BivectorSpec cartan_gauged_bivector(const RootSystemData& R, VectorPotential A) {
  const AlgebraPtr& L = R.algebra;
  if (A.dim() != L->dim()) fail(ErrorCode::DimensionMismatch, "potential and algebra dimensions differ");
  const int n = A.n_base();
  const int N = L->dim();
  const int k = R.rank();
  MatrixBlock block;
  for (int j = 0; j < n; ++j) block.frames.push_back(FrameField::coordinate(FrameKind::DQ, j));
  for (int j = 0; j < n; ++j) block.frames.push_back(FrameField::coordinate(FrameKind::DP, j));
  for (int a = 0; a < N; ++a) block.frames.push_back(FrameField::invariant(FrameKind::Left, a));
  for (int j = 0; j < k; ++j) block.frames.push_back(FrameField::coordinate(FrameKind::DX, j));
  block.matrix = [&R, A = std::move(A), n, N, k](const PhasePoint& pt) {
    if (!pt.g) fail(ErrorCode::UnresolvableFrameField, "the Cartan-gauged bracket needs a group point");
    const LieAlgebra& L = *R.algebra;
    const Vector& zh = pt.x;
    const Matrix Adinv = adjoint_matrix(L, inverse(*pt.g));
    const Matrix b = Adinv * A(pt.q);
    const Curvature F = curvature(L, A, pt.q);
    // zh paired with the Cartan components of Ad(g^-1) F
    Vector weights = Vector::Zero(N);
    for (int j = 0; j < k; ++j) weights += zh(j) * Adinv.row(R.cartan_indices[j]).transpose();
    const Matrix FI = F.contract(weights);

    const int off_L = 2 * n, off_z = 2 * n + N;
    Matrix W = Matrix::Zero(2 * n + N + k, 2 * n + N + k);
    const auto set = [&W](int a, int c, double v) {
      W(a, c) += v;
      W(c, a) -= v;
    };
    for (int j = 0; j < n; ++j) set(n + j, j, 1.0);
    for (int j = 0; j < n; ++j)
      for (int l = j + 1; l < n; ++l) set(n + j, n + l, -2.0 * FI(j, l));
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < N; ++a) set(n + j, off_L + a, -b(a, j));
    for (int j = 0; j < k; ++j) set(off_z + j, off_L + R.cartan_indices[j], 1.0);
    for (const auto& r : R.positive_roots) {
      const double c = root_coefficient(R, r, zh);
      for (int a = 0; a < N; ++a)
        for (int e = a + 1; e < N; ++e) set(off_L + a, off_L + e, c * (r.V(a) * r.U(e) - r.V(e) * r.U(a)));
    }
    return W;
  };
  BivectorSpec spec;
  spec.blocks.push_back(std::move(block));
  return spec;
}

double cartan_gauged_bracket(const RootSystemData& R, const VectorPotential& A, const ScalarField& f,
                             const ScalarField& g, const PhasePoint& pt, const DiffOptions& d) {
  if (!pt.g) fail(ErrorCode::UnresolvableFrameField, "the Cartan-gauged bracket needs a group point");
  if (pt.q.size() != A.n_base() || pt.p.size() != A.n_base())
    fail(ErrorCode::DimensionMismatch, "point base dimension differs from the potential");
  check_weyl_chamber(R, pt.x);
  return bivector_bracket(cartan_gauged_bivector(R, A), f, g, pt, d);
}

}  // namespace gp
