#include "gp/gauge.hpp"

#include <cmath>

#include "gp/errors.hpp"
#include "gp/expression.hpp"

namespace gp {

namespace {

template <class F>
auto five_point(const F& f, const Vector& q, int j) {
  const double h = kPotentialStep * std::max(1.0, std::abs(q(j)));
  Vector x = q;
  const auto at = [&](double t) {
    x(j) = q(j) + t;
    return f(x);
  };
  const auto p2 = at(2 * h), p1 = at(h), m1 = at(-h), m2 = at(-2 * h);
  return decltype(p1)((m2 - p2 + 8.0 * (p1 - m1)) / (12.0 * h));
}

Expression base_expression(const std::string& src, int n) {
  Expression e(src);
  if (e.max_p_index() > 0 || e.max_x_index() > 0 || e.uses_group())
    fail(ErrorCode::ConfigParseError, "'" + src + "' may only use the base coordinates q");
  if (e.max_q_index() > n)
    fail(ErrorCode::DimensionMismatch, "'" + src + "' uses q" + std::to_string(e.max_q_index()) +
                                           " on a base of dimension " + std::to_string(n));
  return e;
}

int json_index(const nlohmann::json& v, int limit, const char* what) {
  if (!v.is_number_integer()) fail(ErrorCode::ConfigParseError, std::string(what) + " index must be an integer");
  const int i = v.get<int>();
  if (i < 1 || i > limit)
    fail(ErrorCode::ConfigParseError, std::string(what) + " index " + std::to_string(i) + " out of range 1.." +
                                          std::to_string(limit));
  return i - 1;
}

}  // namespace

VectorPotential::VectorPotential(PotentialKind kind, int n_base, int dim, Fn fn)
    : kind_(kind), n_(n_base), dim_(dim), fn_(std::move(fn)) {
  if (n_base < 1 || dim < 1) fail(ErrorCode::InvalidArgument, "potential needs positive base and algebra dimensions");
}

VectorPotential VectorPotential::zero(int n_base, int dim) {
  return VectorPotential(PotentialKind::Zero, n_base, dim, [=](const Vector&) { return Matrix::Zero(dim, n_base).eval(); });
}

VectorPotential VectorPotential::constant(Matrix value) {
  const auto dim = static_cast<int>(value.rows());
  const auto n = static_cast<int>(value.cols());
  return VectorPotential(PotentialKind::Constant, n, dim, [value = std::move(value)](const Vector&) { return value; });
}

VectorPotential VectorPotential::uniform_b(double B, int n_base, int dim, int axis) {
  if (n_base < 2) fail(ErrorCode::InvalidArgument, "uniform field needs a base of dimension at least 2");
  if (axis < 0 || axis >= dim) fail(ErrorCode::InvalidArgument, "uniform field axis exceeds the algebra dimension");
  return VectorPotential(PotentialKind::UniformB, n_base, dim, [=](const Vector& q) {
    Matrix A = Matrix::Zero(dim, n_base);
    A(axis, 0) = -0.5 * B * q(1);
    A(axis, 1) = 0.5 * B * q(0);
    return A;
  });
}

VectorPotential VectorPotential::hedgehog(double kappa, int dim) {
  if (dim != 3) fail(ErrorCode::DimensionMismatch, "hedgehog potential needs a 3-dimensional algebra");
  return VectorPotential(PotentialKind::Hedgehog, 3, 3, [=](const Vector& q) {
    Matrix A = Matrix::Zero(3, 3);
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) {
        const int k = 3 - i - j;
        if (i == j || k < 0 || k > 2 || k == i || k == j) continue;
        // eps_jik for a permutation (j, i, k)
        const double eps = ((i - j + 3) % 3 == 1) ? 1.0 : -1.0;
        A(j, i) = kappa * eps * q(k);
      }
    return A;
  });
}

VectorPotential VectorPotential::expression(int n_base, int dim,
                                            const std::vector<std::tuple<int, int, std::string>>& entries) {
  struct Entry {
    int j, i;
    Expression e;
  };
  std::vector<Entry> compiled;
  for (const auto& [j, i, src] : entries) {
    if (j < 0 || j >= dim || i < 0 || i >= n_base) fail(ErrorCode::DimensionMismatch, "potential entry index out of range");
    compiled.push_back({j, i, base_expression(src, n_base)});
  }
  return VectorPotential(PotentialKind::Expression, n_base, dim, [=](const Vector& q) {
    Matrix A = Matrix::Zero(dim, n_base);
    const PhasePoint pt{q, {}, {}, std::nullopt};
    for (const auto& c : compiled) A(c.j, c.i) += c.e(pt);
    return A;
  });
}

VectorPotential VectorPotential::from_json(const nlohmann::json& j, int dim) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    fail(ErrorCode::ConfigParseError, "potential spec needs a string field 'kind'");
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const auto n_or = [&](int fallback) { return j.contains("n") ? j.at("n").get<int>() : fallback; };
    std::optional<VectorPotential> A;
    if (kind == "zero") {
      A = zero(n_or(3), dim);
    } else if (kind == "uniform_b") {
      const int axis = j.contains("axis") ? json_index(j.at("axis"), dim, "axis") : 0;
      A = uniform_b(j.at("B").get<double>(), n_or(2), dim, axis);
    } else if (kind == "hedgehog") {
      A = hedgehog(j.value("kappa", 1.0), dim);
    } else if (kind == "constant" || kind == "expression") {
      if (!j.contains("entries") || !j.at("entries").is_array())
        fail(ErrorCode::ConfigParseError, "potential '" + kind + "' needs an 'entries' array");
      int n = 0;
      if (j.contains("n")) {
        n = j.at("n").get<int>();
      } else {
        for (const auto& e : j.at("entries"))
          if (e.is_array() && e.size() == 3 && e[1].is_number_integer()) n = std::max(n, e[1].get<int>());
        if (kind == "expression")
          for (const auto& e : j.at("entries"))
            if (e.is_array() && e.size() == 3 && e[2].is_string())
              n = std::max(n, Expression(e[2].get<std::string>()).max_q_index());
      }
      if (n < 1) fail(ErrorCode::ConfigParseError, "cannot infer the base dimension; give 'n'");
      std::vector<std::tuple<int, int, std::string>> entries;
      Matrix value = Matrix::Zero(dim, n);
      for (const auto& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 3) fail(ErrorCode::ConfigParseError, "potential entry must be [j, i, value]");
        const int a = json_index(e[0], dim, "algebra");
        const int i = json_index(e[1], n, "base");
        if (kind == "constant")
          value(a, i) += e[2].get<double>();
        else
          entries.emplace_back(a, i, e[2].is_string() ? e[2].get<std::string>() : std::to_string(e[2].get<double>()));
      }
      A = kind == "constant" ? constant(value) : expression(n, dim, entries);
    } else {
      fail(ErrorCode::ConfigParseError, "unknown potential kind '" + kind + "'");
    }
    if (j.contains("scale")) A = A->scaled(j.at("scale").get<double>());
    return *A;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ConfigParseError, std::string("potential spec: ") + e.what());
  }
}

Matrix VectorPotential::operator()(const Vector& q) const {
  if (q.size() != n_)
    fail(ErrorCode::DimensionMismatch, "potential lives on R^" + std::to_string(n_) + ", got a point of R^" +
                                           std::to_string(q.size()));
  Matrix A = fn_(q);
  if (!A.allFinite()) fail(ErrorCode::NonFiniteValue, "potential is not finite at the point");
  return A;
}

Matrix VectorPotential::derivative(const Vector& q, int j) const {
  if (kind_ == PotentialKind::Zero || kind_ == PotentialKind::Constant) return Matrix::Zero(dim_, n_);
  return five_point([this](const Vector& x) { return (*this)(x); }, q, j);
}

VectorPotential VectorPotential::scaled(double s) const {
  return VectorPotential(kind_, n_, dim_, [fn = fn_, s](const Vector& q) { return (s * fn(q)).eval(); });
}

Vector Curvature::two_form(int j, int k) const {
  Vector out(dim());
  for (int i = 0; i < dim(); ++i) out(i) = 2.0 * F[i](j, k);
  return out;
}

Matrix Curvature::contract(const Vector& I) const {
  if (I.size() != dim()) fail(ErrorCode::DimensionMismatch, "charge length differs from the algebra dimension");
  Matrix out = Matrix::Zero(F.empty() ? 0 : F[0].rows(), F.empty() ? 0 : F[0].cols());
  for (int i = 0; i < dim(); ++i) out += I(i) * F[i];
  return out;
}

Curvature curvature(const LieAlgebra& L, const VectorPotential& A, const Vector& q) {
  if (A.dim() != L.dim()) fail(ErrorCode::DimensionMismatch, "potential and algebra dimensions differ");
  const int n = A.n_base();
  const int m = L.dim();
  const Matrix Aq = A(q);
  std::vector<Matrix> dA;
  for (int j = 0; j < n; ++j) dA.push_back(A.derivative(q, j));
  Curvature out{std::vector<Matrix>(m, Matrix::Zero(n, n))};
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      const Vector val = dA[j].col(k) - dA[k].col(j) + bracket_vectors(L, Aq.col(j), Aq.col(k));
      for (int i = 0; i < m; ++i) {
        out.F[i](j, k) = 0.5 * val(i);
        out.F[i](k, j) = -out.F[i](j, k);
      }
    }
  for (const auto& Fi : out.F)
    if (!Fi.allFinite()) fail(ErrorCode::NonFiniteValue, "curvature is not finite at the point");
  return out;
}

Vector connection_eval(const LieAlgebra& L, const VectorPotential& A, const Vector& q, const GroupElement& g,
                       const Vector& v, const Vector& w) {
  if (v.size() != A.n_base()) fail(ErrorCode::DimensionMismatch, "base vector length differs from the base dimension");
  if (w.size() != L.dim()) fail(ErrorCode::DimensionMismatch, "fiber vector length differs from the algebra dimension");
  return w + adjoint_matrix(L, inverse(g)) * (A(q) * v);
}

GaugeMap GaugeMap::exponential(AlgebraPtr L, std::vector<std::string> chi) {
  if (static_cast<int>(chi.size()) != L->dim())
    fail(ErrorCode::DimensionMismatch, "gauge map needs one function per basis vector");
  std::vector<Expression> compiled;
  for (const auto& c : chi) {
    Expression e(c);
    if (e.max_p_index() > 0 || e.max_x_index() > 0 || e.uses_group())
      fail(ErrorCode::ConfigParseError, "'" + c + "' may only use the base coordinates q");
    compiled.push_back(std::move(e));
  }
  return GaugeMap([L = std::move(L), compiled = std::move(compiled)](const Vector& q) {
    const PhasePoint pt{q, {}, {}, std::nullopt};
    Vector X(L->dim());
    for (int a = 0; a < L->dim(); ++a) X(a) = compiled[a](pt);
    return gp::exp(L, X);
  });
}

GaugeMap GaugeMap::identity(AlgebraPtr L) {
  return GaugeMap([L = std::move(L)](const Vector&) { return identity_element(L); });
}

GaugeMap GaugeMap::from_json(AlgebraPtr L, const nlohmann::json& j) {
  try {
    const std::string kind = j.value("kind", std::string("exp"));
    if (kind == "identity") return identity(std::move(L));
    if (kind != "exp") fail(ErrorCode::ConfigParseError, "unknown gauge map kind '" + kind + "'");
    return exponential(std::move(L), j.at("chi").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ConfigParseError, std::string("gauge map spec: ") + e.what());
  }
}

Matrix gauge_transform_potential(const LieAlgebra& L, const VectorPotential& A, const GaugeMap& s, const Vector& q) {
  const int n = A.n_base();
  const GroupElement sq = s(q);
  const GroupElement sinv = inverse(sq);
  Matrix out = adjoint_matrix(L, sinv) * A(q);
  for (int j = 0; j < n; ++j) {
    const CMatrix ds = five_point([&](const Vector& x) { return s(x).matrix; }, q, j);
    if (!ds.allFinite()) fail(ErrorCode::NonFiniteValue, "gauge map is not finite near the point");
    out.col(j) += L.coordinates(sinv.matrix * ds);
  }
  return out;
}

VectorPotential gauge_transformed(AlgebraPtr L, const VectorPotential& A, GaugeMap s) {
  const int n = A.n_base();
  const int dim = A.dim();
  return VectorPotential(PotentialKind::Derived, n, dim, [L = std::move(L), A, s = std::move(s)](const Vector& q) {
    return gauge_transform_potential(*L, A, s, q);
  });
}

Curvature gauge_transform_curvature(const LieAlgebra& L, const Curvature& F, const GaugeMap& s, const Vector& q) {
  const Matrix Ad = adjoint_matrix(L, inverse(s(q)));
  Curvature out{std::vector<Matrix>(F.dim(), Matrix::Zero(F.F[0].rows(), F.F[0].cols()))};
  for (int i = 0; i < F.dim(); ++i)
    for (int l = 0; l < F.dim(); ++l) out.F[i] += Ad(i, l) * F.F[l];
  return out;
}

}  // namespace gp
