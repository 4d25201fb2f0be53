#include "gp/poisson.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include "gp/errors.hpp"

namespace gp {

namespace {

Vector& sector(PhasePoint& pt, FrameKind kind) {
  switch (kind) {
    case FrameKind::DQ: return pt.q;
    case FrameKind::DP: return pt.p;
    default: return pt.x;
  }
}

const Vector& sector(const PhasePoint& pt, FrameKind kind) { return sector(const_cast<PhasePoint&>(pt), kind); }

const char* sector_name(FrameKind kind) {
  switch (kind) {
    case FrameKind::DQ: return "q";
    case FrameKind::DP: return "p";
    case FrameKind::DX: return "x";
    case FrameKind::Left: return "L";
    case FrameKind::Right: return "R";
  }
  return "?";
}

double coordinate_partial(const FrameField& A, const ScalarField& f, const PhasePoint& pt, const DiffOptions& d) {
  const Vector& v = sector(pt, A.kind);
  if (A.index < 0 || A.index >= v.size())
    fail(ErrorCode::UnresolvableFrameField, "frame field " + A.name + " needs " + sector_name(A.kind) +
                                                std::to_string(A.index + 1) + " but the point has " +
                                                std::to_string(v.size()) + " such coordinates");
  const double h = d.rel_step * std::max(1.0, std::abs(v(A.index)));
  PhasePoint work = pt;
  Vector& w = sector(work, A.kind);
  w(A.index) = v(A.index) + h;
  const double plus = f(work);
  w(A.index) = v(A.index) - h;
  const double minus = f(work);
  if (!std::isfinite(plus) || !std::isfinite(minus))
    fail(ErrorCode::NonFiniteValue, "field is not finite near the point along " + A.name);
  return (plus - minus) / (2.0 * h);
}

std::string format_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double coefficient_value(const Coefficient& c, const PhasePoint& pt) {
  return std::visit([&](const auto& e) { return e(pt); }, c);
}

// Caches (Af, Ag) per frame name for one bracket evaluation.
class FrameCache {
 public:
  FrameCache(const ScalarField& f, const ScalarField& g, const PhasePoint& pt, const DiffOptions& d)
      : f_(f), g_(g), pt_(pt), d_(d) {}

  const std::pair<double, double>& operator()(const FrameField& A) {
    auto it = cache_.find(A.name);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(A.name, std::pair{apply_frame(A, f_, pt_, d_), apply_frame(A, g_, pt_, d_)}).first->second;
  }

 private:
  const ScalarField& f_;
  const ScalarField& g_;
  const PhasePoint& pt_;
  const DiffOptions& d_;
  std::map<std::string, std::pair<double, double>> cache_;
};

}  // namespace

FrameField FrameField::coordinate(FrameKind kind, int index) {
  static constexpr const char* prefix[] = {"dq_", "dp_", "dx_"};
  if (kind == FrameKind::Left || kind == FrameKind::Right)
    fail(ErrorCode::InvalidArgument, "coordinate frame field needs a coordinate sector");
  return FrameField{kind, index, {}, prefix[static_cast<int>(kind)] + std::to_string(index + 1)};
}

FrameField FrameField::invariant(FrameKind kind, int index) {
  if (kind != FrameKind::Left && kind != FrameKind::Right)
    fail(ErrorCode::InvalidArgument, "invariant frame field needs side L or R");
  return FrameField{kind, index, {}, std::string(kind == FrameKind::Left ? "L_" : "R_") + std::to_string(index + 1)};
}

FrameField FrameField::invariant_along(FrameKind kind, Vector direction, std::string name) {
  if (kind != FrameKind::Left && kind != FrameKind::Right)
    fail(ErrorCode::InvalidArgument, "invariant frame field needs side L or R");
  return FrameField{kind, 0, std::move(direction), std::move(name)};
}

FrameField FrameField::parse(std::string_view name) {
  const auto us = name.find('_');
  if (us == std::string_view::npos)
    fail(ErrorCode::UnresolvableFrameField, "unknown frame field '" + std::string(name) + "'");
  const std::string_view head = name.substr(0, us);
  const std::string_view digits = name.substr(us + 1);
  int idx = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || idx < 1)
    fail(ErrorCode::UnresolvableFrameField, "bad index in frame field '" + std::string(name) + "'");
  FrameField out;
  if (head == "dq")
    out = coordinate(FrameKind::DQ, idx - 1);
  else if (head == "dp")
    out = coordinate(FrameKind::DP, idx - 1);
  else if (head == "dx" || head == "dI" || head == "dz" || head == "Z")
    out = coordinate(FrameKind::DX, idx - 1);
  else if (head == "L")
    out = invariant(FrameKind::Left, idx - 1);
  else if (head == "R")
    out = invariant(FrameKind::Right, idx - 1);
  else
    fail(ErrorCode::UnresolvableFrameField, "unknown frame field '" + std::string(name) + "'");
  return out;
}

double apply_frame(const FrameField& A, const ScalarField& f, const PhasePoint& pt, const DiffOptions& d) {
  if (A.kind != FrameKind::Left && A.kind != FrameKind::Right) return coordinate_partial(A, f, pt, d);
  if (!pt.g) fail(ErrorCode::UnresolvableFrameField, "frame field " + A.name + " needs a group point");
  const GroupElement& g = *pt.g;
  const int n = g.algebra->dim();
  Vector X;
  if (A.direction.size() > 0) {
    if (A.direction.size() != n) fail(ErrorCode::UnresolvableFrameField, "direction of " + A.name + " has wrong length");
    X = A.direction;
  } else {
    if (A.index < 0 || A.index >= n)
      fail(ErrorCode::UnresolvableFrameField, "frame field " + A.name + " exceeds the algebra dimension");
    X = Vector::Unit(n, A.index);
  }
  PhasePoint work = pt;
  const GroupFunction phi = [&](const GroupElement& h) {
    work.g = h;
    return f(work);
  };
  return invariant_derivative_along(A.kind == FrameKind::Left ? Side::Left : Side::Right, X, phi, g, d.group_step);
}

BivectorSpec BivectorSpec::from_json(const nlohmann::json& j) {
  if (!j.is_array()) fail(ErrorCode::ConfigParseError, "bivector spec must be an array of wedge terms");
  BivectorSpec spec;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("a") || !t.contains("b"))
      fail(ErrorCode::ConfigParseError, "wedge term needs fields a and b");
    std::string coeff = "1";
    if (t.contains("coeff")) {
      const auto& c = t.at("coeff");
      if (c.is_string())
        coeff = c.get<std::string>();
      else if (c.is_number())
        coeff = format_number(c.get<double>());
      else
        fail(ErrorCode::ConfigParseError, "wedge coefficient must be a string or number");
    }
    if (!t.at("a").is_string() || !t.at("b").is_string())
      fail(ErrorCode::ConfigParseError, "frame field names must be strings");
    spec.terms.push_back(WedgeTerm{FrameField::parse(t.at("a").get<std::string>()),
                                   FrameField::parse(t.at("b").get<std::string>()), Expression(coeff)});
  }
  return spec;
}

nlohmann::json BivectorSpec::to_json() const {
  if (!blocks.empty()) fail(ErrorCode::InvalidArgument, "matrix blocks have no JSON form");
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : terms) {
    const auto* e = std::get_if<Expression>(&t.coeff);
    if (!e) fail(ErrorCode::InvalidArgument, "procedural coefficient has no JSON form");
    if (t.a.direction.size() > 0 || t.b.direction.size() > 0)
      fail(ErrorCode::InvalidArgument, "directional frame field has no JSON form");
    out.push_back({{"a", t.a.name}, {"b", t.b.name}, {"coeff", e->source()}});
  }
  return out;
}

namespace {

Vector gradient(const ScalarField& f, const PhasePoint& pt, FrameKind kind, int n, const DiffOptions& d) {
  Vector out(n);
  for (int i = 0; i < n; ++i) out(i) = coordinate_partial(FrameField::coordinate(kind, i), f, pt, d);
  return out;
}

double lie_poisson_part(const LieAlgebra& L, const Vector& x, const Vector& df, const Vector& dg) {
  const int n = L.dim();
  double sum = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      double coeff = 0.0;
      for (int i = 0; i < n; ++i) coeff += x(i) * L.c(i, j, k);
      if (coeff != 0.0) sum -= coeff * (df(j) * dg(k) - dg(j) * df(k));
    }
  return sum;
}

void require_dual(const LieAlgebra& L, const Vector& x) {
  if (x.size() != L.dim()) fail(ErrorCode::DimensionMismatch, "dual vector length differs from dimension");
}

}  // namespace

double lie_poisson_bracket(const LieAlgebra& L, const ScalarField& f, const ScalarField& g, const Vector& x,
                           const DiffOptions& d) {
  require_dual(L, x);
  const PhasePoint pt{{}, {}, x, std::nullopt};
  return lie_poisson_part(L, x, gradient(f, pt, FrameKind::DX, L.dim(), d), gradient(g, pt, FrameKind::DX, L.dim(), d));
}

double tstar_g_bracket(const LieAlgebra& L, const ScalarField& f, const ScalarField& g, const TrivializedCovector& tc,
                       const DiffOptions& d) {
  require_dual(L, tc.x);
  const PhasePoint pt = tc.point();
  const int n = L.dim();
  const Vector df = gradient(f, pt, FrameKind::DX, n, d);
  const Vector dg = gradient(g, pt, FrameKind::DX, n, d);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const FrameField R = FrameField::invariant(FrameKind::Right, i);
    sum -= apply_frame(R, f, pt, d) * dg(i) - apply_frame(R, g, pt, d) * df(i);
  }
  return sum + lie_poisson_part(L, tc.x, df, dg);
}

double bivector_bracket(const BivectorSpec& spec, const ScalarField& f, const ScalarField& g, const PhasePoint& pt,
                        const DiffOptions& d) {
  FrameCache frame(f, g, pt, d);
  double sum = 0.0;
  for (const auto& t : spec.terms) {
    const double c = coefficient_value(t.coeff, pt);
    if (!std::isfinite(c)) fail(ErrorCode::NonFiniteValue, "bivector coefficient is not finite");
    if (c == 0.0) continue;
    const auto [af, ag] = frame(t.a);
    const auto [bf, bg] = frame(t.b);
    sum += c * (af * bg - ag * bf);
  }
  for (const auto& block : spec.blocks) {
    const Matrix M = block.matrix(pt);
    const auto m = static_cast<int>(block.frames.size());
    if (M.rows() != m || M.cols() != m) fail(ErrorCode::DimensionMismatch, "matrix block size differs from its frame list");
    if (!M.allFinite()) fail(ErrorCode::NonFiniteValue, "bivector coefficient is not finite");
    Vector af(m), ag(m);
    for (int a = 0; a < m; ++a) {
      bool used = false;
      for (int b = 0; b < m && !used; ++b) used = M(a, b) != 0.0 || M(b, a) != 0.0;
      if (!used) {
        af(a) = ag(a) = 0.0;
        continue;
      }
      std::tie(af(a), ag(a)) = frame(block.frames[a]);
    }
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b)
        if (M(a, b) != 0.0) sum += M(a, b) * (af(a) * ag(b) - ag(a) * af(b));
  }
  return sum;
}

BivectorSpec tstar_g_bivector(const LieAlgebra& L) {
  const int n = L.dim();
  BivectorSpec spec;
  for (int i = 0; i < n; ++i)
    spec.terms.push_back(
        {FrameField::invariant(FrameKind::Right, i), FrameField::coordinate(FrameKind::DX, i), Expression("-1")});
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      std::string coeff;
      for (int i = 0; i < n; ++i) {
        const double c = L.c(i, j, k);
        if (c == 0.0) continue;
        coeff += (coeff.empty() ? "" : " + ") + format_number(-c) + "*x" + std::to_string(i + 1);
      }
      if (coeff.empty()) continue;
      spec.terms.push_back(
          {FrameField::coordinate(FrameKind::DX, j), FrameField::coordinate(FrameKind::DX, k), Expression(coeff)});
    }
  return spec;
}

BivectorSpec canonical_bivector(int n) {
  BivectorSpec spec;
  for (int j = 0; j < n; ++j)
    spec.terms.push_back(
        {FrameField::coordinate(FrameKind::DP, j), FrameField::coordinate(FrameKind::DQ, j), Expression("1")});
  return spec;
}

double LiePoissonEngine::bracket(const ScalarField& f, const ScalarField& g, const PhasePoint& pt,
                                 const DiffOptions& d) const {
  return lie_poisson_bracket(*L_, f, g, pt.x, d);
}

double TStarGEngine::bracket(const ScalarField& f, const ScalarField& g, const PhasePoint& pt,
                             const DiffOptions& d) const {
  if (!pt.g) fail(ErrorCode::UnresolvableFrameField, "the T*G bracket needs a group point");
  return tstar_g_bracket(*L_, f, g, TrivializedCovector{pt.x, *pt.g}, d);
}

double BivectorEngine::bracket(const ScalarField& f, const ScalarField& g, const PhasePoint& pt,
                               const DiffOptions& d) const {
  return bivector_bracket(spec_, f, g, pt, d);
}

Vector hamiltonian_vector_field(const BracketEngine& engine, const ScalarField& H, const PhasePoint& pt,
                                const std::vector<ScalarField>& coords, const DiffOptions& d) {
  Vector out(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t a = 0; a < coords.size(); ++a) out(static_cast<Eigen::Index>(a)) = engine.bracket(H, coords[a], pt, d);
  return out;
}

double jacobiator(const BracketEngine& engine, const ScalarField& f, const ScalarField& g, const ScalarField& h,
                  const PhasePoint& pt, const DiffOptions& inner, const DiffOptions& outer) {
  const auto nested = [&](const ScalarField& a, const ScalarField& b, const ScalarField& c) {
    const ScalarField ab = [&](const PhasePoint& p) { return engine.bracket(a, b, p, inner); };
    return engine.bracket(ab, c, pt, outer);
  };
  return nested(f, g, h) + nested(g, h, f) + nested(h, f, g);
}

ScalarField coordinate_field(FrameKind kind, int index) {
  if (kind == FrameKind::Left || kind == FrameKind::Right)
    fail(ErrorCode::InvalidArgument, "coordinate fields exist only on q, p and x");
  return [kind, index](const PhasePoint& pt) {
    const Vector& v = sector(pt, kind);
    if (index >= v.size()) fail(ErrorCode::DimensionMismatch, "coordinate index exceeds the point dimension");
    return v(index);
  };
}

}  // namespace gp
