#include "gp/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "gp/errors.hpp"

namespace gp {

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonFiniteValue:
    case ErrorCode::WeylWallSingularity:
    case ErrorCode::BasisGramSingular:
      return kExitNumerical;
    case ErrorCode::EmptyTrajectory:
      return kExitCheckFailed;
    default:
      return kExitConfigError;
  }
}

namespace {

using json = nlohmann::json;
using Rng = std::mt19937_64;

std::string num(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Vector to_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }
std::vector<double> from_vector(const Vector& v) { return {v.data(), v.data() + v.size()}; }

template <class T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

double positive(const json& j, const char* key, double fallback) {
  const double v = get(j, key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorCode::ConfigParseError, std::string(key) + " must be positive and finite");
  return v;
}

// ---- seeded random fields --------------------------------------------------

double coin(Rng& rng) {
  // three significant digits keep the generated expressions readable
  std::uniform_int_distribution<int> d(-1000, 1000);
  return d(rng) / 1000.0;
}

Vector random_vector(Rng& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

std::string random_polynomial(Rng& rng, const std::vector<std::string>& vars, int terms = 3, int degree = 2) {
  std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
  std::uniform_int_distribution<int> deg(1, degree);
  std::string out = num(coin(rng));
  for (int t = 0; t < terms; ++t) {
    out += " + " + num(coin(rng));
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) out += "*" + vars[pick(rng)];
  }
  return out;
}

std::vector<std::string> names(const char* prefix, int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back(prefix + std::to_string(i));
  return v;
}

std::vector<std::string> group_names(int d) {
  std::vector<std::string> v;
  for (int r = 1; r <= d; ++r)
    for (int c = 1; c <= d; ++c) {
      v.push_back("re_g" + std::to_string(r) + std::to_string(c));
      v.push_back("im_g" + std::to_string(r) + std::to_string(c));
    }
  return v;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

ScalarField product(ScalarField a, ScalarField b) {
  return [a = std::move(a), b = std::move(b)](const PhasePoint& pt) { return a(pt) * b(pt); };
}

// ---- check bookkeeping -----------------------------------------------------

class Suite {
 public:
  template <class Fn>
  void run(const std::string& name, double tol, const char* violation, Fn&& fn) {
    json c{{"name", name}, {"tolerance", tol}};
    bool pass = false;
    try {
      const double defect = fn();
      c["defect"] = std::isfinite(defect) ? json(defect) : json(nullptr);
      pass = std::isfinite(defect) && defect <= tol;
      if (!pass && violation) c["violation"] = violation;
    } catch (const Error& e) {
      c["defect"] = nullptr;
      c["error"] = to_string(e.code());
      c["message"] = e.what();
      if (violation) c["violation"] = violation;
    }
    c["pass"] = pass;
    if (!pass) {
      ++failed_;
      failures_.push_back(c.contains("violation") ? c["violation"].get<std::string>() + " (" + name + ")" : name);
    }
    checks_.push_back(std::move(c));
  }

  void skip(const std::string& name, const std::string& why) {
    checks_.push_back({{"name", name}, {"skipped", why}, {"pass", true}});
  }

  int failed() const { return failed_; }
  const json& checks() const { return checks_; }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  json checks_ = json::array();
  std::vector<std::string> failures_;
  int failed_ = 0;
};

double max_abs(double a, double b) { return std::max(a, std::abs(b)); }

void write_report(CommandResult& r, const RunConfig& c, const std::string& fallback) {
  std::filesystem::create_directories(c.output_dir);
  const auto path = c.output_dir / (c.report_name.empty() ? fallback : c.report_name);
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out << r.report.dump(2) << '\n';
  r.written.push_back(path);
}

VectorPotential default_verify_potential(const LieAlgebra& L, Rng& rng) {
  const int n = 2;
  std::vector<std::tuple<int, int, std::string>> entries;
  for (int j = 0; j < L.dim(); ++j)
    for (int i = 0; i < n; ++i) entries.emplace_back(j, i, random_polynomial(rng, names("q", n), 2, 2));
  return VectorPotential::expression(n, L.dim(), entries);
}

bool is_abelian(const LieAlgebra& L) {
  for (int k = 0; k < L.dim(); ++k)
    if (L.c(k).cwiseAbs().maxCoeff() != 0.0) return false;
  return true;
}

}  // namespace

// ---- configuration ---------------------------------------------------------

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::ConfigParseError, "config must be a JSON object");
  static const char* known[] = {"algebra", "potential", "f_spec",  "reduce_point", "gauge_map", "initial_state",
                                "dt",      "steps",     "tolerances", "seed",      "samples",   "output"};
  for (const auto& [key, _] : j.items())
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      fail(ErrorCode::ConfigParseError, "unknown config key '" + key + "'");
  RunConfig c;
  try {
    if (j.contains("algebra")) c.algebra = j.at("algebra");
    if (j.contains("potential")) c.potential = j.at("potential");
    if (j.contains("f_spec")) c.f_spec = j.at("f_spec");
    if (j.contains("gauge_map")) c.gauge_map = j.at("gauge_map");
    if (j.contains("reduce_point")) c.reduce_point = j.at("reduce_point").get<std::vector<double>>();
    if (j.contains("initial_state")) {
      const auto& s = j.at("initial_state");
      const auto q = s.at("q").get<std::vector<double>>();
      const auto p = s.at("p").get<std::vector<double>>();
      const auto I = s.at("I").get<std::vector<double>>();
      if (q.size() != p.size()) fail(ErrorCode::ConfigParseError, "initial q and p differ in length");
      c.initial_state = WongState{to_vector(q), to_vector(p), to_vector(I)};
    }
    c.dt = positive(j, "dt", c.dt);
    c.steps = get(j, "steps", c.steps);
    if (c.steps < 1) fail(ErrorCode::ConfigParseError, "steps must be at least 1");
    if (!std::isfinite(c.dt * c.steps)) fail(ErrorCode::ConfigParseError, "dt * steps must be finite");
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      c.tol.antisymmetry = positive(t, "antisymmetry_tol", c.tol.antisymmetry);
      c.tol.jacobi = positive(t, "jacobi_tol", c.tol.jacobi);
      c.tol.leibniz = positive(t, "leibniz_tol", c.tol.leibniz);
      c.tol.casimir = positive(t, "casimir_tol", c.tol.casimir);
      c.tol.equivalence = positive(t, "equivalence_tol", c.tol.equivalence);
      c.tol.covariance = positive(t, "covariance_tol", c.tol.covariance);
      c.tol.hamiltonian = positive(t, "hamiltonian_tol", c.tol.hamiltonian);
      c.tol.drift = positive(t, "drift_tol", c.tol.drift);
      c.tol.casimir_drift = positive(t, "casimir_drift_tol", c.tol.casimir_drift);
      c.tol.rank = positive(t, "rank_tol", c.tol.rank);
    }
    c.seed = get<std::uint64_t>(j, "seed", c.seed);
    c.samples = get(j, "samples", c.samples);
    if (c.samples < 1) fail(ErrorCode::ConfigParseError, "samples must be at least 1");
    if (j.contains("output")) {
      const auto& o = j.at("output");
      if (o.is_string()) {
        c.output_dir = o.get<std::string>();
      } else {
        c.output_dir = get<std::string>(o, "dir", c.output_dir.string());
        c.report_name = get<std::string>(o, "report", c.report_name);
        c.trajectory_name = get<std::string>(o, "trajectory", c.trajectory_name);
      }
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigParseError, std::string("config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigParseError, path.string() + ": " + e.what());
  }
  return from_json(j);
}

AlgebraPtr config_algebra(const RunConfig& c, Validation validation) {
  if (c.algebra.is_string()) {
    const std::string s = c.algebra.get<std::string>();
    if (!s.empty() && s.front() == '{') return load_algebra(std::string_view(s), validation);
    return builtin_algebra(s);
  }
  return load_algebra(c.algebra, validation);
}

VectorPotential config_potential(const RunConfig& c, const LieAlgebra& L) {
  const int n_hint = c.initial_state ? static_cast<int>(c.initial_state->q.size()) : 3;
  if (!c.potential) return VectorPotential::zero(n_hint, L.dim());
  json p = *c.potential;
  if (p.is_object() && !p.contains("n") && p.value("kind", "") == "zero") p["n"] = n_hint;
  if (p.is_object() && !p.contains("n") && p.value("kind", "") == "uniform_b" && c.initial_state) p["n"] = n_hint;
  return VectorPotential::from_json(p, L.dim());
}

PhasePoint parse_point(const AlgebraPtr& L, const json& j) {
  if (!j.is_object()) fail(ErrorCode::ConfigParseError, "point must be a JSON object");
  PhasePoint pt;
  try {
    if (j.contains("q")) pt.q = to_vector(j.at("q").get<std::vector<double>>());
    if (j.contains("p")) pt.p = to_vector(j.at("p").get<std::vector<double>>());
    int dual = 0;
    for (const char* key : {"x", "I", "z"})
      if (j.contains(key)) {
        pt.x = to_vector(j.at(key).get<std::vector<double>>());
        ++dual;
      }
    if (dual > 1) fail(ErrorCode::ConfigParseError, "give only one of x, I, z");
    if (j.contains("g") && j.contains("g_exp")) fail(ErrorCode::ConfigParseError, "give only one of g, g_exp");
    if (j.contains("g_exp")) {
      const Vector X = to_vector(j.at("g_exp").get<std::vector<double>>());
      if (X.size() != L->dim()) fail(ErrorCode::DimensionMismatch, "g_exp must have the algebra dimension");
      pt.g = gp::exp(L, X);
    } else if (j.contains("g")) {
      const auto rows = j.at("g").get<std::vector<std::vector<std::vector<double>>>>();
      const auto d = static_cast<Eigen::Index>(rows.size());
      CMatrix m(d, d);
      for (Eigen::Index r = 0; r < d; ++r) {
        if (static_cast<Eigen::Index>(rows[r].size()) != d) fail(ErrorCode::DimensionMismatch, "group matrix must be square");
        for (Eigen::Index col = 0; col < d; ++col) {
          const auto& e = rows[r][col];
          if (e.size() != 2) fail(ErrorCode::ConfigParseError, "group entries are [re, im] pairs");
          m(r, col) = Complex(e[0], e[1]);
        }
      }
      pt.g = make_element(L, std::move(m));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigParseError, std::string("point: ") + e.what());
  }
  return pt;
}

// ---- verify ----------------------------------------------------------------

CommandResult cmd_verify(const RunConfig& c) {
  const AlgebraPtr L = config_algebra(c, Validation::None);
  const int n = L->dim();
  const int S = c.samples;
  Rng rng(c.seed);
  Suite suite;

  suite.run("algebra.antisymmetry", 0.0, "AntisymmetryViolation", [&] { return antisymmetry_defect(*L); });
  suite.run("algebra.jacobi", kStructureTolerance, "JacobiViolation", [&] { return jacobi_defect(*L); });
  if (L->has_matrix_basis())
    suite.run("algebra.matrix_basis", kStructureTolerance, nullptr, [&] { return matrix_basis_defect(*L); });
  suite.run("algebra.ad_star_pairing", 1e-12, nullptr, [&] {
    double d = 0.0;
    for (int s = 0; s < S; ++s) {
      const Vector X = random_vector(rng, n), Y = random_vector(rng, n), xi = random_vector(rng, n);
      d = max_abs(d, ad_star(*L, X, xi).dot(Y) - xi.dot(bracket_vectors(*L, X, Y)));
    }
    return d;
  });
  suite.run("algebra.killing_invariance", kStructureTolerance, nullptr, [&] {
    const Matrix B = killing_form(*L);
    double d = 0.0;
    for (int s = 0; s < S; ++s) {
      const Vector X = random_vector(rng, n), Y = random_vector(rng, n), Z = random_vector(rng, n);
      d = max_abs(d, bracket_vectors(*L, X, Y).dot(B * Z) + Y.dot(B * bracket_vectors(*L, X, Z)));
    }
    return d;
  });

  if (L->has_matrix_basis()) {
    suite.run("group.ad_homomorphism", 1e-9, nullptr, [&] {
      double d = 0.0;
      for (int s = 0; s < S; ++s) {
        const GroupElement g = gp::exp(L, random_vector(rng, n)), h = gp::exp(L, random_vector(rng, n));
        d = std::max(d, (adjoint_matrix(*L, multiply(g, h)) - adjoint_matrix(*L, g) * adjoint_matrix(*L, h))
                            .cwiseAbs()
                            .maxCoeff());
      }
      return d;
    });
    suite.run("group.semidirect_associativity", 1e-9, nullptr, [&] {
      double d = 0.0;
      for (int s = 0; s < S; ++s) {
        CotangentElement e[3];
        for (auto& x : e) x = {gp::exp(L, random_vector(rng, n)), random_vector(rng, n)};
        const auto left = semidirect_multiply(*L, semidirect_multiply(*L, e[0], e[1]), e[2]);
        const auto right = semidirect_multiply(*L, e[0], semidirect_multiply(*L, e[1], e[2]));
        d = std::max({d, (left.g.matrix - right.g.matrix).cwiseAbs().maxCoeff(),
                      (left.xi - right.xi).cwiseAbs().maxCoeff()});
      }
      return d;
    });
  }

  // Lie-Poisson
  const auto xs = names("x", n);
  const auto random_x_field = [&] { return as_field(Expression(random_polynomial(rng, xs))); };
  const LiePoissonEngine lp(L);
  const auto x_point = [&] { return PhasePoint{{}, {}, random_vector(rng, n), std::nullopt}; };
  suite.run("poisson.lie_poisson.antisymmetry", c.tol.antisymmetry, nullptr, [&] {
    double d = 0.0;
    for (int s = 0; s < S; ++s) {
      const auto f = random_x_field(), g = random_x_field();
      const PhasePoint pt = x_point();
      d = max_abs(d, lp.bracket(f, g, pt, {}) + lp.bracket(g, f, pt, {}));
    }
    return d;
  });
  suite.run("poisson.lie_poisson.leibniz", c.tol.leibniz, nullptr, [&] {
    double d = 0.0;
    for (int s = 0; s < S; ++s) {
      const auto f = random_x_field(), g = random_x_field(), h = random_x_field();
      const PhasePoint pt = x_point();
      d = max_abs(d, lp.bracket(f, product(g, h), pt, {}) - g(pt) * lp.bracket(f, h, pt, {}) -
                         h(pt) * lp.bracket(f, g, pt, {}));
    }
    return d;
  });
  suite.run("poisson.lie_poisson.jacobi", c.tol.jacobi, "JacobiViolation", [&] {
    double d = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int e = b + 1; e < n && e < b + 3; ++e)
          d = max_abs(d, jacobiator(lp, coordinate_field(FrameKind::DX, a), coordinate_field(FrameKind::DX, b),
                                    coordinate_field(FrameKind::DX, e), x_point()));
    for (int s = 0; s < S; ++s) d = max_abs(d, jacobiator(lp, random_x_field(), random_x_field(), random_x_field(), x_point()));
    return d;
  });
  if (L->inverse_form()) {
    suite.run("poisson.casimir", c.tol.casimir, nullptr, [&] {
      const ScalarField C = [L](const PhasePoint& pt) { return quadratic_casimir(*L, pt.x); };
      double d = 0.0;
      for (int s = 0; s < S; ++s) d = max_abs(d, lp.bracket(C, random_x_field(), x_point(), {}));
      return d;
    });
  } else {
    suite.skip("poisson.casimir", "invariant form is singular");
  }

  if (L->has_matrix_basis()) {
    const auto gs = group_names(L->matrix_size());
    const auto random_tg_field = [&] {
      return as_field(Expression("(" + random_polynomial(rng, xs, 2, 1) + ")*(" + random_polynomial(rng, gs, 2, 1) +
                                 ") + " + random_polynomial(rng, concat(xs, gs), 2, 2)));
    };
    const TStarGEngine tg(L);
    const BivectorEngine tg_spec(tstar_g_bivector(*L), "tstar_g_spec");
    const auto tg_point = [&] { return PhasePoint{{}, {}, random_vector(rng, n), gp::exp(L, random_vector(rng, n))}; };
    suite.run("poisson.tstar_g.antisymmetry", c.tol.antisymmetry, nullptr, [&] {
      double d = 0.0;
      for (int s = 0; s < S; ++s) {
        const auto f = random_tg_field(), g = random_tg_field();
        const PhasePoint pt = tg_point();
        d = max_abs(d, tg.bracket(f, g, pt, {}) + tg.bracket(g, f, pt, {}));
      }
      return d;
    });
    suite.run("poisson.tstar_g.leibniz", c.tol.leibniz, nullptr, [&] {
      double d = 0.0;
      for (int s = 0; s < S; ++s) {
        const auto f = random_tg_field(), g = random_tg_field(), h = random_tg_field();
        const PhasePoint pt = tg_point();
        d = max_abs(d, tg.bracket(f, product(g, h), pt, {}) - g(pt) * tg.bracket(f, h, pt, {}) -
                           h(pt) * tg.bracket(f, g, pt, {}));
      }
      return d;
    });
    suite.run("poisson.tstar_g.jacobi", c.tol.jacobi, "JacobiViolation", [&] {
      double d = 0.0;
      for (int s = 0; s < S; ++s)
        d = max_abs(d, jacobiator(tg, random_tg_field(), random_tg_field(), random_tg_field(), tg_point()));
      return d;
    });
    suite.run("poisson.engine_equivalence", c.tol.equivalence, nullptr, [&] {
      double d = 0.0;
      for (int s = 0; s < S; ++s) {
        const auto f = random_tg_field(), g = random_tg_field();
        const PhasePoint pt = tg_point();
        d = max_abs(d, tg.bracket(f, g, pt, {}) - tg_spec.bracket(f, g, pt, {}));
      }
      return d;
    });
  }

  // gauge and the gauged bracket
  std::optional<VectorPotential> A;
  suite.run("gauge.potential", 0.0, nullptr, [&] {
    A = c.potential ? config_potential(c, *L) : default_verify_potential(*L, rng);
    return 0.0;
  });
  if (A) {
    const int nb = A->n_base();
    const auto q_point = [&] { return random_vector(rng, nb); };
    suite.run("gauge.curvature_antisymmetry", 0.0, nullptr, [&] {
      double d = 0.0;
      const Curvature F = curvature(*L, *A, q_point());
      for (const auto& Fi : F.F) d = std::max(d, (Fi + Fi.transpose()).cwiseAbs().maxCoeff());
      return d;
    });
    if (L->has_matrix_basis()) {
      std::vector<std::string> chi;
      for (int a = 0; a < n; ++a) chi.push_back(random_polynomial(rng, names("q", nb), 2, 2));
      const GaugeMap s = c.gauge_map ? GaugeMap::from_json(L, *c.gauge_map) : GaugeMap::exponential(L, chi);
      suite.run("gauge.covariance", c.tol.covariance, nullptr, [&] {
        const VectorPotential At = gauge_transformed(L, *A, s);
        double d = 0.0;
        for (int k = 0; k < S; ++k) {
          const Vector q = q_point();
          const Curvature lhs = curvature(*L, At, q);
          const Curvature rhs = gauge_transform_curvature(*L, curvature(*L, *A, q), s, q);
          for (int i = 0; i < n; ++i) d = std::max(d, (lhs.F[i] - rhs.F[i]).cwiseAbs().maxCoeff());
        }
        return d;
      });
      if (is_abelian(*L))
        suite.run("gauge.abelian_invariance", 1e-8, nullptr, [&] {
          const VectorPotential At = gauge_transformed(L, *A, s);
          double d = 0.0;
          for (int k = 0; k < S; ++k) {
            const Vector q = q_point();
            const Curvature lhs = curvature(*L, At, q), rhs = curvature(*L, *A, q);
            for (int i = 0; i < n; ++i) d = std::max(d, (lhs.F[i] - rhs.F[i]).cwiseAbs().maxCoeff());
          }
          return d;
        });
      suite.run("gauge.connection_equivariance", 1e-9, nullptr, [&] {
        double d = 0.0;
        for (int k = 0; k < S; ++k) {
          const Vector q = q_point(), v = random_vector(rng, nb), w = random_vector(rng, n);
          const GroupElement g = gp::exp(L, random_vector(rng, n)), h = gp::exp(L, random_vector(rng, n));
          const Vector moved = adjoint_matrix(*L, h) *
                               connection_eval(*L, *A, q, multiply(g, h), v, adjoint_matrix(*L, inverse(h)) * w);
          d = std::max(d, (moved - connection_eval(*L, *A, q, g, v, w)).cwiseAbs().maxCoeff());
        }
        return d;
      });
    }

    const BivectorEngine gauged(gauged_bivector(L, *A), "gauged");
    std::vector<ScalarField> coords;
    for (int j = 0; j < nb; ++j) coords.push_back(coordinate_field(FrameKind::DQ, j));
    for (int j = 0; j < nb; ++j) coords.push_back(coordinate_field(FrameKind::DP, j));
    for (int k = 0; k < n; ++k) coords.push_back(coordinate_field(FrameKind::DX, k));
    const auto wong_point = [&] { return WongState{q_point(), random_vector(rng, nb), random_vector(rng, n)}; };
    std::uniform_int_distribution<std::size_t> pick(0, coords.size() - 1);
    suite.run("reduce.gauged.antisymmetry", c.tol.antisymmetry, nullptr, [&] {
      double d = 0.0;
      for (int s = 0; s < S; ++s) {
        const auto& f = coords[pick(rng)];
        const auto& g = coords[pick(rng)];
        const PhasePoint pt = wong_point().point();
        d = max_abs(d, gauged.bracket(f, g, pt, {}) + gauged.bracket(g, f, pt, {}));
      }
      return d;
    });
    suite.run("reduce.gauged.jacobi", c.tol.jacobi, "JacobiViolation", [&] {
      double d = 0.0;
      for (int s = 0; s < 3 * S; ++s) {
        const auto& f = coords[pick(rng)];
        const auto& g = coords[pick(rng)];
        const auto& h = coords[pick(rng)];
        d = max_abs(d, jacobiator(gauged, f, g, h, wong_point().point()));
      }
      return d;
    });
    suite.run("dynamics.wong_vs_hamiltonian", c.tol.hamiltonian, nullptr, [&] {
      const ScalarField H = [](const PhasePoint& pt) { return 0.5 * pt.p.squaredNorm(); };
      double d = 0.0;
      for (int s = 0; s < S; ++s) {
        const WongState st = wong_point();
        const Vector xh = hamiltonian_vector_field(gauged, H, st.point(), coords);
        const WongDerivative w = wong_vector_field(*L, *A, st);
        Vector wv(xh.size());
        wv << w.q, w.p, w.I;
        d = std::max(d, (xh - wv).cwiseAbs().maxCoeff());
      }
      return d;
    });
  }

  // Cartan reduction, when root data exist
  std::optional<RootSystemData> R;
  try {
    if (L->has_matrix_basis() && jacobi_defect(*L) <= kStructureTolerance) R = root_system(L);
  } catch (const Error&) {
  }
  if (R && !R->positive_roots.empty()) {
    const BivectorEngine cartan(cartan_reduced_bivector(*R), "cartan");
    const auto gs = group_names(L->matrix_size());
    const auto zs = names("z", R->rank());
    const auto field = [&] { return as_field(Expression(random_polynomial(rng, concat(zs, gs), 3, 2))); };
    suite.run("reduce.cartan.jacobi", c.tol.jacobi, "JacobiViolation", [&] {
      double d = 0.0;
      for (double scale : {0.1, 1.0, 10.0}) {
        Vector zh(R->rank());
        for (int j = 0; j < R->rank(); ++j) zh(j) = scale * (1.0 + 0.37 * j);
        const PhasePoint pt{{}, {}, zh, gp::exp(L, random_vector(rng, n))};
        d = max_abs(d, jacobiator(cartan, field(), field(), field(), pt));
      }
      return d;
    });
    suite.run("reduce.cartan.weyl_wall", 0.0, nullptr, [&] {
      const PhasePoint pt{{}, {}, Vector::Zero(R->rank()), identity_element(L)};
      try {
        cartan_reduced_bracket(*R, field(), field(), pt);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::WeylWallSingularity) return 0.0;
        throw;
      }
      return 1.0;
    });
  }

  CommandResult r;
  r.exit_code = suite.failed() ? kExitCheckFailed : kExitOk;
  r.report = {{"command", "verify"},        {"algebra", L->name()},        {"seed", c.seed},
              {"samples", c.samples},       {"checks", suite.checks()},    {"failed", suite.failed()},
              {"failures", suite.failures()}, {"pass", suite.failed() == 0}};
  std::ostringstream sum;
  sum << "verify " << L->name() << " (seed " << c.seed << "): " << suite.checks().size() << " checks, " << suite.failed()
      << " failed\n";
  for (const auto& ch : suite.checks()) {
    sum << (ch.at("pass").get<bool>() ? "  ok    " : "  FAIL  ") << ch.at("name").get<std::string>();
    if (ch.contains("defect") && !ch.at("defect").is_null())
      sum << "  defect " << ch.at("defect").get<double>() << " <= " << ch.at("tolerance").get<double>();
    if (ch.contains("violation") && !ch.at("pass").get<bool>()) sum << "  [" << ch.at("violation").get<std::string>() << "]";
    if (ch.contains("error")) sum << "  (" << ch.at("message").get<std::string>() << ")";
    if (ch.contains("skipped")) sum << "  skipped: " << ch.at("skipped").get<std::string>();
    sum << '\n';
  }
  r.summary = sum.str();
  write_report(r, c, "verify_report.json");
  return r;
}

// ---- bracket ---------------------------------------------------------------

double cmd_bracket(const RunConfig& c, const std::string& engine, const std::string& f_src, const std::string& g_src,
                   const json& point) {
  const AlgebraPtr L = config_algebra(c);
  const ScalarField f = as_field(Expression(f_src));
  const ScalarField g = as_field(Expression(g_src));
  const PhasePoint pt = parse_point(L, point);
  const auto need = [&](bool ok, const char* what) {
    if (!ok) fail(ErrorCode::ConfigParseError, "engine " + engine + " needs " + what + " in the point");
  };
  if (engine == "lie_poisson") {
    need(pt.x.size() > 0, "x");
    return lie_poisson_bracket(*L, f, g, pt.x);
  }
  if (engine == "orbit") {
    need(pt.x.size() > 0 && point.contains("level"), "x and level");
    return coadjoint_orbit_bracket(*L, f, g, pt.x, point.at("level").get<double>());
  }
  if (engine == "tstar") {
    need(pt.x.size() > 0 && pt.g.has_value(), "x and g");
    return tstar_g_bracket(*L, f, g, TrivializedCovector{pt.x, *pt.g});
  }
  if (engine == "gauged") {
    need(pt.q.size() > 0 && pt.p.size() > 0 && pt.x.size() > 0, "q, p and I");
    RunConfig local = c;
    local.initial_state = WongState::from_point(pt);
    return gauged_bracket(L, config_potential(local, *L), f, g, WongState::from_point(pt));
  }
  if (engine == "cartan" || engine == "cartan_gauged") {
    const RootSystemData R = root_system(L);
    need(pt.x.size() > 0 && pt.g.has_value(), "z and g");
    if (engine == "cartan") return cartan_reduced_bracket(R, f, g, pt);
    need(pt.q.size() > 0 && pt.p.size() > 0, "q and p");
    RunConfig local = c;
    local.initial_state = WongState{pt.q, pt.p, Vector::Zero(L->dim())};
    return cartan_gauged_bracket(R, config_potential(local, *L), f, g, pt);
  }
  fail(ErrorCode::ConfigParseError,
       "unknown engine '" + engine + "' (lie_poisson, orbit, tstar, gauged, cartan, cartan_gauged)");
}

// ---- reduce ----------------------------------------------------------------

CommandResult cmd_reduce(const RunConfig& c) {
  const AlgebraPtr L = config_algebra(c);
  const int n = L->dim();
  if (!c.f_spec) fail(ErrorCode::ConfigParseError, "reduce needs f_spec in the config");
  const MomentumMap f = MomentumMap::from_json(*c.f_spec, n);
  Vector zr(n);
  if (c.reduce_point) {
    if (static_cast<int>(c.reduce_point->size()) != n) fail(ErrorCode::ConfigParseError, "reduce_point has wrong length");
    zr = to_vector(*c.reduce_point);
  } else {
    for (int i = 0; i < n; ++i) zr(i) = 0.3 + 0.1 * i;
  }
  const Matrix W = omega_f_matrix(*L, f, zr);
  const KernelRank kr = kernel_rank(W, c.tol.rank);

  std::vector<std::string> frames;
  for (int i = 1; i <= n; ++i) frames.push_back("L_" + std::to_string(i));
  for (int i = 1; i <= n; ++i) frames.push_back("dz_" + std::to_string(i));
  json basis = json::array();
  for (Eigen::Index k = 0; k < kr.kernel.cols(); ++k) basis.push_back(from_vector(kr.kernel.col(k)));

  // kernel projector applied to each fiber direction
  const Matrix P = kr.kernel * kr.kernel.transpose();
  double fiber_gap = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vector e = Vector::Unit(2 * n, n + i);
    fiber_gap = std::max(fiber_gap, (P * e - e).norm());
  }
  const int orbit_dim = coadjoint_orbit_dim(*L, f(zr), c.tol.rank);
  const bool applies = f.is_constant();
  const bool consistent = !applies || (kr.rank == orbit_dim && fiber_gap <= 1e-9);

  CommandResult r;
  r.report = {{"command", "reduce"},
              {"algebra", L->name()},
              {"f", f.sources()},
              {"point", from_vector(zr)},
              {"frames", frames},
              {"rank", kr.rank},
              {"kernel_dim", kr.kernel.cols()},
              {"kernel_basis", basis},
              {"singular_values", from_vector(kr.singular_values)},
              {"orbit_dim_check",
               {{"applies", applies},
                {"orbit_dim", orbit_dim},
                {"expected_rank", applies ? json(orbit_dim) : json(nullptr)},
                {"fibers_in_kernel", fiber_gap <= 1e-9},
                {"pass", consistent}}}};
  r.exit_code = consistent && kr.rank % 2 == 0 ? kExitOk : kExitCheckFailed;
  std::ostringstream sum;
  sum << "reduce " << L->name() << ": rank " << kr.rank << " of " << 2 * n << ", kernel_dim " << kr.kernel.cols();
  if (applies) sum << ", coadjoint orbit dim " << orbit_dim << (consistent ? " (consistent)" : " (MISMATCH)");
  sum << '\n';
  r.summary = sum.str();
  write_report(r, c, "reduce_report.json");
  return r;
}

// ---- simulate --------------------------------------------------------------

CommandResult cmd_simulate(const RunConfig& c) {
  const AlgebraPtr L = config_algebra(c);
  if (!c.initial_state) fail(ErrorCode::ConfigParseError, "simulate needs initial_state in the config");
  const VectorPotential A = config_potential(c, *L);
  const Trajectory t = integrate_wong(*L, A, *c.initial_state, c.dt, c.steps);

  CommandResult r;
  std::filesystem::create_directories(c.output_dir);
  const auto csv = c.output_dir / c.trajectory_name;
  write_csv(t, csv);
  r.written.push_back(csv);

  const InvariantReport inv = invariant_report(t, {c.tol.drift, c.tol.casimir_drift});
  json report{{"command", "simulate"},
              {"algebra", L->name()},
              {"dt", c.dt},
              {"steps", c.steps},
              {"samples_written", t.size()},
              {"blew_up", t.blew_up},
              {"energy_drift", {{"max", inv.max_energy_drift}, {"mean", inv.mean_energy_drift}, {"tolerance", c.tol.drift}}},
              {"casimir_drift",
               inv.casimir_defined
                   ? json{{"max", inv.max_casimir_drift}, {"mean", inv.mean_casimir_drift}, {"tolerance", c.tol.casimir_drift}}
                   : json(nullptr)},
              {"trajectory", csv.string()},
              {"pass", inv.pass}};
  if (t.blew_up) report["failure"] = t.failure;
  if (A.n_base() >= 2 && t.size() > 2) {
    std::vector<double> p2;
    for (const auto& s : t.states) p2.push_back(s.p(1));
    const double period = crossing_period(t.times, p2);
    report["measured_period"] = std::isfinite(period) ? json(period) : json(nullptr);
    if (c.potential && c.potential->value("kind", "") == "uniform_b" && L->dim() == 1) {
      const double B = c.potential->at("B").get<double>() * c.potential->value("scale", 1.0);
      const double omega = std::abs(c.initial_state->I(0) * B);
      if (omega > 0.0) report["expected_period"] = 2.0 * std::numbers::pi / omega;
    }
  }
  r.report = std::move(report);
  r.exit_code = t.blew_up ? kExitNumerical : (inv.pass ? kExitOk : kExitCheckFailed);
  std::ostringstream sum;
  sum << "simulate " << L->name() << ": " << t.size() << " samples";
  if (t.blew_up) sum << ", BLOW-UP: " << t.failure;
  sum << "\n  energy drift max " << inv.max_energy_drift << " (tol " << c.tol.drift << ")";
  if (inv.casimir_defined) sum << "\n  casimir drift max " << inv.max_casimir_drift << " (tol " << c.tol.casimir_drift << ")";
  if (r.report.contains("measured_period") && !r.report["measured_period"].is_null())
    sum << "\n  period " << r.report["measured_period"].get<double>();
  sum << "\n  " << (inv.pass ? "pass" : "FAIL") << ", trajectory " << csv.string() << '\n';
  r.summary = sum.str();
  write_report(r, c, "simulate_report.json");
  return r;
}

CommandResult cmd_rootsys(const RunConfig& c) {
  const AlgebraPtr L = config_algebra(c);
  const RootSystemData R = root_system(L);
  CommandResult r;
  r.report = to_json(R);
  r.report["command"] = "rootsys";
  r.exit_code = R.validation_defect <= 1e-9 ? kExitOk : kExitCheckFailed;
  std::ostringstream sum;
  sum << "rootsys " << L->name() << ": rank " << R.rank() << ", " << R.positive_roots.size() << " positive roots, defect "
      << R.validation_defect << '\n';
  r.summary = sum.str();
  write_report(r, c, "rootsys_report.json");
  return r;
}

}  // namespace gp
