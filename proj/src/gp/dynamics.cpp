#include "gp/dynamics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "gp/errors.hpp"

namespace gp {

namespace {

void check_state(const LieAlgebra& L, const VectorPotential& A, const WongState& s) {
  if (s.q.size() != A.n_base() || s.p.size() != A.n_base())
    fail(ErrorCode::DimensionMismatch, "state base dimension differs from the potential");
  if (s.I.size() != L.dim()) fail(ErrorCode::DimensionMismatch, "charge length differs from the algebra dimension");
}

WongState axpy(const WongState& s, double h, const WongDerivative& k) {
  return WongState{s.q + h * k.q, s.p + h * k.p, s.I + h * k.I};
}

bool finite(const WongState& s) { return s.q.allFinite() && s.p.allFinite() && s.I.allFinite(); }

std::string fmt(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

WongDerivative wong_vector_field(const LieAlgebra& L, const VectorPotential& A, const WongState& s) {
  check_state(L, A, s);
  const Matrix FI = curvature(L, A, s.q).contract(s.I);
  const Matrix P = L.contract_upper(s.I);
  WongDerivative d{s.p, 2.0 * (FI * s.p), -(P * (A(s.q) * s.p))};
  if (!finite(d)) fail(ErrorCode::NonFiniteValue, "Wong field is not finite at the state");
  return d;
}

WongDerivative lorentz_field(const LieAlgebra& L, double e, const CurvatureField& F, const WongState& s) {
  for (int k = 0; k < L.dim(); ++k)
    if (L.c(k).cwiseAbs().maxCoeff() != 0.0) fail(ErrorCode::NotAbelian, "Lorentz field needs an abelian algebra");
  const Curvature Fq = F(s.q);
  const Matrix FI = Fq.contract(Vector::Constant(1, e));
  return WongDerivative{s.p, 2.0 * (FI * s.p), Vector::Zero(s.I.size())};
}

WongState rk4_step(const LieAlgebra& L, const VectorPotential& A, const WongState& s, double h) {
  const WongDerivative k1 = wong_vector_field(L, A, s);
  const WongDerivative k2 = wong_vector_field(L, A, axpy(s, 0.5 * h, k1));
  const WongDerivative k3 = wong_vector_field(L, A, axpy(s, 0.5 * h, k2));
  const WongDerivative k4 = wong_vector_field(L, A, axpy(s, h, k3));
  const double w = h / 6.0;
  return WongState{s.q + w * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q),
                   s.p + w * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p),
                   s.I + w * (k1.I + 2.0 * k2.I + 2.0 * k3.I + k4.I)};
}

double kinetic_energy(const WongState& s) { return 0.5 * s.p.squaredNorm(); }

double charge_casimir(const LieAlgebra& L, const Vector& I) {
  if (!L.inverse_form()) return std::numeric_limits<double>::quiet_NaN();
  return quadratic_casimir(L, I);
}

Trajectory integrate_wong(const LieAlgebra& L, const VectorPotential& A, const WongState& s0, double dt, int steps,
                          Method) {
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::InvalidArgument, "dt must be positive and finite");
  if (steps < 1) fail(ErrorCode::InvalidArgument, "steps must be at least 1");
  check_state(L, A, s0);
  Trajectory t;
  t.times.reserve(steps + 1);
  t.states.reserve(steps + 1);
  const auto record = [&](double time, const WongState& s) {
    t.times.push_back(time);
    t.states.push_back(s);
    t.energy.push_back(kinetic_energy(s));
    t.casimir.push_back(charge_casimir(L, s.I));
  };
  if (!finite(s0)) fail(ErrorCode::NonFiniteValue, "initial state is not finite");
  record(0.0, s0);
  WongState s = s0;
  for (int i = 1; i <= steps; ++i) {
    try {
      s = rk4_step(L, A, s, dt);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonFiniteValue) throw;
      t.blew_up = true;
      t.failure = e.what();
      break;
    }
    if (!finite(s) || !std::isfinite(kinetic_energy(s))) {
      t.blew_up = true;
      t.failure = "state became non-finite at step " + std::to_string(i);
      break;
    }
    record(i * dt, s);
  }
  return t;
}

InvariantReport invariant_report(const Trajectory& t, const DriftThresholds& thresholds) {
  if (t.size() == 0) fail(ErrorCode::EmptyTrajectory, "trajectory has no samples");
  InvariantReport r;
  const auto drift = [](const std::vector<double>& v, double& max, double& mean) {
    const double ref = v.front();
    const double denom = ref != 0.0 ? std::abs(ref) : 1.0;
    double sum = 0.0;
    for (double x : v) {
      const double d = std::abs(x - ref) / denom;
      max = std::max(max, std::isnan(d) ? std::numeric_limits<double>::infinity() : d);
      sum += d;
    }
    mean = sum / static_cast<double>(v.size());
  };
  drift(t.energy, r.max_energy_drift, r.mean_energy_drift);
  r.casimir_defined = !std::isnan(t.casimir.front());
  if (r.casimir_defined) drift(t.casimir, r.max_casimir_drift, r.mean_casimir_drift);
  r.pass = !t.blew_up && r.max_energy_drift <= thresholds.energy &&
           (!r.casimir_defined || r.max_casimir_drift <= thresholds.casimir);
  return r;
}

double crossing_period(const std::vector<double>& times, const std::vector<double>& signal) {
  std::vector<double> crossings;
  for (std::size_t i = 1; i < signal.size() && i < times.size(); ++i) {
    const double a = signal[i - 1], b = signal[i];
    if ((a < 0.0 && b >= 0.0) || (a >= 0.0 && b < 0.0)) {
      const double frac = a / (a - b);
      crossings.push_back(times[i - 1] + frac * (times[i] - times[i - 1]));
    }
  }
  if (crossings.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return 2.0 * (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
}

void write_csv(const Trajectory& t, std::ostream& out) {
  const auto n = t.states.empty() ? 0 : t.states.front().q.size();
  const auto k = t.states.empty() ? 0 : t.states.front().I.size();
  out << "t";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",q" << i;
  for (Eigen::Index i = 1; i <= n; ++i) out << ",p" << i;
  for (Eigen::Index i = 1; i <= k; ++i) out << ",I" << i;
  out << ",H,Casimir\n";
  for (std::size_t r = 0; r < t.size(); ++r) {
    const WongState& s = t.states[r];
    out << fmt(t.times[r]);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << fmt(s.q(i));
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << fmt(s.p(i));
    for (Eigen::Index i = 0; i < k; ++i) out << ',' << fmt(s.I(i));
    out << ',' << fmt(t.energy[r]) << ',' << fmt(t.casimir[r]) << '\n';
  }
}

void write_csv(const Trajectory& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  write_csv(t, out);
  if (!out) fail(ErrorCode::IoError, "failed writing " + path.string());
}

Trajectory read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::ConfigParseError, "trajectory CSV is empty");
  int n = 0, k = 0;
  {
    std::stringstream header(line);
    std::string col;
    while (std::getline(header, col, ',')) {
      if (col.starts_with('q')) ++n;
      if (col.starts_with('I')) ++k;
    }
  }
  const int width = 1 + 2 * n + k + 2;
  Trajectory t;
  std::vector<double> row(width);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int c = 0; c < width; ++c) {
      auto [next, ec] = std::from_chars(p, end, row[c]);
      if (ec != std::errc()) fail(ErrorCode::ConfigParseError, "bad number in trajectory CSV");
      p = next;
      if (c + 1 < width) {
        if (p == end || *p != ',') fail(ErrorCode::ConfigParseError, "short row in trajectory CSV");
        ++p;
      }
    }
    WongState s{Vector(n), Vector(n), Vector(k)};
    for (int i = 0; i < n; ++i) s.q(i) = row[1 + i];
    for (int i = 0; i < n; ++i) s.p(i) = row[1 + n + i];
    for (int i = 0; i < k; ++i) s.I(i) = row[1 + 2 * n + i];
    t.times.push_back(row[0]);
    t.states.push_back(std::move(s));
    t.energy.push_back(row[width - 2]);
    t.casimir.push_back(row[width - 1]);
  }
  return t;
}

Trajectory read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  return read_csv(in);
}

}  // namespace gp
