#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gp/gauge.hpp"
#include "gp/point.hpp"

namespace gp {

/// Time derivative (dq, dp, dI) of a Wong state; reuses the state layout.
using WongDerivative = WongState;

/// dq = p, dp_k = 2 sum I_i F^i_kj p_j, dI_k = -sum I_i c^i_ks A^s_j p_j.
WongDerivative wong_vector_field(const LieAlgebra& L, const VectorPotential& A, const WongState& s);
/// u1 specialization with charge e = I_1. Throws NotAbelian.
WongDerivative lorentz_field(const LieAlgebra& L, double e, const CurvatureField& F, const WongState& s);

/// One classical RK4 step; h may be negative.
WongState rk4_step(const LieAlgebra& L, const VectorPotential& A, const WongState& s, double h);

enum class Method { RK4 };

struct Trajectory {
  std::vector<double> times;
  std::vector<WongState> states;
  std::vector<double> energy;    // H = |p|^2 / 2
  std::vector<double> casimir;   // NaN when the invariant form is singular
  bool blew_up = false;
  std::string failure;

  std::size_t size() const noexcept { return times.size(); }
};

double kinetic_energy(const WongState& s);
/// Quadratic Casimir of I, or NaN when it is not defined.
double charge_casimir(const LieAlgebra& L, const Vector& I);

/// Samples t = 0, dt, ..., steps*dt. A non-finite state stops the run and
/// flags the partial trajectory instead of throwing.
Trajectory integrate_wong(const LieAlgebra& L, const VectorPotential& A, const WongState& s0, double dt, int steps,
                          Method method = Method::RK4);

struct DriftThresholds {
  double energy = 1e-8;
  double casimir = 1e-7;
};

struct InvariantReport {
  double max_energy_drift = 0.0;
  double mean_energy_drift = 0.0;
  double max_casimir_drift = 0.0;
  double mean_casimir_drift = 0.0;
  bool casimir_defined = false;
  bool pass = true;
};

/// Relative drift against the first sample (absolute when that is zero).
/// Throws EmptyTrajectory.
InvariantReport invariant_report(const Trajectory& t, const DriftThresholds& thresholds = {});

/// Twice the mean spacing between successive zero crossings of `signal`,
/// located by linear interpolation. NaN when fewer than two crossings.
double crossing_period(const std::vector<double>& times, const std::vector<double>& signal);

/// Header t,q1..qn,p1..pn,I1..Ik,H,Casimir; shortest round-trip decimals.
void write_csv(const Trajectory& t, std::ostream& out);
void write_csv(const Trajectory& t, const std::filesystem::path& path);
Trajectory read_csv(std::istream& in);
Trajectory read_csv(const std::filesystem::path& path);

}  // namespace gp
