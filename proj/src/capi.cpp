#include "gp/gp.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "gp/commands.hpp"
#include "gp/errors.hpp"

struct gp_algebra {
  gp::AlgebraPtr L;
};

struct gp_config {
  gp::RunConfig c;
};

struct gp_trajectory {
  gp::Trajectory t;
};

namespace {

thread_local std::string last_error;

gp_status status_of(gp::ErrorCode code) { return static_cast<gp_status>(static_cast<int>(code) + 1); }

template <class Fn>
gp_status guard(Fn&& fn) noexcept {
  try {
    fn();
    last_error.clear();
    return GP_OK;
  } catch (const gp::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GP_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return GP_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) gp::fail(gp::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gp::Vector view(const double* p, int n) { return Eigen::Map<const gp::Vector>(p, n); }

void copy_out(const gp::Vector& v, double* out) {
  if (out) Eigen::Map<gp::Vector>(out, v.size()) = v;
}

gp_status run_command(const gp_config* c, int* exit_code, char** report, char** summary,
                      gp::CommandResult (*cmd)(const gp::RunConfig&)) {
  if (report) *report = nullptr;
  if (summary) *summary = nullptr;
  return guard([&] {
    require(c, "config");
    const gp::CommandResult r = cmd(c->c);
    if (exit_code) *exit_code = r.exit_code;
    if (report) *report = dup(r.report.dump(2));
    if (summary) *summary = dup(r.summary);
  });
}

}  // namespace

extern "C" {

const char* gp_version(void) { return "1.0.0"; }

const char* gp_status_name(gp_status status) {
  if (status == GP_OK) return "Ok";
  if (status == GP_ERR_INTERNAL) return "InternalError";
  const int code = static_cast<int>(status) - 1;
  if (code < 0 || code > static_cast<int>(gp::ErrorCode::IoError)) return "UnknownStatus";
  return gp::to_string(static_cast<gp::ErrorCode>(code));
}

const char* gp_last_error(void) { return last_error.c_str(); }

int gp_exit_code(gp_status status) {
  if (status == GP_OK) return GP_EXIT_OK;
  if (status == GP_ERR_INTERNAL) return GP_EXIT_CONFIG;
  return gp::exit_code_for(static_cast<gp::ErrorCode>(static_cast<int>(status) - 1));
}

void gp_string_free(char* s) { std::free(s); }

gp_status gp_algebra_load(const char* spec, gp_algebra** out) {
  return guard([&] {
    require(spec, "spec");
    require(out, "out");
    *out = new gp_algebra{gp::load_algebra(std::string_view(spec))};
  });
}

void gp_algebra_free(gp_algebra* a) { delete a; }

int gp_algebra_dim(const gp_algebra* a) { return a ? a->L->dim() : 0; }

gp_status gp_algebra_structure_constant(const gp_algebra* a, int k, int i, int j, double* out) {
  return guard([&] {
    require(a, "algebra");
    require(out, "out");
    const int n = a->L->dim();
    if (k < 0 || i < 0 || j < 0 || k >= n || i >= n || j >= n)
      gp::fail(gp::ErrorCode::DimensionMismatch, "structure constant index out of range");
    *out = a->L->c(k, i, j);
  });
}

gp_status gp_algebra_bracket(const gp_algebra* a, const double* X, const double* Y, double* out) {
  return guard([&] {
    require(a, "algebra");
    require(X, "X");
    require(Y, "Y");
    require(out, "out");
    const int n = a->L->dim();
    copy_out(gp::bracket_vectors(*a->L, view(X, n), view(Y, n)), out);
  });
}

gp_status gp_algebra_ad_star(const gp_algebra* a, const double* X, const double* xi, double* out) {
  return guard([&] {
    require(a, "algebra");
    require(X, "X");
    require(xi, "xi");
    require(out, "out");
    const int n = a->L->dim();
    copy_out(gp::ad_star(*a->L, view(X, n), view(xi, n)), out);
  });
}

gp_status gp_algebra_killing_form(const gp_algebra* a, double* out) {
  return guard([&] {
    require(a, "algebra");
    require(out, "out");
    const gp::Matrix B = gp::killing_form(*a->L);
    const int n = a->L->dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i * n + j] = B(i, j);
  });
}

gp_status gp_algebra_casimir(const gp_algebra* a, const double* xi, double* out) {
  return guard([&] {
    require(a, "algebra");
    require(xi, "xi");
    require(out, "out");
    *out = gp::quadratic_casimir(*a->L, view(xi, a->L->dim()));
  });
}

gp_status gp_algebra_jacobi_defect(const gp_algebra* a, double* out) {
  return guard([&] {
    require(a, "algebra");
    require(out, "out");
    *out = gp::jacobi_defect(*a->L);
  });
}

gp_status gp_lie_poisson_bracket(const gp_algebra* a, const char* f, const char* g, const double* x, double* out) {
  return guard([&] {
    require(a, "algebra");
    require(f, "f");
    require(g, "g");
    require(x, "x");
    require(out, "out");
    *out = gp::lie_poisson_bracket(*a->L, gp::as_field(gp::Expression(f)), gp::as_field(gp::Expression(g)),
                                   view(x, a->L->dim()));
  });
}

gp_status gp_config_default(gp_config** out) {
  return guard([&] {
    require(out, "out");
    *out = new gp_config{};
  });
}

gp_status gp_config_load(const char* path, gp_config** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new gp_config{gp::RunConfig::from_file(path)};
  });
}

gp_status gp_config_parse(const char* json_text, gp_config** out) {
  return guard([&] {
    require(json_text, "json_text");
    require(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
      gp::fail(gp::ErrorCode::ConfigParseError, e.what());
    }
    *out = new gp_config{gp::RunConfig::from_json(j)};
  });
}

void gp_config_free(gp_config* c) { delete c; }

gp_status gp_config_set_seed(gp_config* c, uint64_t seed) {
  return guard([&] {
    require(c, "config");
    c->c.seed = seed;
  });
}

gp_status gp_config_set_output_dir(gp_config* c, const char* dir) {
  return guard([&] {
    require(c, "config");
    require(dir, "dir");
    c->c.output_dir = dir;
  });
}

gp_status gp_config_set_algebra(gp_config* c, const char* spec) {
  return guard([&] {
    require(c, "config");
    require(spec, "spec");
    const std::string s(spec);
    if (!s.empty() && s.front() == '{') {
      try {
        c->c.algebra = nlohmann::json::parse(s);
      } catch (const nlohmann::json::exception& e) {
        gp::fail(gp::ErrorCode::ConfigParseError, e.what());
      }
    } else {
      gp::builtin_algebra(s);
      c->c.algebra = s;
    }
  });
}

gp_status gp_verify(const gp_config* c, int* exit_code, char** report, char** summary) {
  return run_command(c, exit_code, report, summary, &gp::cmd_verify);
}

gp_status gp_reduce(const gp_config* c, int* exit_code, char** report, char** summary) {
  return run_command(c, exit_code, report, summary, &gp::cmd_reduce);
}

gp_status gp_simulate(const gp_config* c, int* exit_code, char** report, char** summary) {
  return run_command(c, exit_code, report, summary, &gp::cmd_simulate);
}

gp_status gp_root_system(const gp_config* c, int* exit_code, char** report, char** summary) {
  return run_command(c, exit_code, report, summary, &gp::cmd_rootsys);
}

gp_status gp_bracket(const gp_config* c, const char* engine, const char* f, const char* g, const char* point_json,
                     double* out) {
  return guard([&] {
    require(c, "config");
    require(engine, "engine");
    require(f, "f");
    require(g, "g");
    require(point_json, "point_json");
    require(out, "out");
    nlohmann::json point;
    try {
      point = nlohmann::json::parse(point_json);
    } catch (const nlohmann::json::exception& e) {
      gp::fail(gp::ErrorCode::ConfigParseError, std::string("point: ") + e.what());
    }
    *out = gp::cmd_bracket(c->c, engine, f, g, point);
  });
}

gp_status gp_wong_field(const gp_config* c, const double* q, const double* p, const double* I, double* dq, double* dp,
                        double* dI) {
  return guard([&] {
    require(c, "config");
    require(q, "q");
    require(p, "p");
    require(I, "I");
    const gp::AlgebraPtr L = gp::config_algebra(c->c);
    const gp::VectorPotential A = gp::config_potential(c->c, *L);
    const int n = A.n_base();
    const gp::WongDerivative d = gp::wong_vector_field(*L, A, gp::WongState{view(q, n), view(p, n), view(I, L->dim())});
    copy_out(d.q, dq);
    copy_out(d.p, dp);
    copy_out(d.I, dI);
  });
}

gp_status gp_trajectory_integrate(const gp_config* c, gp_trajectory** out) {
  return guard([&] {
    require(c, "config");
    require(out, "out");
    if (!c->c.initial_state) gp::fail(gp::ErrorCode::ConfigParseError, "config has no initial_state");
    const gp::AlgebraPtr L = gp::config_algebra(c->c);
    *out = new gp_trajectory{
        gp::integrate_wong(*L, gp::config_potential(c->c, *L), *c->c.initial_state, c->c.dt, c->c.steps)};
  });
}

gp_status gp_trajectory_read_csv(const char* path, gp_trajectory** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new gp_trajectory{gp::read_csv(std::filesystem::path(path))};
  });
}

gp_status gp_trajectory_write_csv(const gp_trajectory* t, const char* path) {
  return guard([&] {
    require(t, "trajectory");
    require(path, "path");
    gp::write_csv(t->t, std::filesystem::path(path));
  });
}

void gp_trajectory_free(gp_trajectory* t) { delete t; }

size_t gp_trajectory_size(const gp_trajectory* t) { return t ? t->t.size() : 0; }

int gp_trajectory_blew_up(const gp_trajectory* t) { return t && t->t.blew_up ? 1 : 0; }

int gp_trajectory_base_dim(const gp_trajectory* t) {
  return t && t->t.size() ? static_cast<int>(t->t.states.front().q.size()) : 0;
}

int gp_trajectory_charge_dim(const gp_trajectory* t) {
  return t && t->t.size() ? static_cast<int>(t->t.states.front().I.size()) : 0;
}

gp_status gp_trajectory_sample(const gp_trajectory* t, size_t i, double* time, double* q, double* p, double* I,
                               double* energy, double* casimir) {
  return guard([&] {
    require(t, "trajectory");
    if (i >= t->t.size()) gp::fail(gp::ErrorCode::InvalidArgument, "sample index out of range");
    const gp::WongState& s = t->t.states[i];
    if (time) *time = t->t.times[i];
    copy_out(s.q, q);
    copy_out(s.p, p);
    copy_out(s.I, I);
    if (energy) *energy = t->t.energy[i];
    if (casimir) *casimir = t->t.casimir[i];
  });
}

}  // extern "C"
