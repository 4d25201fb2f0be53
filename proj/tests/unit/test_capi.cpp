#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "gp/gp.h"

namespace {

std::string data(const char* name) { return (std::filesystem::path(GP_TEST_DATA_DIR) / name).string(); }

std::string scratch(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / ("gp_capi_" + std::string(name));
  std::filesystem::remove_all(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(gp_version()) > 0);
  CHECK(std::string(gp_status_name(GP_OK)) == "Ok");
  CHECK(std::string(gp_status_name(GP_ERR_JACOBI)) == "JacobiViolation");
  CHECK(gp_exit_code(GP_OK) == GP_EXIT_OK);
  CHECK(gp_exit_code(GP_ERR_WEYL_WALL) == GP_EXIT_NUMERICAL);
  CHECK(gp_exit_code(GP_ERR_CONFIG_PARSE) == GP_EXIT_CONFIG);
  CHECK(gp_exit_code(GP_ERR_EMPTY_TRAJECTORY) == GP_EXIT_CHECK_FAILED);
}

TEST_CASE("algebra handle") {
  gp_algebra* a = nullptr;
  REQUIRE(gp_algebra_load("so3", &a) == GP_OK);
  CHECK(gp_algebra_dim(a) == 3);
  double c = 0.0;
  CHECK(gp_algebra_structure_constant(a, 2, 0, 1, &c) == GP_OK);
  CHECK(c == 1.0);
  CHECK(gp_algebra_structure_constant(a, 3, 0, 1, &c) == GP_ERR_DIMENSION_MISMATCH);

  const double X[3] = {1, 0, 0}, Y[3] = {0, 1, 0};
  double out[3];
  CHECK(gp_algebra_bracket(a, X, Y, out) == GP_OK);
  CHECK(out[2] == 1.0);
  double B[9];
  CHECK(gp_algebra_killing_form(a, B) == GP_OK);
  CHECK(B[0] == doctest::Approx(-2.0));
  CHECK(B[1] == 0.0);
  double cas = 0.0;
  CHECK(gp_algebra_casimir(a, X, &cas) == GP_OK);
  CHECK(cas == doctest::Approx(-0.5));
  double jd = 1.0;
  CHECK(gp_algebra_jacobi_defect(a, &jd) == GP_OK);
  CHECK(jd == 0.0);
  const double x[3] = {0, 0, 1};
  double br = 0.0;
  CHECK(gp_lie_poisson_bracket(a, "x1", "x2", x, &br) == GP_OK);
  CHECK(br == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(gp_lie_poisson_bracket(a, "x1 +", "x2", x, &br) == GP_ERR_EXPRESSION_PARSE);
  CHECK(std::strlen(gp_last_error()) > 0);
  gp_algebra_free(a);

  gp_algebra* bad = nullptr;
  CHECK(gp_algebra_load("so7", &bad) == GP_ERR_UNSUPPORTED_ALGEBRA);
  CHECK(bad == nullptr);
  CHECK(gp_algebra_load(R"({"dim": 4, "c": [[[4, 1, 2], 1.0], [[4, 1, 3], 1.0], [[2, 3, 4], 1.0]]})", &bad) ==
        GP_ERR_JACOBI);
  CHECK(gp_algebra_load(nullptr, &bad) == GP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("config and commands") {
  gp_config* c = nullptr;
  CHECK(gp_config_load("/nonexistent.json", &c) == GP_ERR_IO);
  CHECK(gp_config_parse("{\"bogus\": 1}", &c) == GP_ERR_CONFIG_PARSE);
  REQUIRE(gp_config_load(data("so3_default.json").c_str(), &c) == GP_OK);
  CHECK(gp_config_set_output_dir(c, scratch("verify").c_str()) == GP_OK);
  CHECK(gp_config_set_seed(c, 5) == GP_OK);
  int code = -1;
  char* report = nullptr;
  char* summary = nullptr;
  CHECK(gp_verify(c, &code, &report, &summary) == GP_OK);
  CHECK(code == GP_EXIT_OK);
  REQUIRE(report != nullptr);
  CHECK(std::string(report).find("\"pass\": true") != std::string::npos);
  CHECK(std::string(summary).find("verify so3") == 0);
  gp_string_free(report);
  gp_string_free(summary);

  double v = 0.0;
  CHECK(gp_bracket(c, "lie_poisson", "x2", "x3", "{\"x\": [1, 0, 0]}", &v) == GP_OK);
  CHECK(v == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(gp_config_set_algebra(c, "su2") == GP_OK);
  CHECK(gp_bracket(c, "cartan", "z1", "re_g11", "{\"z\": [0], \"g_exp\": [0, 0, 0]}", &v) == GP_ERR_WEYL_WALL);
  CHECK(gp_config_set_algebra(c, "nope") == GP_ERR_UNSUPPORTED_ALGEBRA);
  gp_config_free(c);
}

TEST_CASE("dynamics through the C API") {
  gp_config* c = nullptr;
  REQUIRE(gp_config_load(data("hedgehog.json").c_str(), &c) == GP_OK);
  const double q[3] = {1.0, 0.5, -0.3}, p[3] = {0.2, -0.4, 0.7}, I[3] = {0.3, -0.6, 0.8};
  double dq[3], dp[3], dI[3];
  REQUIRE(gp_wong_field(c, q, p, I, dq, dp, dI) == GP_OK);
  CHECK(dq[2] == 0.7);
  CHECK(dp[0] == doctest::Approx(-0.0862));
  CHECK(dI[0] == doctest::Approx(-0.454));

  gp_trajectory* t = nullptr;
  REQUIRE(gp_trajectory_integrate(c, &t) == GP_OK);
  CHECK(gp_trajectory_size(t) == 10001);
  CHECK(gp_trajectory_blew_up(t) == 0);
  CHECK(gp_trajectory_base_dim(t) == 3);
  CHECK(gp_trajectory_charge_dim(t) == 3);
  const std::string path = scratch("traj") + ".csv";
  REQUIRE(gp_trajectory_write_csv(t, path.c_str()) == GP_OK);
  gp_trajectory* back = nullptr;
  REQUIRE(gp_trajectory_read_csv(path.c_str(), &back) == GP_OK);
  REQUIRE(gp_trajectory_size(back) == gp_trajectory_size(t));
  for (std::size_t i : {std::size_t{0}, std::size_t{4321}, std::size_t{10000}}) {
    double ta, tb, qa[3], qb[3], Ia[3], Ib[3], ea, eb;
    CHECK(gp_trajectory_sample(t, i, &ta, qa, nullptr, Ia, &ea, nullptr) == GP_OK);
    CHECK(gp_trajectory_sample(back, i, &tb, qb, nullptr, Ib, &eb, nullptr) == GP_OK);
    CHECK(ta == tb);
    CHECK(std::memcmp(qa, qb, sizeof qa) == 0);
    CHECK(std::memcmp(Ia, Ib, sizeof Ia) == 0);
    CHECK(ea == eb);
  }
  CHECK(gp_trajectory_sample(t, 10001, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr) ==
        GP_ERR_INVALID_ARGUMENT);
  gp_trajectory_free(back);
  gp_trajectory_free(t);
  gp_config_free(c);
}

TEST_CASE("simulate and reduce through the C API") {
  gp_config* c = nullptr;
  REQUIRE(gp_config_load(data("blowup.json").c_str(), &c) == GP_OK);
  gp_config_set_output_dir(c, scratch("blowup").c_str());
  int code = -1;
  CHECK(gp_simulate(c, &code, nullptr, nullptr) == GP_OK);
  CHECK(code == GP_EXIT_NUMERICAL);
  gp_config_free(c);

  REQUIRE(gp_config_load(data("spinning.json").c_str(), &c) == GP_OK);
  gp_config_set_output_dir(c, scratch("reduce").c_str());
  char* report = nullptr;
  CHECK(gp_reduce(c, &code, &report, nullptr) == GP_OK);
  CHECK(code == GP_EXIT_OK);
  CHECK(std::string(report).find("\"rank\": 2") != std::string::npos);
  gp_string_free(report);
  CHECK(gp_root_system(c, &code, nullptr, nullptr) == GP_OK);
  gp_config_free(c);
}
