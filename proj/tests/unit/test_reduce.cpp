#include "doctest.h"

#include "fixtures.hpp"
#include "gp/errors.hpp"
#include "gp/reduce.hpp"

using namespace gp;
using namespace gp::test;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

std::vector<ScalarField> wong_coords(int n, int dim) {
  std::vector<ScalarField> c;
  for (int i = 0; i < n; ++i) c.push_back(coordinate_field(FrameKind::DQ, i));
  for (int i = 0; i < n; ++i) c.push_back(coordinate_field(FrameKind::DP, i));
  for (int i = 0; i < dim; ++i) c.push_back(coordinate_field(FrameKind::DX, i));
  return c;
}

}  // namespace

TEST_CASE("su2 root system") {
  const auto R = root_system(builtin_algebra("su2"));
  REQUIRE(R.rank() == 1);
  REQUIRE(R.positive_roots.size() == 1);
  const Root& r = R.positive_roots[0];
  CHECK(std::abs(r.alpha(0)) == doctest::Approx(1.0));
  CHECK(R.killing_dual(0, 0) == doctest::Approx(0.5));
  CHECK(r.norm_sq == doctest::Approx(0.5));
  const Matrix B = killing_form(*R.algebra);
  CHECK(-r.U.dot(B * r.U) == doctest::Approx(1.0 / r.norm_sq));
  CHECK(std::abs(r.U.dot(B * r.V)) < 1e-12);
  CHECK(R.validation_defect < 1e-10);
  CHECK(root_system_defect(R) < 1e-10);
  const auto j = to_json(R);
  CHECK(j["positive_roots"].size() == 1);
}

TEST_CASE("su3 root system is A2") {
  const auto R = root_system(builtin_algebra("su3"));
  REQUIRE(R.rank() == 2);
  REQUIRE(R.positive_roots.size() == 3);
  for (const auto& r : R.positive_roots) CHECK(r.norm_sq == doctest::Approx(R.positive_roots[0].norm_sq));
  bool sum_found = false;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        if (a != b && b != c && a != c &&
            max_abs(R.positive_roots[a].alpha + R.positive_roots[b].alpha - R.positive_roots[c].alpha) < 1e-10)
          sum_found = true;
  CHECK(sum_found);
  CHECK(root_system_defect(R) < 1e-10);
}

TEST_CASE("u1 has no roots, so3 has no built-in Cartan table") {
  CHECK(root_system(builtin_algebra("u1")).positive_roots.empty());
  CHECK(code_of([] { root_system(builtin_algebra("so3")); }) == ErrorCode::UnsupportedAlgebra);
}

TEST_CASE("momentum maps") {
  const MomentumMap id = MomentumMap::identity(3);
  const Vector z = (Vector(3) << 0.4, -0.2, 0.9).finished();
  CHECK(max_abs(id(z) - z) == 0.0);
  CHECK(max_abs(id.jacobian(z) - Matrix::Identity(3, 3)) < 1e-9);
  CHECK_FALSE(id.is_constant());
  const MomentumMap c = MomentumMap::from_json(nlohmann::json::parse(R"({"kind": "constant", "xi": [0, 0, 2]})"), 3);
  CHECK(c.is_constant());
  CHECK(c(z)(2) == 2.0);
  const MomentumMap sq = MomentumMap::from_json(nlohmann::json::parse(R"(["z1^2", "z2*z3", "1"])"), 3);
  CHECK(sq.jacobian(z)(0, 0) == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(sq.jacobian(z)(2, 1) == doctest::Approx(-0.2).epsilon(1e-9));
  CHECK(code_of([] { MomentumMap(2, {"q1", "z1"}); }) == ErrorCode::ConfigParseError);
  CHECK_THROWS_AS(MomentumMap::from_json(nlohmann::json::parse(R"(["z1"])"), 3), Error);
}

TEST_CASE("kernel rank of a diagonal matrix") {
  Matrix M = Matrix::Zero(4, 4);
  M(0, 0) = 3.0;
  M(1, 1) = 1e-12;
  M(2, 2) = -1.0;
  const KernelRank kr = kernel_rank(M);
  CHECK(kr.rank == 2);
  CHECK(kr.kernel.cols() == 2);
  CHECK(max_abs(M * kr.kernel) < 1e-11);
  CHECK(kernel_rank(Matrix::Zero(3, 3)).rank == 0);
}

TEST_CASE("omega_f ranks") {
  const auto L = builtin_algebra("su2");
  const Vector z = (Vector(3) << 0.4, -0.2, 0.9).finished();

  const Matrix spin = omega_f_matrix(*L, MomentumMap::constant(Vector::Unit(3, 2)), z);
  CHECK(max_abs(spin + spin.transpose()) < 1e-12);
  const KernelRank kr = kernel_rank(spin);
  CHECK(kr.rank == 2);
  const Matrix P = kr.kernel * kr.kernel.transpose();
  for (int i = 2; i < 6; ++i) CHECK((P * Vector::Unit(6, i) - Vector::Unit(6, i)).norm() < 1e-9);

  CHECK(kernel_rank(omega_f_matrix(*L, MomentumMap::identity(3), z)).rank == 6);
  CHECK(kernel_rank(omega_f_matrix(*L, MomentumMap(3, {"0", "0", "0"}), z)).rank == 0);
}

TEST_CASE("coadjoint orbits") {
  CHECK(coadjoint_orbit_dim(*builtin_algebra("so3"), Vector::Unit(3, 0)) == 2);
  CHECK(coadjoint_orbit_dim(*builtin_algebra("so3"), Vector::Zero(3)) == 0);
  CHECK(coadjoint_orbit_dim(*builtin_algebra("su3"), (Vector(8) << 0, 0, 1, 0, 0, 0, 0, 0.3).finished()) == 6);
  CHECK(coadjoint_orbit_dim(*builtin_algebra("su3"), Vector::Unit(8, 7)) == 4);

  const auto L = builtin_algebra("so3");
  const Vector x = (Vector(3) << 0.0, 0.0, 2.0).finished();
  const double level = quadratic_casimir(*L, x);
  const auto x1 = coordinate_field(FrameKind::DX, 0), x2 = coordinate_field(FrameKind::DX, 1);
  CHECK(coadjoint_orbit_bracket(*L, x1, x2, x, level) == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(code_of([&] { coadjoint_orbit_bracket(*L, x1, x2, x, level + 1.0); }) == ErrorCode::OffOrbit);
}

TEST_CASE("Weyl chamber walls") {
  const auto su2 = root_system(builtin_algebra("su2"));
  CHECK(code_of([&] { check_weyl_chamber(su2, Vector::Zero(1)); }) == ErrorCode::WeylWallSingularity);
  CHECK_NOTHROW(check_weyl_chamber(su2, Vector::Constant(1, 1e-3)));
  const auto su3 = root_system(builtin_algebra("su3"));
  CHECK(code_of([&] { check_weyl_chamber(su3, Vector::Zero(2)); }) == ErrorCode::WeylWallSingularity);
  // orthogonal to the first root under B*
  const Vector a = su3.positive_roots[0].alpha;
  const Vector perp = (Vector(2) << -(su3.killing_dual * a)(1), (su3.killing_dual * a)(0)).finished();
  CHECK(code_of([&] { check_weyl_chamber(su3, perp); }) == ErrorCode::WeylWallSingularity);
  CHECK(code_of([&] { check_weyl_chamber(su3, Vector::Zero(3)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("su2 Cartan bracket matches the closed form") {
  const auto L = builtin_algebra("su2");
  const auto R = root_system(L);
  Rng rng(61);
  const auto zs = vars("z", 1), gs = group_vars(2);
  for (int s = 0; s < 5; ++s) {
    const auto f = field(mixed_polynomial(rng, zs, gs)), g = field(mixed_polynomial(rng, zs, gs));
    const PhasePoint pt{{}, {}, Vector::Constant(1, 0.2 + std::abs(random_vector(rng, 1)(0))),
                        gp::exp(L, random_vector(rng, 3))};
    // closed form in the basis Y = -X: dp ^ LY_3 - (1/p) LY_1 ^ LY_2 with p = -z
    const auto LY = [&](const ScalarField& F, int i) {
      return -apply_frame(FrameField::invariant(FrameKind::Left, i), F, pt);
    };
    const auto dp = [&](const ScalarField& F) { return -apply_frame(FrameField::coordinate(FrameKind::DX, 0), F, pt); };
    const double p = -pt.x(0);
    const double closed = dp(f) * LY(g, 2) - dp(g) * LY(f, 2) - (LY(f, 0) * LY(g, 1) - LY(g, 0) * LY(f, 1)) / p;
    CHECK(std::abs(cartan_reduced_bracket(R, f, g, pt) - closed) <= 5e-5);
  }
  const PhasePoint wall{{}, {}, Vector::Zero(1), identity_element(L)};
  CHECK(code_of([&] { cartan_reduced_bracket(R, field("z1"), field("re_g11"), wall); }) ==
        ErrorCode::WeylWallSingularity);
}

TEST_CASE("gauged bracket values") {
  const auto L = builtin_algebra("so3");
  const auto A = VectorPotential::expression(3, 3, {{0, 0, "q2*q3"}, {1, 2, "q1^2 - q3"}, {2, 1, "0.5*q1*q2"}, {0, 2, "0.25*q2"}});
  const WongState s{(Vector(3) << 0.3, -0.7, 1.1).finished(), (Vector(3) << 0.1, 0.2, 0.3).finished(),
                    (Vector(3) << 0.5, -0.25, 2.0).finished()};
  const auto p1 = coordinate_field(FrameKind::DP, 0), p2 = coordinate_field(FrameKind::DP, 1);
  const auto q1 = coordinate_field(FrameKind::DQ, 0), I1 = coordinate_field(FrameKind::DX, 0),
             I2 = coordinate_field(FrameKind::DX, 1);
  CHECK(gauged_bracket(L, A, p1, p2, s) == doctest::Approx(1.2297875).epsilon(1e-7));
  CHECK(gauged_bracket(L, A, p1, I2, s) == doctest::Approx(-1.54).epsilon(1e-7));
  CHECK(gauged_bracket(L, A, p1, q1, s) == doctest::Approx(1.0).epsilon(1e-9));
  // -sum I_i c^i_12 = -I_3
  CHECK(gauged_bracket(L, A, I1, I2, s) == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("property: gauged bracket axioms on coordinate triples") {
  Rng rng(67);
  const auto L = builtin_algebra("so3");
  const auto A = VectorPotential::expression(3, 3, {{0, 0, "q2*q3"}, {1, 2, "q1^2 - q3"}, {2, 1, "0.5*q1*q2"}});
  const BivectorEngine eng(gauged_bivector(L, A));
  const auto c = wong_coords(3, 3);
  const PhasePoint pt{random_vector(rng, 3), random_vector(rng, 3), random_vector(rng, 3), std::nullopt};
  double worst = 0.0;
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = a + 1; b < c.size(); ++b) {
      CHECK(std::abs(eng.bracket(c[a], c[b], pt, {}) + eng.bracket(c[b], c[a], pt, {})) <= 1e-12);
      for (std::size_t d = b + 1; d < c.size(); ++d)
        worst = std::max(worst, std::abs(jacobiator(eng, c[a], c[b], c[d], pt)));
    }
  CHECK(worst <= 1e-4);
}

TEST_CASE("Cartan gauged bracket satisfies Jacobi") {
  Rng rng(71);
  const auto L = builtin_algebra("su2");
  const auto R = root_system(L);
  const auto A = VectorPotential::expression(2, 3, {{0, 0, "q2"}, {1, 1, "q1*q2"}, {2, 0, "0.2*q1"}});
  const BivectorEngine eng(cartan_gauged_bivector(R, A));
  const PhasePoint pt{random_vector(rng, 2), random_vector(rng, 2), Vector::Constant(1, 0.8), gp::exp(L, random_vector(rng, 3))};
  const auto f = field("re_g11*z1 + p1*q2"), g = field("im_g21*p2 + q1*z1^2"), h = field("re_g12*p1 + p2*im_g22");
  CHECK(std::abs(jacobiator(eng, f, g, h, pt)) <= 1e-4);
  CHECK(std::abs(eng.bracket(f, g, pt, {}) + eng.bracket(g, f, pt, {})) <= 1e-12);
  CHECK(cartan_gauged_bracket(R, A, f, g, pt) == doctest::Approx(eng.bracket(f, g, pt, {})));
  // zero potential: pure canonical part plus the Cartan-reduced part
  const auto zero = VectorPotential::zero(2, 3);
  const auto q1 = coordinate_field(FrameKind::DQ, 0), p1 = coordinate_field(FrameKind::DP, 0);
  CHECK(cartan_gauged_bracket(R, zero, p1, q1, pt) == doctest::Approx(1.0).epsilon(1e-9));
}
