#include "doctest.h"

#include "fixtures.hpp"
#include "gp/errors.hpp"
#include "gp/poisson.hpp"

using namespace gp;
using namespace gp::test;

namespace {

PhasePoint dual_point(const Vector& x) { return PhasePoint{{}, {}, x, std::nullopt}; }

}  // namespace

TEST_CASE("so3 coordinate bracket") {
  const auto L = builtin_algebra("so3");
  const Vector x = Vector::Unit(3, 2);
  const auto x1 = coordinate_field(FrameKind::DX, 0), x2 = coordinate_field(FrameKind::DX, 1);
  CHECK(lie_poisson_bracket(*L, x1, x2, x) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(lie_poisson_bracket(*L, x2, x1, x) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(lie_poisson_bracket(*L, x1, x2, Vector::Unit(3, 0))) < 1e-12);
}

TEST_CASE("u1 Lie-Poisson bracket vanishes") {
  const auto L = builtin_algebra("u1");
  CHECK(lie_poisson_bracket(*L, field("x1^3"), field("sin(x1)"), Vector::Constant(1, 0.4)) == 0.0);
}

TEST_CASE("canonical bracket and Hamiltonian vector field") {
  const BivectorEngine eng(canonical_bivector(2));
  const PhasePoint pt{Vector::Constant(2, 0.5), Vector::Constant(2, -0.25), {}, std::nullopt};
  const auto q1 = coordinate_field(FrameKind::DQ, 0), p1 = coordinate_field(FrameKind::DP, 0);
  CHECK(eng.bracket(p1, q1, pt, {}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(eng.bracket(p1, coordinate_field(FrameKind::DQ, 1), pt, {})) < 1e-12);

  const auto H = field("0.5*(p1^2 + p2^2) + 0.5*(q1^2 + 3*q2^2)");
  const std::vector<ScalarField> coords = {q1, coordinate_field(FrameKind::DQ, 1), p1,
                                           coordinate_field(FrameKind::DP, 1)};
  const Vector X = hamiltonian_vector_field(eng, H, pt, coords);
  CHECK(X(0) == doctest::Approx(-0.25).epsilon(1e-8));
  CHECK(X(1) == doctest::Approx(-0.25).epsilon(1e-8));
  CHECK(X(2) == doctest::Approx(-0.5).epsilon(1e-8));
  CHECK(X(3) == doctest::Approx(-1.5).epsilon(1e-8));
}

TEST_CASE("frame field names") {
  CHECK(FrameField::parse("dq_2").kind == FrameKind::DQ);
  CHECK(FrameField::parse("dq_2").index == 1);
  CHECK(FrameField::parse("dI_3").kind == FrameKind::DX);
  CHECK(FrameField::parse("Z_1").kind == FrameKind::DX);
  CHECK(FrameField::parse("R_2").kind == FrameKind::Right);
  CHECK(FrameField::parse("L_1").kind == FrameKind::Left);
  for (const char* bad : {"dq_0", "dy_1", "L1", "", "R_x"}) {
    CAPTURE(std::string(bad));
    try {
      FrameField::parse(bad);
      FAIL("expected UnresolvableFrameField");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnresolvableFrameField);
    }
  }
}

TEST_CASE("frame needs its sector") {
  const PhasePoint pt{{}, {}, Vector::Zero(3), std::nullopt};
  try {
    apply_frame(FrameField::invariant(FrameKind::Left, 0), field("x1"), pt);
    FAIL("expected UnresolvableFrameField");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnresolvableFrameField);
  }
  CHECK_THROWS_AS(apply_frame(FrameField::coordinate(FrameKind::DQ, 0), field("x1"), pt), Error);
}

TEST_CASE("bivector json round trip") {
  const auto j = nlohmann::json::parse(R"([{"a": "R_1", "b": "dx_2", "coeff": "-x3"},
                                          {"a": "dx_1", "b": "dx_2", "coeff": "2"}])");
  const BivectorSpec spec = BivectorSpec::from_json(j);
  CHECK(spec.terms.size() == 2);
  const nlohmann::json back = spec.to_json();
  CHECK(back.size() == 2);
  CHECK(back[0]["a"] == "R_1");
  CHECK(back[0]["coeff"] == "-x3");
  CHECK(BivectorSpec::from_json(back).terms[1].b.index == 1);
  BivectorSpec with_block = spec;
  with_block.blocks.push_back(MatrixBlock{{}, [](const PhasePoint&) { return Matrix(); }});
  CHECK_THROWS_AS(with_block.to_json(), Error);
}

TEST_CASE("tstar bracket of a pure group function with x_i") {
  // {phi, x_i} = R_i phi for phi depending on g only
  const auto L = builtin_algebra("su2");
  Rng rng(8);
  const TrivializedCovector pt{random_vector(rng, 3), gp::exp(L, random_vector(rng, 3))};
  const auto phi = field("re_g11*im_g12 + im_g22");
  for (int i = 0; i < 3; ++i) {
    const double lhs = tstar_g_bracket(*L, phi, coordinate_field(FrameKind::DX, i), pt);
    const double rhs = apply_frame(FrameField::invariant(FrameKind::Right, i), phi, pt.point());
    CHECK(lhs == doctest::Approx(-rhs).epsilon(1e-8));
  }
}

TEST_CASE("property: Lie-Poisson antisymmetry, Leibniz, Jacobi") {
  Rng rng(31);
  for (const char* name : {"so3", "su2", "su3"}) {
    CAPTURE(std::string(name));
    const auto L = builtin_algebra(name);
    const LiePoissonEngine eng(L);
    const auto xs = vars("x", L->dim());
    for (int s = 0; s < 5; ++s) {
      const auto f = field(random_polynomial(rng, xs)), g = field(random_polynomial(rng, xs)),
                 h = field(random_polynomial(rng, xs));
      const PhasePoint pt = dual_point(random_vector(rng, L->dim()));
      CHECK(std::abs(eng.bracket(f, g, pt, {}) + eng.bracket(g, f, pt, {})) <= 1e-12);
      const double leib = eng.bracket(times(f, g), h, pt, {}) -
                          (f(pt) * eng.bracket(g, h, pt, {}) + g(pt) * eng.bracket(f, h, pt, {}));
      CHECK(std::abs(leib) <= 5e-5);
      CHECK(std::abs(jacobiator(eng, f, g, h, pt)) <= 1e-4);
    }
  }
}

TEST_CASE("property: tstar engine equals its bivector form") {
  Rng rng(41);
  for (const char* name : {"so3", "su2"}) {
    CAPTURE(std::string(name));
    const auto L = builtin_algebra(name);
    const TStarGEngine direct(L);
    const BivectorEngine via_spec(tstar_g_bivector(*L));
    const auto xs = vars("x", 3), gs = group_vars(*L);
    for (int s = 0; s < 10; ++s) {
      const auto f = field(mixed_polynomial(rng, xs, gs)), g = field(mixed_polynomial(rng, xs, gs));
      const PhasePoint pt{{}, {}, random_vector(rng, 3), gp::exp(L, random_vector(rng, 3))};
      CHECK(std::abs(direct.bracket(f, g, pt, {}) - via_spec.bracket(f, g, pt, {})) <= 5e-5);
      CHECK(std::abs(direct.bracket(f, g, pt, {}) + direct.bracket(g, f, pt, {})) <= 1e-12);
    }
    const auto f = field(mixed_polynomial(rng, xs, gs)), g = field(mixed_polynomial(rng, xs, gs)),
               h = field(mixed_polynomial(rng, xs, gs));
    const PhasePoint pt{{}, {}, random_vector(rng, 3), gp::exp(L, random_vector(rng, 3))};
    CHECK(std::abs(jacobiator(direct, f, g, h, pt)) <= 1e-4);
  }
}

TEST_CASE("casimir commutes with everything") {
  Rng rng(43);
  for (const char* name : {"so3", "su2", "su3"}) {
    CAPTURE(std::string(name));
    const auto L = builtin_algebra(name);
    const auto xs = vars("x", L->dim());
    const ScalarField C = [L](const PhasePoint& pt) { return quadratic_casimir(*L, pt.x); };
    for (int s = 0; s < 5; ++s) {
      const auto f = field(random_polynomial(rng, xs));
      CHECK(std::abs(lie_poisson_bracket(*L, C, f, random_vector(rng, L->dim()))) <= 1e-6);
    }
  }
}

TEST_CASE("non-finite field is reported") {
  const auto L = builtin_algebra("so3");
  try {
    lie_poisson_bracket(*L, field("log(x1)"), field("x2"), -Vector::Ones(3));
    FAIL("expected NonFiniteValue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteValue);
  }
}
