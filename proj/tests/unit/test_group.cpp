#include "doctest.h"

#include <numbers>

#include "fixtures.hpp"
#include "gp/errors.hpp"
#include "gp/group.hpp"

using namespace gp;
using namespace gp::test;
using std::numbers::pi;

TEST_CASE("exp of zero is the identity") {
  const auto L = builtin_algebra("su3");
  CHECK(max_abs(gp::exp(L, Vector::Zero(8)).matrix - CMatrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("so3 quarter turn about e3 sends e_x to e_y") {
  const auto L = builtin_algebra("so3");
  const GroupElement g = gp::exp(L, Vector::Unit(3, 2) * (pi / 2));
  const Eigen::Vector3cd ex(1, 0, 0);
  const Eigen::Vector3cd ey(0, 1, 0);
  CHECK(max_abs(CMatrix(g.matrix * ex - ey)) < 1e-15);
  CHECK(membership_defect(g) < 1e-14);
}

TEST_CASE("su2 exp(pi X3) = diag(i, -i)") {
  const auto L = builtin_algebra("su2");
  const GroupElement g = gp::exp(L, Vector::Unit(3, 2) * pi);
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = Complex(0, 1);
  expected(1, 1) = Complex(0, -1);
  CHECK(max_abs(g.matrix - expected) < 1e-15);
}

TEST_CASE("exp needs a matrix basis") {
  const auto L = load_algebra(nlohmann::json::parse(R"({"dim": 2, "c": []})"));
  try {
    gp::exp(L, Vector::Zero(2));
    FAIL("expected NoMatrixBasis");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoMatrixBasis);
  }
}

TEST_CASE("adjoint matrix") {
  const auto so3 = builtin_algebra("so3");
  CHECK(max_abs(adjoint_matrix(*so3, identity_element(so3)) - Matrix::Identity(3, 3)) < 1e-15);
  const double t = 0.7;
  const Matrix Ad = adjoint_matrix(*so3, gp::exp(so3, Vector::Unit(3, 2) * t));
  Matrix rot = Matrix::Identity(3, 3);
  rot << std::cos(t), -std::sin(t), 0, std::sin(t), std::cos(t), 0, 0, 0, 1;
  CHECK(max_abs(Ad - rot) < 1e-14);

  Rng rng(5);
  const auto su2 = builtin_algebra("su2");
  const Matrix B = killing_form(*su2);
  for (int s = 0; s < 10; ++s) {
    const Matrix A = adjoint_matrix(*su2, gp::exp(su2, random_vector(rng, 3, 2.0)));
    CHECK(max_abs(A.transpose() * B * A - B) < 1e-12);
  }
}

TEST_CASE("property: exp inverse, Ad homomorphism, semidirect associativity") {
  Rng rng(17);
  for (const char* name : {"so3", "su2", "su3"}) {
    CAPTURE(std::string(name));
    const auto L = builtin_algebra(name);
    const int n = L->dim();
    for (int s = 0; s < 10; ++s) {
      const Vector X = random_vector(rng, n, 2.0);
      const GroupElement g = gp::exp(L, X), h = gp::exp(L, random_vector(rng, n, 2.0));
      CHECK(max_abs(multiply(g, gp::exp(L, -X)).matrix - CMatrix::Identity(g.matrix.rows(), g.matrix.rows())) < 1e-10);
      CHECK(max_abs(adjoint_matrix(*L, multiply(g, h)) - adjoint_matrix(*L, g) * adjoint_matrix(*L, h)) < 1e-9);
      CHECK(membership_defect(multiply(g, h)) < 2e-9);

      CotangentElement a{g, random_vector(rng, n)}, b{h, random_vector(rng, n)},
          c{gp::exp(L, random_vector(rng, n)), random_vector(rng, n)};
      const auto lhs = semidirect_multiply(*L, semidirect_multiply(*L, a, b), c);
      const auto rhs = semidirect_multiply(*L, a, semidirect_multiply(*L, b, c));
      CHECK(max_abs(lhs.g.matrix - rhs.g.matrix) < 1e-9);
      CHECK(max_abs(lhs.xi - rhs.xi) < 1e-9);

      const auto unit = semidirect_multiply(*L, a, semidirect_inverse(*L, a));
      CHECK(max_abs(unit.g.matrix - CMatrix::Identity(g.matrix.rows(), g.matrix.rows())) < 1e-12);
      CHECK(max_abs(unit.xi) < 1e-12);

      // zeta^l = Ad*(g) zeta^r
      const Vector x = random_vector(rng, n);
      const Vector zr = zeta_r(*L, x, g);
      for (int i = 0; i < n; ++i) CHECK(std::abs(zr(i) - x.dot(adjoint_matrix(*L, g).col(i))) < 1e-10);
      CHECK(max_abs(coadjoint(*L, g, zr) - x) < 1e-10);
    }
  }
}

TEST_CASE("semidirect examples") {
  const auto su2 = builtin_algebra("su2");
  const GroupElement e = identity_element(su2);
  const Vector xi = Vector::Unit(3, 0), eta = Vector::Unit(3, 1);
  const auto sum = semidirect_multiply(*su2, {e, xi}, {e, eta});
  CHECK(max_abs(sum.xi - (xi + eta)) == 0.0);
  const GroupElement a = gp::exp(su2, Vector::Unit(3, 2) * (pi / 2));
  const auto same = semidirect_multiply(*su2, {a, xi}, {e, Vector::Zero(3)});
  CHECK(max_abs(same.g.matrix - a.matrix) == 0.0);
  CHECK(max_abs(same.xi - xi) < 1e-15);
}

TEST_CASE("tangent group laws") {
  const auto so3 = builtin_algebra("so3");
  const GroupElement e = identity_element(so3);
  const GroupElement a = gp::exp(so3, Vector::Unit(3, 2) * (pi / 2));
  const Vector e1 = Vector::Unit(3, 0), e2 = Vector::Unit(3, 1);
  const auto r = tangent_group_multiply(*so3, {e1, a}, {e1, e});
  CHECK(max_abs(r.X - (e1 + e2)) < 1e-15);
  CHECK(max_abs(r.g.matrix - a.matrix) == 0.0);
  const auto s = tangent_group_multiply(*so3, {e1, e}, {e2, e});
  CHECK(max_abs(s.X - (e1 + e2)) == 0.0);
  const auto unit = tangent_group_multiply(*so3, {e1, a}, tangent_group_inverse(*so3, {e1, a}));
  CHECK(max_abs(unit.X) < 1e-15);
  const auto lunit = left_tangent_group_multiply(*so3, {e1, a}, left_tangent_group_inverse(*so3, {e1, a}));
  CHECK(max_abs(lunit.X) < 1e-15);
}

TEST_CASE("zeta_r examples") {
  const auto so3 = builtin_algebra("so3");
  const GroupElement e = identity_element(so3);
  CHECK(zeta_r(*so3, Vector::Unit(3, 1), e, 1) == 1.0);
  const GroupElement g = gp::exp(so3, Vector::Unit(3, 2) * (pi / 2));
  CHECK(std::abs(zeta_r(*so3, Vector::Unit(3, 0), g, 0)) < 1e-15);
  CHECK(zeta_r(*so3, Vector::Unit(3, 0), g, 1) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("invariant derivatives") {
  const auto su2 = builtin_algebra("su2");
  const GroupElement e = identity_element(su2);
  const GroupFunction constant = [](const GroupElement&) { return 4.0; };
  const GroupFunction retr = [](const GroupElement& g) { return g.matrix.trace().real(); };
  for (int i = 0; i < 3; ++i) {
    CHECK(invariant_derivative(*su2, Side::Left, i, constant, e) == 0.0);
    CHECK(std::abs(invariant_derivative(*su2, Side::Left, i, retr, e)) < 1e-12);
  }
  Rng rng(2);
  const GroupFunction phi = [](const GroupElement& g) { return g.matrix(0, 1).imag() + g.matrix(0, 0).real(); };
  for (int i = 0; i < 3; ++i)
    CHECK(invariant_derivative(*su2, Side::Left, i, phi, e) == invariant_derivative(*su2, Side::Right, i, phi, e));
  CHECK_THROWS_AS(invariant_derivative(*su2, Side::Left, 0, phi, e, 0.0), Error);
  const GroupFunction bad = [](const GroupElement&) { return std::numeric_limits<double>::infinity(); };
  CHECK_THROWS_AS(invariant_derivative(*su2, Side::Left, 0, bad, e), Error);
}

TEST_CASE("Maurer-Cartan structure: [L_X, L_Y] = L_[X,Y] on quadratic fields") {
  Rng rng(23);
  const auto L = builtin_algebra("su2");
  const GroupFunction phi = [](const GroupElement& g) {
    return g.matrix(0, 0).real() * g.matrix(0, 1).imag() + g.matrix(1, 0).real() * g.matrix(1, 0).real();
  };
  for (int s = 0; s < 5; ++s) {
    const Vector X = random_vector(rng, 3), Y = random_vector(rng, 3);
    const GroupElement g = gp::exp(L, random_vector(rng, 3));
    const double h = 1e-4;
    const auto LY = [&](const GroupElement& a) { return invariant_derivative_along(Side::Left, Y, phi, a, h); };
    const auto LX = [&](const GroupElement& a) { return invariant_derivative_along(Side::Left, X, phi, a, h); };
    const double lhs = invariant_derivative_along(Side::Left, X, LY, g, h) -
                       invariant_derivative_along(Side::Left, Y, LX, g, h);
    const double rhs = invariant_derivative_along(Side::Left, bracket_vectors(*L, X, Y), phi, g, h);
    CHECK(std::abs(lhs - rhs) <= 5e-5);
  }
}

TEST_CASE("make_element and renormalize") {
  const auto su2 = builtin_algebra("su2");
  CHECK_THROWS_AS(make_element(su2, 2.0 * CMatrix::Identity(2, 2)), Error);
  GroupElement g = gp::exp(su2, Vector::Constant(3, 0.3));
  g.matrix *= 1.0 + 1e-6;
  CHECK(membership_defect(g) > 1e-9);
  CHECK(membership_defect(renormalize(g)) < 1e-12);
}
