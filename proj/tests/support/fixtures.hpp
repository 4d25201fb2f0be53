#pragma once

#include <random>
#include <string>
#include <vector>

#include "gp/expression.hpp"
#include "gp/poisson.hpp"

namespace gp::test {

using Rng = std::mt19937_64;

inline Vector random_vector(Rng& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

inline std::vector<std::string> vars(const char* prefix, int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back(prefix + std::to_string(i));
  return v;
}

/// Entry names of a d x d group matrix; real groups only have re_g.
inline std::vector<std::string> group_vars(int d, bool complex = true) {
  std::vector<std::string> v;
  for (int r = 1; r <= d; ++r)
    for (int c = 1; c <= d; ++c) {
      v.push_back("re_g" + std::to_string(r) + std::to_string(c));
      if (complex) v.push_back("im_g" + std::to_string(r) + std::to_string(c));
    }
  return v;
}

inline std::vector<std::string> group_vars(const LieAlgebra& L) {
  return group_vars(L.matrix_size(), L.group_kind() != GroupKind::SpecialOrthogonal);
}

inline std::vector<std::string> operator+(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// c0 + sum of `terms` monomials of degree <= `degree` in `names`.
inline std::string random_polynomial(Rng& rng, const std::vector<std::string>& names, int terms = 3, int degree = 2) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
  std::uniform_int_distribution<int> deg(1, degree);
  std::string out = std::to_string(coef(rng));
  for (int t = 0; t < terms; ++t) {
    out += " + " + std::to_string(coef(rng));
    for (int k = deg(rng); k > 0; --k) out += "*" + names[pick(rng)];
  }
  return out;
}

/// Polynomial coupling two sets of variables: every term is a * b, a * a' or b.
inline std::string mixed_polynomial(Rng& rng, const std::vector<std::string>& a, const std::vector<std::string>& b,
                                    int terms = 2) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pa(0, a.size() - 1), pb(0, b.size() - 1);
  std::string out = std::to_string(coef(rng));
  for (int t = 0; t < terms; ++t) {
    out += " + " + std::to_string(coef(rng)) + "*" + a[pa(rng)] + "*" + b[pb(rng)];
    out += " + " + std::to_string(coef(rng)) + "*" + a[pa(rng)] + "*" + a[pa(rng)];
    out += " + " + std::to_string(coef(rng)) + "*" + b[pb(rng)];
  }
  return out;
}

inline ScalarField field(const std::string& src) { return as_field(Expression(src)); }

inline ScalarField times(ScalarField a, ScalarField b) {
  return [a = std::move(a), b = std::move(b)](const PhasePoint& pt) { return a(pt) * b(pt); };
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace gp::test
