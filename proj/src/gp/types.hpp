#pragma once

#include <Eigen/Dense>
#include <complex>

namespace gp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

}  // namespace gp
