#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace symport {

using cplx = std::complex<double>;
using Eigen::Matrix3d;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double c0 = 299792458.0;           // m/s
inline constexpr double mu0 = 4.0e-7 * pi;          // H/m
inline constexpr double eps0 = 1.0 / (mu0 * c0 * c0);
inline constexpr double eta0 = mu0 * c0;            // wave impedance of vacuum
}  // namespace constants

/// Irrep row pair (alpha, i) identifying one orthogonality class of states.
struct Species {
    int irrep = 0;  // index into PointGroup::irreps
    int row = 0;    // 0-based row within the irrep
    friend bool operator==(const Species&, const Species&) = default;
    friend auto operator<=>(const Species&, const Species&) = default;
};

}  // namespace symport
