// SPDX-License-Identifier: Apache-2.0

#ifndef CRITDELAY_TENSOR_LINALG_HPP
#define CRITDELAY_TENSOR_LINALG_HPP

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace critdelay
{

// One solution of the generalized eigenproblem A v = lambda B v.
// Finite pairs satisfy ||A v - lambda B v|| <= tol (||A|| + |lambda| ||B||);
// infinite pairs satisfy ||B v|| <= tol ||B||.
struct EigenPair
{
  std::complex<double> value{0.0, 0.0};
  bool is_infinite = false;
  Eigen::VectorXcd vector; // unit 2-norm
};

// Dominant Hermitian rank-one factor of a reshaped n^2-vector.
struct RankOneFactor
{
  Eigen::VectorXcd v; // unit norm, largest-magnitude entry real nonnegative
  double gap = 0.0;   // second/first singular value ratio, in [0, 1]
};

// Standard Kronecker product: block (i, j) of the result is A(i,j) * B.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd &A, const Eigen::MatrixXcd &B);

// Column-stacking vectorization and its inverse. unvec throws
// input_error when the length is not a perfect square.
Eigen::VectorXcd vec(const Eigen::MatrixXcd &X);
Eigen::MatrixXcd unvec(const Eigen::VectorXcd &u);

// Extracts the dominant Hermitian rank-one factor v v* from the
// reshaped unit vector u. The reshaped matrix is rotated by the phase
// of its trace (the ideal form v v* has positive real trace, but the
// eigensolver hands back u with arbitrary global phase), then
// Hermitian-symmetrized; v is its dominant eigenvector and gap the
// ratio of the second to the first eigenvalue magnitude. Returns
// nullopt when gap > tol (reshaped vector not numerically rank-one).
std::optional<RankOneFactor> rank_one_factor(const Eigen::VectorXcd &u,
                                             double tol);

// Moebius pencil transform: unit-circle eigenvalues z of (A, B) map to
// real eigenvalues sigma of the returned pair (A - B, i (A + B)) via
// z = (1 + i sigma)/(1 - i sigma).
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd>
cayley_pencil(const Eigen::MatrixXcd &A, const Eigen::MatrixXcd &B);

// Scalar maps of the same transform. z = -1 corresponds to infinite
// sigma; cayley_z_to_sigma reports that case through the bool flag
// (true = finite).
std::complex<double> cayley_sigma_to_z(std::complex<double> sigma);
std::pair<std::complex<double>, bool>
cayley_z_to_sigma(std::complex<double> z);

// Dense solve of A v = lambda B v via the complex QZ algorithm. All N
// pairs are returned sorted (infinite last, then by real and imaginary
// part). Eigenvalues with ||B v|| <= 1e-10 ||B|| are flagged infinite.
// Throws solver_error when the backend does not converge.
std::vector<EigenPair> solve_generalized_eigen(const Eigen::MatrixXcd &A,
                                               const Eigen::MatrixXcd &B);

}  // namespace critdelay

#endif  // CRITDELAY_TENSOR_LINALG_HPP
