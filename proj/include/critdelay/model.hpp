// SPDX-License-Identifier: Apache-2.0

#ifndef CRITDELAY_MODEL_HPP
#define CRITDELAY_MODEL_HPP

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace critdelay
{

// Linear time-invariant delay-differential system
//   x'(t) = A0 x(t) + sum_k A_k x(t - h_k),  k = 1..m,
// described by the m+1 real coefficient matrices A0..Am.
struct DdeSystem
{
  int n = 0;                             // state dimension
  int m = 0;                             // number of delays
  std::vector<Eigen::MatrixXd> matrices; // A0..Am, each n x n

  // Throws input_error if the fields violate the type invariants.
  void validate() const;
};

// Value of the characteristic matrix -sI + A0 + sum_k A_k e^{-h_k s}
// at one point (s, h).
struct CharMatrix
{
  Eigen::MatrixXcd entries;
};

// Evaluates the characteristic matrix at s for the given delay vector.
// Throws input_error if delays has wrong length or negative entries.
CharMatrix eval_char_matrix(const DdeSystem &sys, std::complex<double> s,
                            const Eigen::VectorXd &delays);

// Smallest singular value of M; the residual oracle for candidate
// critical points (zero exactly on the critical set).
double smallest_singular_value(const CharMatrix &M);

// Builds the three-delay system obtained by central-difference
// discretization of a heated rod with Neumann ends,
//   u_t = u_xx + beta (1 + sin(3 pi x)) u
//         - kappa_0 d(x - x0) u(0, t - h1)
//         - kappa_1 d(x - x1) u(x1, t - h2)
//         - kappa_2 d(x - x2) u(1, t - h3),
// on n equispaced nodes x_i = i/(n-1). Point evaluations use the node
// nearest to the requested position; the Dirac factors become 1/Dx at
// that node. Throws input_error for n < 4 or positions outside (0,1).
DdeSystem build_heat_system(int n, double beta,
                            const std::array<double, 3> &kappa,
                            const std::array<double, 3> &x_feedback);

// Model file I/O. Format: JSON text
//   { "n": int, "m": int, "A": [ m+1 matrices, each n rows of n reals ] }.
// load(save(sys)) reproduces sys bit-exactly. Throws input_error on
// malformed input with a description of the offending location.
DdeSystem load_system(const std::string &path);
void save_system(const DdeSystem &sys, const std::string &path);

// Parse/serialize the same format from a string (used by the file
// functions and the tests).
DdeSystem parse_system(const std::string &text);
std::string serialize_system(const DdeSystem &sys);

}  // namespace critdelay

#endif  // CRITDELAY_MODEL_HPP
