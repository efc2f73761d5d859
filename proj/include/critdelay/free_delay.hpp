// SPDX-License-Identifier: Apache-2.0

#ifndef CRITDELAY_FREE_DELAY_HPP
#define CRITDELAY_FREE_DELAY_HPP

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "critdelay/model.hpp"
#include "critdelay/tensor_linalg.hpp"

namespace critdelay
{

// Quadratic pencil z^2 M2 + z M1 + M0 in the vectorized unknown
// u = vec(v v*), parameterized by the free angles phi_1..phi_{m-1}
// (phi_0 = 0 is implied):
//   M2 = I (x) A_m,
//   M1 = sum_{k=0}^{m-1} (e^{-i phi_k} I (x) A_k + e^{i phi_k} A_k (x) I),
//   M0 = A_m (x) I.
struct QuadraticPencil
{
  Eigen::MatrixXcd M2, M1, M0;
  Eigen::VectorXd phi; // length m-1, wrapped into [-pi, pi]
};

// First-order linearization A w = z B w of a matrix polynomial.
struct CompanionPair
{
  Eigen::MatrixXcd A, B;
};

// One critical-delay record. For free sweeps the invariants
//   h_k omega == phi_k (mod 2 pi), k < m,  h_m omega == -Arg z (mod 2 pi)
// hold with the stored branch indices. For commensurate rays,
// base_delay/base_branch carry the ray parameter h and its branch, and
// phi/branches hold the per-component values they induce.
struct CriticalPoint
{
  Eigen::VectorXd phi;    // length m-1
  std::complex<double> z; // unit-circle eigenvalue e^{-i h_m omega}
  double omega = 0.0;     // crossing frequency, either sign
  Eigen::VectorXcd v;     // unit eigenvector of the characteristic matrix
  double residual = 0.0;  // sigma_min of the characteristic matrix at (i omega, h)
  double gap = 0.0;       // rank-one gap of the recovered eigenvector
  Eigen::VectorXd delays; // h_1..h_m, all >= 0
  Eigen::VectorXi branches; // p_1..p_m
  double base_delay = std::numeric_limits<double>::quiet_NaN();
  int base_branch = 0;
};

// Sweep configuration. residual_tol <= 0 requests the automatic value
// 1e-6 * (1 + max_k ||A_k||_F), resolved per system.
struct SweepConfig
{
  double delta = 2.0 * 3.14159265358979323846 / 629.0;
  int p_max = 2;
  double h_max = 17.0;
  double unit_tol = 1.4901161193847656e-08; // sqrt of double epsilon
  double omega_tol = 1e-6;
  double residual_tol = 0.0;
  double gap_tol = 1e-4;
  bool use_cayley = false;

  void validate() const; // throws input_error on nonpositive delta etc.
  double resolved_residual_tol(const DdeSystem &sys) const;
};

// A delay-independent crossing mode caused by a singular leading
// coefficient A_m: the pencil has infinite eigenvalues for every phi,
// and criticality holds for every value of the last delay whenever the
// angle condition
//   G(phi) = sum_{k=0}^{m-1} (A_k X e^{-i phi_k} + X A_k^T e^{i phi_k}) = 0,
//   X = v v*,  v in null(A_m),
// is met. g_residual is the minimized ||G||_F; valid marks modes whose
// minimum clears the residual tolerance.
struct InfiniteMode
{
  Eigen::VectorXcd v;       // unit null vector of A_m
  Eigen::VectorXcd u;       // vec(v v*), the pencil-level eigenvector
  Eigen::VectorXd phi;      // minimizing angles, length m-1
  double omega = 0.0;       // frequency implied at those angles
  double g_residual = 0.0;  // min ||G(phi)||_F
  bool valid = false;
  std::string hint;         // set when reordering the matrices would help
};

struct SweepResult
{
  std::vector<CriticalPoint> points;
  std::vector<InfiniteMode> infinite_modes;
  std::map<std::string, std::int64_t> rejected_by_reason;
};

// Unit-circle filtering output: finite on-circle candidates plus the
// infinite eigenpairs reported by the solver (never dropped).
struct UnitEigenpairs
{
  std::vector<std::pair<std::complex<double>, Eigen::VectorXcd>> unit;
  std::vector<EigenPair> infinite;
};

// Builds the quadratic pencil at the given angles (wrapped into
// [-pi, pi]). For n = 1 the three entries reduce to
// (a_m, 2 sum_{k<m} a_k cos phi_k, a_m).
QuadraticPencil build_quadratic_pencil(const DdeSystem &sys,
                                       const Eigen::VectorXd &phi);

// Companion pair A = [[0, I], [M2, M1]], B = [[I, 0], [0, -M0]].
// This block layout linearizes the reversed polynomial, so its
// eigenvalues are the reciprocals 1/z of the quadratic's; on the unit
// circle the two are related by conjugation (handled downstream).
CompanionPair companion_linearize_quadratic(const QuadraticPencil &p);

// All eigenpairs of the companion with | |z| - 1 | <= unit_tol, with u
// the leading block renormalized and z mapped back to the quadratic
// convention (conjugation, see above). With use_cayley the transformed
// pencil is solved instead and real sigma mapped back to the circle;
// sigma near -i marks the original pencil's infinite eigenvalues.
UnitEigenpairs unit_eigenpairs(const CompanionPair &pair,
                               const SweepConfig &cfg);

// Crossing frequency omega = Re[-i v^* (A_m z + sum_{k<m} A_k
// e^{-i phi_k}) v]; rejected (nullopt) when the imaginary part exceeds
// omega_tol * max(1, |value|).
std::optional<double> omega_from_point(const DdeSystem &sys,
                                       const Eigen::VectorXd &phi,
                                       std::complex<double> z,
                                       const Eigen::VectorXcd &v,
                                       double omega_tol);

// Expands the branch formulas
//   h_k = (phi_k + 2 pi p_k)/omega (k < m), h_m = (-Arg z + 2 pi p_m)/omega
// over all p in [-p_max, p_max]^m, keeping every component in
// [0, h_max]. Empty when |omega| < omega_tol.
std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXi>>
delay_branches(const Eigen::VectorXd &phi, std::complex<double> z,
               double omega, const SweepConfig &cfg);

// Structural analysis of delay-independent modes (see InfiniteMode):
// null space of A_m, angle-condition minimization on the grid with
// local refinement. Returns one entry per null direction and
// candidate minimizer.
std::vector<InfiniteMode> analyze_infinite_modes(const DdeSystem &sys,
                                                 const SweepConfig &cfg);

// Full sweep of the free-angle grid [-pi, pi)^{m-1} with step delta:
// pencil, linearization, unit filtering, rank-one recovery, frequency
// recovery, branch expansion, and the residual check
// sigma_min(char matrix at (i omega, h)) <= residual tolerance.
// Points are sorted by (phi, branches, Arg z, omega, delays) and
// near-duplicates in (delays, omega) merged; grid points may be
// processed on n_threads workers with identical output.
SweepResult sweep(const DdeSystem &sys, const SweepConfig &cfg,
                  int n_threads = 1);

}  // namespace critdelay

#endif  // CRITDELAY_FREE_DELAY_HPP
