// SPDX-License-Identifier: Apache-2.0

#ifndef CRITDELAY_COMMENSURATE_HPP
#define CRITDELAY_COMMENSURATE_HPP

#include <vector>

#include <Eigen/Dense>

#include "critdelay/free_delay.hpp"
#include "critdelay/model.hpp"

namespace critdelay
{

// Polynomial pencil sum_j B_j z^j for commensurate delays
// h_k = n_k h along the integer ray (n_1..n_m), n_0 = 0:
//   B_j = sum_{k: n_m + n_k = j} I (x) A_k + sum_{k: n_m - n_k = j} A_k (x) I,
// degree N = 2 n_m, so B_N = I (x) A_m and B_0 = A_m (x) I. Several k
// mapping to the same exponent accumulate into one coefficient.
struct PolynomialPencil
{
  std::vector<Eigen::MatrixXcd> coeffs; // B_0..B_N
  Eigen::VectorXi direction;            // n_1..n_m as built (n_m maximal)
};

struct CommensurateResult
{
  std::vector<CriticalPoint> points;
  std::map<std::string, std::int64_t> rejected_by_reason;
};

// Builds the pencil for the given direction. Requires every entry
// >= 1 and the maximum last (input_error otherwise);
// critical_delays_commensurate reorders on the caller's behalf.
PolynomialPencil build_polynomial_pencil(const DdeSystem &sys,
                                         const Eigen::VectorXi &direction);

// Block companion pair: shift structure with last block row
// (-B_0 .. -B_{N-1}) against diag(I, .., I, B_N), so that
// A w = z B w with w = (u; z u; ..; z^{N-1} u) reproduces
// (sum_j B_j z^j) u = 0 with the eigenvalue z used directly.
CompanionPair companion_linearize_poly(const PolynomialPencil &p);

// Critical base delays h along the ray: unit-circle eigenvalues of the
// polynomial pencil, rank-one recovery, frequency
// omega = Re[-i v^* (sum_k A_k z^{n_k}) v] with realness check, branch
// expansion h = (-Arg z + 2 pi p)/omega over p in [-p_max, p_max] with
// h in (0, h_max], residual verification, and delays = h * direction.
// Directions whose maximum is not last are reordered internally and
// the delay components restored; common factors g = gcd(direction) are
// divided out and h rescaled back (the reported z and p always satisfy
// z = e^{-i h omega} for the reported h).
CommensurateResult critical_delays_commensurate(const DdeSystem &sys,
                                                const Eigen::VectorXi &direction,
                                                const SweepConfig &cfg);

}  // namespace critdelay

#endif  // CRITDELAY_COMMENSURATE_HPP
