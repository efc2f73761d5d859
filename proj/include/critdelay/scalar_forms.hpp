// SPDX-License-Identifier: Apache-2.0

#ifndef CRITDELAY_SCALAR_FORMS_HPP
#define CRITDELAY_SCALAR_FORMS_HPP

#include <optional>

#include <Eigen/Dense>

namespace critdelay
{

// Scalar system x'(t) = a0 x(t) + sum_k a_k x(t - h_k).
struct ScalarSystem
{
  Eigen::VectorXd a; // a_0..a_m
  int m() const { return static_cast<int>(a.size()) - 1; }
};

struct ScalarCriticalPoint
{
  Eigen::VectorXd delays; // h_1..h_m (may be negative; callers filter)
  double omega = 0.0;
};

// Closed-form critical delays of the scalar system at the free angles
// phi_1..phi_{m-1} (phi_0 = 0). With c = sum_{k<m} a_k cos phi_k and
// s = sum_{k<m} a_k sin phi_k:
//   omega = -s + sign_choice * sqrt(a_m^2 - c^2),
//   h_m   = (-sign_choice * sign(a_m) * acos(-c/a_m) + 2 pi p_m)/omega,
//   h_k   = (phi_k + 2 pi p_k)/omega,
// the two sign occurrences being matched. Returns nullopt when the
// radicand is negative (no crossing at these angles) or omega
// vanishes. Throws input_error when a_m = 0.
std::optional<ScalarCriticalPoint>
scalar_critical_delays(const ScalarSystem &sys, const Eigen::VectorXd &phi,
                       int sign_choice, const Eigen::VectorXi &branches);

struct TwoDelayPoint
{
  double h1 = 0.0, h2 = 0.0, omega = 0.0;
};

// Direct two-delay parameterization of the critical curves,
//   omega = -a1 sin(phi) + sign * sqrt(a2^2 - (a0 + a1 cos phi)^2),
//   h1 = (phi + 2 pi p)/omega,
//   h2 = (-sign * sign(a2) * acos(-(a0 + a1 cos phi)/a2) + 2 pi q)/omega.
// Same rejection rules as scalar_critical_delays.
std::optional<TwoDelayPoint> two_delay_parametrization(double a0, double a1,
                                                       double a2, double phi,
                                                       int sign_choice, int p,
                                                       int q);

// Frequency-parameterized form of the same family of curves for the
// fixed coefficients (a0, a1, a2) = (-1, -1, -1/2): with t = sqrt(1 + w^2),
//   h1 = (-atan w + sign * acos(t/2 + 3/(8 t)) + (2 p - 1) pi)/w,
//   h2 = (-atan w - sign * acos(t - 3/(4 t)) + (2 q - 1) pi)/w.
// Returns nullopt when either acos argument leaves [-1, 1]; throws
// input_error for w <= 0.
std::optional<TwoDelayPoint> gu_example_parameterization(double omega,
                                                         int sign_choice,
                                                         int p, int q);

struct SingleDelayResult
{
  bool crossing = false;
  double h = 0.0; // smallest positive critical delay when crossing
  double omega = 0.0;
};

// Classical single-delay scalar crossing: when a1^2 > a0^2 the delay
//   h = (-sign(a1) acos(-a0/a1) + 2 pi p)/sqrt(a1^2 - a0^2)
// minimized over integer p with h > 0; otherwise no delay-induced
// crossing exists.
SingleDelayResult single_delay_scalar(double a0, double a1);

}  // namespace critdelay

#endif  // CRITDELAY_SCALAR_FORMS_HPP
