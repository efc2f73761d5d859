// SPDX-License-Identifier: Apache-2.0

#include "critdelay/scalar_forms.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "critdelay/errors.hpp"

namespace critdelay
{

namespace
{
constexpr double kPi = 3.14159265358979323846;

double clamped_acos(double x)
{
  return std::acos(std::min(1.0, std::max(-1.0, x)));
}

double sign_of(double x)
{
  return (x >= 0.0) ? 1.0 : -1.0;
}
}  // namespace

std::optional<ScalarCriticalPoint>
scalar_critical_delays(const ScalarSystem &sys, const Eigen::VectorXd &phi,
                       int sign_choice, const Eigen::VectorXi &branches)
{
  const int m = sys.m();
  if (m < 1)
  {
    throw input_error("scalar system needs at least one delay coefficient");
  }
  const double am = sys.a[m];
  if (am == 0.0)
  {
    throw input_error("leading scalar coefficient a_m must be nonzero");
  }
  if (phi.size() != m - 1)
  {
    throw input_error("expected " + std::to_string(m - 1) + " free angles");
  }
  if (branches.size() != m)
  {
    throw input_error("expected " + std::to_string(m) + " branch indices");
  }
  if (sign_choice != 1 && sign_choice != -1)
  {
    throw input_error("sign_choice must be +1 or -1");
  }

  double c = sys.a[0];
  double s = 0.0;
  for (int k = 1; k < m; k++)
  {
    c += sys.a[k] * std::cos(phi[k - 1]);
    s += sys.a[k] * std::sin(phi[k - 1]);
  }

  const double radicand = am * am - c * c;
  if (radicand < 0.0)
  {
    return std::nullopt;
  }
  const double omega = -s + sign_choice * std::sqrt(radicand);
  if (omega == 0.0)
  {
    return std::nullopt;
  }

  const double theta_m =
      -sign_choice * sign_of(am) * clamped_acos(-c / am);

  ScalarCriticalPoint out;
  out.omega = omega;
  out.delays.resize(m);
  for (int k = 1; k < m; k++)
  {
    out.delays[k - 1] = (phi[k - 1] + 2.0 * kPi * branches[k - 1]) / omega;
  }
  out.delays[m - 1] = (theta_m + 2.0 * kPi * branches[m - 1]) / omega;
  return out;
}

std::optional<TwoDelayPoint> two_delay_parametrization(double a0, double a1,
                                                       double a2, double phi,
                                                       int sign_choice, int p,
                                                       int q)
{
  if (a2 == 0.0)
  {
    throw input_error("two-delay parameterization needs a2 != 0");
  }
  if (sign_choice != 1 && sign_choice != -1)
  {
    throw input_error("sign_choice must be +1 or -1");
  }
  const double c = a0 + a1 * std::cos(phi);
  const double radicand = a2 * a2 - c * c;
  if (radicand < 0.0)
  {
    return std::nullopt;
  }
  const double omega = -a1 * std::sin(phi) + sign_choice * std::sqrt(radicand);
  if (omega == 0.0)
  {
    return std::nullopt;
  }
  TwoDelayPoint out;
  out.omega = omega;
  out.h1 = (phi + 2.0 * kPi * p) / omega;
  out.h2 =
      (-sign_choice * sign_of(a2) * clamped_acos(-c / a2) + 2.0 * kPi * q) /
      omega;
  return out;
}

std::optional<TwoDelayPoint> gu_example_parameterization(double omega,
                                                         int sign_choice,
                                                         int p, int q)
{
  if (!(omega > 0.0))
  {
    throw input_error("frequency parameterization needs omega > 0");
  }
  if (sign_choice != 1 && sign_choice != -1)
  {
    throw input_error("sign_choice must be +1 or -1");
  }
  const double t = std::sqrt(1.0 + omega * omega);
  const double arg1 = t / 2.0 + 3.0 / (8.0 * t);
  const double arg2 = t - 3.0 / (4.0 * t);
  if (std::abs(arg1) > 1.0 || std::abs(arg2) > 1.0)
  {
    return std::nullopt;
  }
  const double theta1 = std::acos(arg1);
  const double theta2 = std::acos(arg2);
  TwoDelayPoint out;
  out.omega = omega;
  out.h1 = (-std::atan(omega) + sign_choice * theta1 + (2.0 * p - 1.0) * kPi) /
           omega;
  out.h2 = (-std::atan(omega) - sign_choice * theta2 + (2.0 * q - 1.0) * kPi) /
           omega;
  return out;
}

SingleDelayResult single_delay_scalar(double a0, double a1)
{
  SingleDelayResult out;
  if (!(a1 * a1 > a0 * a0))
  {
    return out;
  }
  const double omega = std::sqrt(a1 * a1 - a0 * a0);
  const double theta = -sign_of(a1) * clamped_acos(-a0 / a1);
  double best = std::numeric_limits<double>::infinity();
  for (int p = -2; p <= 2; p++)
  {
    const double h = (theta + 2.0 * kPi * p) / omega;
    if (h > 0.0 && h < best)
    {
      best = h;
    }
  }
  out.crossing = true;
  out.h = best;
  out.omega = omega;
  return out;
}

}  // namespace critdelay
