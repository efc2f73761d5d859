// SPDX-License-Identifier: Apache-2.0

#include "critdelay/commensurate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "critdelay/errors.hpp"

namespace critdelay
{

namespace
{
constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double phi)
{
  return std::remainder(phi, 2.0 * kPi);
}

// Unit-circle filtering for the block companion. Unlike the quadratic
// path, this linearization reproduces the polynomial's eigenvalues
// directly, so no conjugation is applied.
std::vector<std::pair<std::complex<double>, Eigen::VectorXcd>>
unit_filter_direct(const CompanionPair &pair, Eigen::Index head,
                   const SweepConfig &cfg, std::int64_t &infinite_count)
{
  std::vector<std::pair<std::complex<double>, Eigen::VectorXcd>> out;

  auto push_unit = [&](std::complex<double> z, const Eigen::VectorXcd &w) {
    Eigen::VectorXcd u = w.head(head);
    const double nu = u.norm();
    if (nu <= 0.0)
    {
      return;
    }
    u /= nu;
    out.emplace_back(z, std::move(u));
  };

  if (!cfg.use_cayley)
  {
    for (const auto &p : solve_generalized_eigen(pair.A, pair.B))
    {
      if (p.is_infinite)
      {
        infinite_count++;
      }
      else if (std::abs(std::abs(p.value) - 1.0) <= cfg.unit_tol)
      {
        push_unit(p.value, p.vector);
      }
    }
    return out;
  }

  const auto [C1, C2] = cayley_pencil(pair.A, pair.B);
  for (const auto &p : solve_generalized_eigen(C1, C2))
  {
    if (p.is_infinite)
    {
      push_unit(std::complex<double>(-1.0, 0.0), p.vector);
      continue;
    }
    if (std::abs(p.value + std::complex<double>(0.0, 1.0)) <= 1e-8)
    {
      infinite_count++;
      continue;
    }
    const double re = p.value.real();
    if (std::abs(p.value.imag()) <= cfg.unit_tol * 0.5 * (1.0 + re * re))
    {
      push_unit(cayley_sigma_to_z(re), p.vector);
    }
  }
  return out;
}

bool point_less(const CriticalPoint &x, const CriticalPoint &y)
{
  if (x.base_delay != y.base_delay)
  {
    return x.base_delay < y.base_delay;
  }
  if (x.omega != y.omega)
  {
    return x.omega < y.omega;
  }
  for (Eigen::Index i = 0; i < x.delays.size(); i++)
  {
    if (x.delays[i] != y.delays[i])
    {
      return x.delays[i] < y.delays[i];
    }
  }
  return false;
}

bool near_duplicate(const CriticalPoint &a, const CriticalPoint &b)
{
  const double scale =
      1.0 + std::max(a.delays.cwiseAbs().maxCoeff(), std::abs(a.omega));
  const double dh = (a.delays - b.delays).cwiseAbs().maxCoeff();
  const double dw = std::abs(a.omega - b.omega);
  return std::max(dh, dw) <= 1e-8 * scale;
}
}  // namespace

PolynomialPencil build_polynomial_pencil(const DdeSystem &sys,
                                         const Eigen::VectorXi &direction)
{
  sys.validate();
  if (direction.size() != sys.m)
  {
    throw input_error("direction must have one integer per delay");
  }
  int nmax = 0;
  for (Eigen::Index k = 0; k < direction.size(); k++)
  {
    if (direction[k] < 1)
    {
      throw input_error("direction entries must be positive integers");
    }
    nmax = std::max(nmax, direction[k]);
  }
  const int nm = direction[direction.size() - 1];
  if (nm != nmax)
  {
    throw input_error(
        "the largest direction entry must come last; reorder the delays");
  }

  const int n = sys.n;
  const int N = 2 * nm;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);

  PolynomialPencil p;
  p.direction = direction;
  p.coeffs.assign(N + 1, Eigen::MatrixXcd::Zero(n * n, n * n));
  for (int k = 0; k <= sys.m; k++)
  {
    const int nk = (k == 0) ? 0 : direction[k - 1];
    const Eigen::MatrixXcd Ak = sys.matrices[k];
    p.coeffs[nm + nk] += kron(I, Ak);
    p.coeffs[nm - nk] += kron(Ak, I);
  }
  return p;
}

CompanionPair companion_linearize_poly(const PolynomialPencil &p)
{
  const int N = static_cast<int>(p.coeffs.size()) - 1;
  if (N < 1)
  {
    throw input_error("polynomial pencil must have degree >= 1");
  }
  const auto q = p.coeffs[0].rows();
  CompanionPair pair;
  pair.A = Eigen::MatrixXcd::Zero(N * q, N * q);
  pair.B = Eigen::MatrixXcd::Zero(N * q, N * q);
  for (int i = 0; i + 1 < N; i++)
  {
    pair.A.block(i * q, (i + 1) * q, q, q) =
        Eigen::MatrixXcd::Identity(q, q);
    pair.B.block(i * q, i * q, q, q) = Eigen::MatrixXcd::Identity(q, q);
  }
  for (int j = 0; j < N; j++)
  {
    pair.A.block((N - 1) * q, j * q, q, q) = -p.coeffs[j];
  }
  pair.B.block((N - 1) * q, (N - 1) * q, q, q) = p.coeffs[N];
  return pair;
}

CommensurateResult critical_delays_commensurate(const DdeSystem &sys,
                                                const Eigen::VectorXi &direction,
                                                const SweepConfig &cfg)
{
  sys.validate();
  cfg.validate();
  if (direction.size() != sys.m)
  {
    throw input_error("direction must have one integer per delay");
  }
  for (Eigen::Index k = 0; k < direction.size(); k++)
  {
    if (direction[k] < 1)
    {
      throw input_error("direction entries must be positive integers");
    }
  }

  int g = 0;
  for (Eigen::Index k = 0; k < direction.size(); k++)
  {
    g = std::gcd(g, direction[k]);
  }
  Eigen::VectorXi reduced = direction / g;

  // Reorder so the largest reduced entry multiplies the last delay.
  int kmax = 0;
  for (int k = 0; k < sys.m; k++)
  {
    if (reduced[k] >= reduced[kmax])
    {
      kmax = k;
    }
  }
  DdeSystem ordered = sys;
  Eigen::VectorXi ordered_dir = reduced;
  std::swap(ordered.matrices[kmax + 1], ordered.matrices[sys.m]);
  std::swap(ordered_dir[kmax], ordered_dir[sys.m - 1]);

  const PolynomialPencil pencil = build_polynomial_pencil(ordered, ordered_dir);
  const CompanionPair pair = companion_linearize_poly(pencil);

  CommensurateResult result;
  std::int64_t infinite_count = 0;
  const auto units = unit_filter_direct(
      pair, static_cast<Eigen::Index>(sys.n) * sys.n, cfg, infinite_count);
  if (infinite_count > 0)
  {
    result.rejected_by_reason["infinite_pencil_eigenvalue"] += infinite_count;
  }

  const double residual_tol = cfg.resolved_residual_tol(sys);
  const std::complex<double> i(0.0, 1.0);

  for (const auto &[z, u] : units)
  {
    const auto factor = rank_one_factor(u, cfg.gap_tol);
    if (!factor)
    {
      result.rejected_by_reason["rank_one_gap"]++;
      continue;
    }
    Eigen::MatrixXcd S = sys.matrices[0].cast<std::complex<double>>();
    for (int k = 1; k <= sys.m; k++)
    {
      S += sys.matrices[k] * std::pow(z, reduced[k - 1]);
    }
    const std::complex<double> w = -i * factor->v.dot(S * factor->v);
    if (std::abs(w.imag()) > cfg.omega_tol * std::max(1.0, std::abs(w)))
    {
      result.rejected_by_reason["omega_not_real"]++;
      continue;
    }
    const double omega = w.real();
    if (std::abs(omega) < cfg.omega_tol)
    {
      result.rejected_by_reason["omega_near_zero"]++;
      continue;
    }

    for (int p = -cfg.p_max; p <= cfg.p_max; p++)
    {
      const double h_red = (-std::arg(z) + 2.0 * kPi * p) / omega;
      const double h = h_red / g;
      if (!(h > 0.0) || h > cfg.h_max)
      {
        continue;
      }
      Eigen::VectorXd delays(sys.m);
      for (int k = 0; k < sys.m; k++)
      {
        delays[k] = h * direction[k];
      }
      const double res = smallest_singular_value(
          eval_char_matrix(sys, std::complex<double>(0.0, omega), delays));
      if (res > residual_tol)
      {
        result.rejected_by_reason["residual"]++;
        continue;
      }
      CriticalPoint pt;
      pt.base_delay = h;
      pt.z = std::exp(-i * h * omega);
      pt.base_branch = static_cast<int>(
          std::lround((h * omega + std::arg(pt.z)) / (2.0 * kPi)));
      pt.omega = omega;
      pt.v = factor->v;
      pt.residual = res;
      pt.gap = factor->gap;
      pt.delays = delays;
      pt.phi.resize(sys.m - 1);
      pt.branches.resize(sys.m);
      for (int k = 0; k < sys.m; k++)
      {
        const double ph = wrap_angle(delays[k] * omega);
        if (k < sys.m - 1)
        {
          pt.phi[k] = ph;
        }
        pt.branches[k] = static_cast<int>(
            std::lround((delays[k] * omega - ph) / (2.0 * kPi)));
      }
      result.points.push_back(std::move(pt));
    }
  }

  std::sort(result.points.begin(), result.points.end(), point_less);
  std::vector<CriticalPoint> dedup;
  dedup.reserve(result.points.size());
  for (auto &pt : result.points)
  {
    if (!dedup.empty() && near_duplicate(dedup.back(), pt))
    {
      result.rejected_by_reason["duplicate"]++;
      continue;
    }
    dedup.push_back(std::move(pt));
  }
  result.points = std::move(dedup);
  return result;
}

}  // namespace critdelay
