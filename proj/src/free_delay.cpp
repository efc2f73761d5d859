// SPDX-License-Identifier: Apache-2.0

#include "critdelay/free_delay.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "critdelay/errors.hpp"

namespace critdelay
{

namespace
{
constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double phi)
{
  double w = std::remainder(phi, 2.0 * kPi);
  return w;
}

int grid_size(double delta)
{
  return static_cast<int>(std::floor(2.0 * kPi / delta - 1e-9)) + 1;
}

// Frobenius norm of the angle condition G(phi) for a null direction of
// the leading coefficient.
double infinite_mode_condition(const DdeSystem &sys,
                               const Eigen::MatrixXcd &X,
                               const Eigen::VectorXd &phi)
{
  const std::complex<double> i(0.0, 1.0);
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(sys.n, sys.n);
  for (int k = 0; k < sys.m; k++)
  {
    const double ph = (k == 0) ? 0.0 : phi[k - 1];
    const Eigen::MatrixXcd Ak = sys.matrices[k];
    G += Ak * X * std::exp(-i * ph) + X * Ak.transpose() * std::exp(i * ph);
  }
  return G.norm();
}

double infinite_mode_omega(const DdeSystem &sys, const Eigen::VectorXcd &v,
                           const Eigen::VectorXd &phi)
{
  const std::complex<double> i(0.0, 1.0);
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(sys.n, sys.n);
  for (int k = 0; k < sys.m; k++)
  {
    const double ph = (k == 0) ? 0.0 : phi[k - 1];
    S += sys.matrices[k] * std::exp(-i * ph);
  }
  const std::complex<double> w = -i * v.dot(S * v);
  return w.real();
}

// Golden-section refinement of one angle coordinate on a bracket of
// width 2*delta around the grid minimizer.
void refine_coordinate(const DdeSystem &sys, const Eigen::MatrixXcd &X,
                       Eigen::VectorXd &phi, int coord, double delta)
{
  const double gr = 0.61803398874989485;
  double a = phi[coord] - delta;
  double b = phi[coord] + delta;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  auto eval = [&](double x) {
    Eigen::VectorXd p = phi;
    p[coord] = x;
    return infinite_mode_condition(sys, X, p);
  };
  double f1 = eval(x1), f2 = eval(x2);
  for (int it = 0; it < 80; it++)
  {
    if (f1 < f2)
    {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = eval(x1);
    }
    else
    {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = eval(x2);
    }
  }
  phi[coord] = wrap_angle(0.5 * (a + b));
}

struct GridPointOutcome
{
  std::vector<CriticalPoint> points;
  std::map<std::string, std::int64_t> rejects;
};

void process_grid_point(const DdeSystem &sys, const SweepConfig &cfg,
                        double residual_tol, const Eigen::VectorXd &phi,
                        GridPointOutcome &out)
{
  const QuadraticPencil pencil = build_quadratic_pencil(sys, phi);
  const CompanionPair pair = companion_linearize_quadratic(pencil);
  const UnitEigenpairs eigs = unit_eigenpairs(pair, cfg);
  if (!eigs.infinite.empty())
  {
    out.rejects["infinite_pencil_eigenvalue"] +=
        static_cast<std::int64_t>(eigs.infinite.size());
  }
  for (const auto &[z, u] : eigs.unit)
  {
    const auto factor = rank_one_factor(u, cfg.gap_tol);
    if (!factor)
    {
      out.rejects["rank_one_gap"]++;
      continue;
    }
    const auto omega = omega_from_point(sys, phi, z, factor->v, cfg.omega_tol);
    if (!omega)
    {
      out.rejects["omega_not_real"]++;
      continue;
    }
    if (std::abs(*omega) < cfg.omega_tol)
    {
      out.rejects["omega_near_zero"]++;
      continue;
    }
    for (const auto &[delays, branches] : delay_branches(phi, z, *omega, cfg))
    {
      const double res = smallest_singular_value(
          eval_char_matrix(sys, std::complex<double>(0.0, *omega), delays));
      if (res > residual_tol)
      {
        out.rejects["residual"]++;
        continue;
      }
      CriticalPoint pt;
      pt.phi = phi;
      pt.z = z;
      pt.omega = *omega;
      pt.v = factor->v;
      pt.residual = res;
      pt.gap = factor->gap;
      pt.delays = delays;
      pt.branches = branches;
      out.points.push_back(std::move(pt));
    }
  }
}

bool lex_less(const Eigen::VectorXd &a, const Eigen::VectorXd &b, bool &tie)
{
  for (Eigen::Index i = 0; i < a.size(); i++)
  {
    if (a[i] != b[i])
    {
      tie = false;
      return a[i] < b[i];
    }
  }
  tie = true;
  return false;
}

bool point_less(const CriticalPoint &x, const CriticalPoint &y)
{
  bool tie = false;
  if (bool lt = lex_less(x.phi, y.phi, tie); !tie)
  {
    return lt;
  }
  for (Eigen::Index i = 0; i < x.branches.size(); i++)
  {
    if (x.branches[i] != y.branches[i])
    {
      return x.branches[i] < y.branches[i];
    }
  }
  const double ax = std::arg(x.z), ay = std::arg(y.z);
  if (ax != ay)
  {
    return ax < ay;
  }
  if (x.omega != y.omega)
  {
    return x.omega < y.omega;
  }
  if (bool lt = lex_less(x.delays, y.delays, tie); !tie)
  {
    return lt;
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

void SweepConfig::validate() const
{
  if (!(delta > 0.0))
  {
    throw input_error("grid step delta must be positive");
  }
  if (p_max < 0)
  {
    throw input_error("branch bound p_max must be nonnegative");
  }
  if (!(h_max > 0.0))
  {
    throw input_error("delay cutoff h_max must be positive");
  }
  if (!(unit_tol > 0.0) || !(omega_tol > 0.0) || !(gap_tol > 0.0))
  {
    throw input_error("tolerances must be positive");
  }
}

double SweepConfig::resolved_residual_tol(const DdeSystem &sys) const
{
  if (residual_tol > 0.0)
  {
    return residual_tol;
  }
  double mx = 0.0;
  for (const auto &A : sys.matrices)
  {
    mx = std::max(mx, A.norm());
  }
  return 1e-6 * (1.0 + mx);
}

QuadraticPencil build_quadratic_pencil(const DdeSystem &sys,
                                       const Eigen::VectorXd &phi)
{
  sys.validate();
  if (phi.size() != sys.m - 1)
  {
    throw input_error("expected " + std::to_string(sys.m - 1) +
                      " free angles, got " + std::to_string(phi.size()));
  }
  const std::complex<double> i(0.0, 1.0);
  const int n = sys.n;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);

  QuadraticPencil p;
  p.phi.resize(phi.size());
  for (Eigen::Index k = 0; k < phi.size(); k++)
  {
    p.phi[k] = wrap_angle(phi[k]);
  }
  const Eigen::MatrixXcd Am = sys.matrices[sys.m];
  p.M2 = kron(I, Am);
  p.M0 = kron(Am, I);
  p.M1 = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (int k = 0; k < sys.m; k++)
  {
    const double ph = (k == 0) ? 0.0 : p.phi[k - 1];
    const Eigen::MatrixXcd Ak = sys.matrices[k];
    p.M1 += std::exp(-i * ph) * kron(I, Ak) + std::exp(i * ph) * kron(Ak, I);
  }
  return p;
}

CompanionPair companion_linearize_quadratic(const QuadraticPencil &p)
{
  const auto N = p.M2.rows();
  CompanionPair pair;
  pair.A = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
  pair.B = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
  pair.A.topRightCorner(N, N) = Eigen::MatrixXcd::Identity(N, N);
  pair.A.bottomLeftCorner(N, N) = p.M2;
  pair.A.bottomRightCorner(N, N) = p.M1;
  pair.B.topLeftCorner(N, N) = Eigen::MatrixXcd::Identity(N, N);
  pair.B.bottomRightCorner(N, N) = -p.M0;
  return pair;
}

UnitEigenpairs unit_eigenpairs(const CompanionPair &pair,
                               const SweepConfig &cfg)
{
  const auto N = pair.A.rows() / 2;
  UnitEigenpairs out;

  auto push_unit = [&](std::complex<double> lambda,
                       const Eigen::VectorXcd &w) {
    Eigen::VectorXcd u = w.head(N);
    const double nu = u.norm();
    if (nu <= 0.0)
    {
      return;
    }
    u /= nu;
    // The block layout solves the reversed polynomial, so the
    // companion eigenvalue is 1/z; on the unit circle that is the
    // conjugate of the quadratic's z.
    out.unit.emplace_back(std::conj(lambda), std::move(u));
  };

  if (!cfg.use_cayley)
  {
    for (const auto &p : solve_generalized_eigen(pair.A, pair.B))
    {
      if (p.is_infinite)
      {
        out.infinite.push_back(p);
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
      // sigma = infinity corresponds to lambda = -1, which lies on the
      // unit circle.
      push_unit(std::complex<double>(-1.0, 0.0), p.vector);
      continue;
    }
    const std::complex<double> sigma = p.value;
    if (std::abs(sigma + std::complex<double>(0.0, 1.0)) <= 1e-8)
    {
      // sigma = -i is the image of lambda = infinity.
      EigenPair inf;
      inf.is_infinite = true;
      inf.vector = p.vector;
      out.infinite.push_back(inf);
      continue;
    }
    const double re = sigma.real();
    if (std::abs(sigma.imag()) <= cfg.unit_tol * 0.5 * (1.0 + re * re))
    {
      push_unit(cayley_sigma_to_z(re), p.vector);
    }
  }
  return out;
}

std::optional<double> omega_from_point(const DdeSystem &sys,
                                       const Eigen::VectorXd &phi,
                                       std::complex<double> z,
                                       const Eigen::VectorXcd &v,
                                       double omega_tol)
{
  const std::complex<double> i(0.0, 1.0);
  Eigen::MatrixXcd S = sys.matrices[sys.m] * z;
  for (int k = 0; k < sys.m; k++)
  {
    const double ph = (k == 0) ? 0.0 : phi[k - 1];
    S += sys.matrices[k] * std::exp(-i * ph);
  }
  const std::complex<double> w = -i * v.dot(S * v);
  if (std::abs(w.imag()) > omega_tol * std::max(1.0, std::abs(w)))
  {
    return std::nullopt;
  }
  return w.real();
}

std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXi>>
delay_branches(const Eigen::VectorXd &phi, std::complex<double> z,
               double omega, const SweepConfig &cfg)
{
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXi>> out;
  if (std::abs(omega) < cfg.omega_tol)
  {
    return out;
  }
  const int m = static_cast<int>(phi.size()) + 1;

  std::vector<std::vector<std::pair<double, int>>> per_delay(m);
  for (int k = 0; k < m; k++)
  {
    const double base = (k < m - 1) ? phi[k] : -std::arg(z);
    for (int p = -cfg.p_max; p <= cfg.p_max; p++)
    {
      const double h = (base + 2.0 * kPi * p) / omega;
      if (h >= 0.0 && h <= cfg.h_max)
      {
        per_delay[k].emplace_back(h, p);
      }
    }
    if (per_delay[k].empty())
    {
      return out;
    }
  }

  Eigen::VectorXd delays(m);
  Eigen::VectorXi branches(m);
  std::vector<std::size_t> idx(m, 0);
  while (true)
  {
    for (int k = 0; k < m; k++)
    {
      delays[k] = per_delay[k][idx[k]].first;
      branches[k] = per_delay[k][idx[k]].second;
    }
    out.emplace_back(delays, branches);
    int k = m - 1;
    while (k >= 0 && ++idx[k] == per_delay[k].size())
    {
      idx[k] = 0;
      k--;
    }
    if (k < 0)
    {
      break;
    }
  }
  return out;
}

std::vector<InfiniteMode> analyze_infinite_modes(const DdeSystem &sys,
                                                 const SweepConfig &cfg)
{
  sys.validate();
  std::vector<InfiniteMode> out;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.matrices[sys.m],
                                        Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double null_tol = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);

  std::string hint;
  for (int k = 1; k < sys.m; k++)
  {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys.matrices[k]);
    if (lu.isInvertible())
    {
      hint = "coefficient A" + std::to_string(k) +
             " is nonsingular; relabeling the delays so it multiplies the "
             "last one removes the infinite eigenvalues";
      break;
    }
  }

  const double tol = cfg.resolved_residual_tol(sys);
  const int dims = sys.m - 1;
  const int K = grid_size(std::max(cfg.delta, 2.0 * kPi / 4096.0));

  for (Eigen::Index j = 0; j < sv.size(); j++)
  {
    if (sv(j) > null_tol)
    {
      continue;
    }
    Eigen::VectorXcd v = svd.matrixV().col(j).cast<std::complex<double>>();
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (std::abs(v[imax]) > 0.0)
    {
      v *= std::conj(v[imax]) / std::abs(v[imax]);
    }
    const Eigen::MatrixXcd X = v * v.adjoint();

    // Locate grid-local minima of the angle condition, then refine.
    std::vector<double> values;
    long total = 1;
    for (int d = 0; d < dims; d++)
    {
      total *= K;
    }
    values.resize(total);
    auto phi_at = [&](long flat) {
      Eigen::VectorXd phi(dims);
      for (int d = 0; d < dims; d++)
      {
        phi[d] = -kPi + (flat % K) * std::max(cfg.delta, 2.0 * kPi / 4096.0);
        flat /= K;
      }
      return phi;
    };
    for (long f = 0; f < total; f++)
    {
      values[f] = infinite_mode_condition(sys, X, phi_at(f));
    }

    std::vector<long> minima;
    for (long f = 0; f < total; f++)
    {
      bool is_min = true;
      long rem = f;
      long stride = 1;
      for (int d = 0; d < dims && is_min; d++)
      {
        const long c = rem % K;
        rem /= K;
        const long up = f + ((c + 1 < K) ? stride : stride * (1 - K));
        const long dn = f + ((c > 0) ? -stride : stride * (K - 1));
        if (values[up] < values[f] || values[dn] < values[f])
        {
          is_min = false;
        }
        stride *= K;
      }
      if (is_min)
      {
        minima.push_back(f);
      }
    }

    std::vector<InfiniteMode> candidates;
    for (long f : minima)
    {
      Eigen::VectorXd phi = phi_at(f);
      for (int round = 0; round < 3; round++)
      {
        for (int d = 0; d < dims; d++)
        {
          refine_coordinate(sys, X, phi, d,
                            std::max(cfg.delta, 2.0 * kPi / 4096.0));
        }
      }
      InfiniteMode mode;
      mode.v = v;
      mode.u = vec(X);
      mode.u /= mode.u.norm();
      mode.phi = phi;
      mode.g_residual = infinite_mode_condition(sys, X, phi);
      mode.omega = infinite_mode_omega(sys, v, phi);
      mode.valid = mode.g_residual <= tol;
      mode.hint = hint;
      candidates.push_back(std::move(mode));
    }

    // Deduplicate refined minimizers and keep valid ones, or the best
    // invalid one so the occurrence is still visible.
    std::sort(candidates.begin(), candidates.end(),
              [](const InfiniteMode &a, const InfiniteMode &b) {
                bool tie = false;
                const bool lt = lex_less(a.phi, b.phi, tie);
                return tie ? a.g_residual < b.g_residual : lt;
              });
    std::vector<InfiniteMode> kept;
    for (auto &mode : candidates)
    {
      const bool dup =
          !kept.empty() &&
          (kept.back().phi - mode.phi).cwiseAbs().maxCoeff() < 1e-6;
      if (!dup)
      {
        kept.push_back(std::move(mode));
      }
    }
    bool any_valid = false;
    for (const auto &mode : kept)
    {
      if (mode.valid)
      {
        any_valid = true;
        out.push_back(mode);
      }
    }
    if (!any_valid && !kept.empty())
    {
      auto best = std::min_element(kept.begin(), kept.end(),
                                   [](const InfiniteMode &a,
                                      const InfiniteMode &b) {
                                     return a.g_residual < b.g_residual;
                                   });
      out.push_back(*best);
    }
  }
  return out;
}

SweepResult sweep(const DdeSystem &sys, const SweepConfig &cfg, int n_threads)
{
  sys.validate();
  cfg.validate();
  if (sys.m < 2)
  {
    throw input_error("sweep needs m >= 2 delays; use the commensurate path "
                      "or the scalar forms for a single delay");
  }

  const double residual_tol = cfg.resolved_residual_tol(sys);
  const int dims = sys.m - 1;
  const int K = grid_size(cfg.delta);
  long total = 1;
  for (int d = 0; d < dims; d++)
  {
    total *= K;
  }

  auto phi_at = [&](long flat) {
    Eigen::VectorXd phi(dims);
    for (int d = 0; d < dims; d++)
    {
      phi[d] = -kPi + (flat % K) * cfg.delta;
      flat /= K;
    }
    return phi;
  };

  const int workers =
      std::max(1, std::min<int>(n_threads, static_cast<int>(total)));
  std::vector<GridPointOutcome> slots(workers);
  auto run_chunk = [&](int w) {
    const long begin = total * w / workers;
    const long end = total * (w + 1) / workers;
    for (long f = begin; f < end; f++)
    {
      process_grid_point(sys, cfg, residual_tol, phi_at(f), slots[w]);
    }
  };
  if (workers == 1)
  {
    run_chunk(0);
  }
  else
  {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; w++)
    {
      pool.emplace_back(run_chunk, w);
    }
    for (auto &t : pool)
    {
      t.join();
    }
  }

  SweepResult result;
  for (auto &slot : slots)
  {
    result.points.insert(result.points.end(),
                         std::make_move_iterator(slot.points.begin()),
                         std::make_move_iterator(slot.points.end()));
    for (const auto &[reason, count] : slot.rejects)
    {
      result.rejected_by_reason[reason] += count;
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

  result.infinite_modes = analyze_infinite_modes(sys, cfg);
  return result;
}

}  // namespace critdelay
