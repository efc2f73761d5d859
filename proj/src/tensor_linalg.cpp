// SPDX-License-Identifier: Apache-2.0

#include "critdelay/tensor_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "critdelay/errors.hpp"

extern "C"
{
  void zggev_(const char *jobvl, const char *jobvr, const int *n,
              std::complex<double> *a, const int *lda,
              std::complex<double> *b, const int *ldb,
              std::complex<double> *alpha, std::complex<double> *beta,
              std::complex<double> *vl, const int *ldvl,
              std::complex<double> *vr, const int *ldvr,
              std::complex<double> *work, const int *lwork, double *rwork,
              int *info);
}

namespace critdelay
{

Eigen::MatrixXcd kron(const Eigen::MatrixXcd &A, const Eigen::MatrixXcd &B)
{
  return Eigen::kroneckerProduct(A, B);
}

Eigen::VectorXcd vec(const Eigen::MatrixXcd &X)
{
  return Eigen::Map<const Eigen::VectorXcd>(X.data(), X.size());
}

Eigen::MatrixXcd unvec(const Eigen::VectorXcd &u)
{
  const auto len = u.size();
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(
      static_cast<double>(len))));
  if (n * n != len)
  {
    throw input_error("unvec: length " + std::to_string(len) +
                      " is not a perfect square");
  }
  return Eigen::Map<const Eigen::MatrixXcd>(u.data(), n, n);
}

std::optional<RankOneFactor> rank_one_factor(const Eigen::VectorXcd &u,
                                             double tol)
{
  Eigen::MatrixXcd X = unvec(u);
  const std::complex<double> tr = X.trace();
  if (std::abs(tr) > 1e-12)
  {
    X *= std::conj(tr) / std::abs(tr);
  }
  const Eigen::MatrixXcd H = 0.5 * (X + X.adjoint());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  const Eigen::VectorXd w = es.eigenvalues();
  const auto n = w.size();

  Eigen::Index i1 = 0;
  w.cwiseAbs().maxCoeff(&i1);
  double second = 0.0;
  for (Eigen::Index i = 0; i < n; i++)
  {
    if (i != i1)
    {
      second = std::max(second, std::abs(w[i]));
    }
  }

  RankOneFactor out;
  out.gap = (std::abs(w[i1]) > 0.0) ? second / std::abs(w[i1]) : 1.0;
  if (out.gap > tol)
  {
    return std::nullopt;
  }
  out.v = es.eigenvectors().col(i1);

  Eigen::Index imax = 0;
  out.v.cwiseAbs().maxCoeff(&imax);
  const std::complex<double> ph = out.v[imax];
  if (std::abs(ph) > 0.0)
  {
    out.v *= std::conj(ph) / std::abs(ph);
  }
  return out;
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd>
cayley_pencil(const Eigen::MatrixXcd &A, const Eigen::MatrixXcd &B)
{
  const std::complex<double> i(0.0, 1.0);
  return {A - B, i * (A + B)};
}

std::complex<double> cayley_sigma_to_z(std::complex<double> sigma)
{
  const std::complex<double> i(0.0, 1.0);
  return (1.0 + i * sigma) / (1.0 - i * sigma);
}

std::pair<std::complex<double>, bool>
cayley_z_to_sigma(std::complex<double> z)
{
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> den = 1.0 + z;
  if (std::abs(den) == 0.0)
  {
    return {std::complex<double>(0.0, 0.0), false};
  }
  return {-i * (z - 1.0) / den, true};
}

std::vector<EigenPair> solve_generalized_eigen(const Eigen::MatrixXcd &A,
                                               const Eigen::MatrixXcd &B)
{
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
  {
    throw input_error("generalized eigensolve needs square pencils of equal "
                      "size");
  }
  const int n = static_cast<int>(A.rows());
  if (n < 1)
  {
    throw input_error("generalized eigensolve needs n >= 1");
  }

  Eigen::MatrixXcd a = A, b = B;
  Eigen::VectorXcd alpha(n), beta(n);
  Eigen::MatrixXcd vr(n, n);
  Eigen::VectorXd rwork(8 * n);
  int info = 0;
  const int one = 1;

  int lwork = -1;
  std::complex<double> wkopt;
  zggev_("N", "V", &n, a.data(), &n, b.data(), &n, alpha.data(), beta.data(),
         nullptr, &one, vr.data(), &n, &wkopt, &lwork, rwork.data(), &info);
  lwork = static_cast<int>(std::max(2.0 * n, wkopt.real()));
  Eigen::VectorXcd work(lwork);
  zggev_("N", "V", &n, a.data(), &n, b.data(), &n, alpha.data(), beta.data(),
         nullptr, &one, vr.data(), &n, work.data(), &lwork, rwork.data(),
         &info);
  if (info != 0)
  {
    throw solver_error("QZ iteration failed (zggev info=" +
                       std::to_string(info) + ")");
  }

  const double normB = B.norm();
  std::vector<EigenPair> out(n);
  for (int j = 0; j < n; j++)
  {
    EigenPair &p = out[j];
    p.vector = vr.col(j);
    const double nv = p.vector.norm();
    if (nv > 0.0)
    {
      p.vector /= nv;
    }
    const double bnorm = (B * p.vector).norm();
    if (bnorm <= 1e-10 * normB || beta[j] == std::complex<double>(0.0, 0.0))
    {
      p.is_infinite = true;
    }
    else
    {
      p.value = alpha[j] / beta[j];
    }
  }
  std::sort(out.begin(), out.end(), [](const EigenPair &x, const EigenPair &y) {
    if (x.is_infinite != y.is_infinite)
    {
      return y.is_infinite;
    }
    if (x.value.real() != y.value.real())
    {
      return x.value.real() < y.value.real();
    }
    return x.value.imag() < y.value.imag();
  });
  return out;
}

}  // namespace critdelay
