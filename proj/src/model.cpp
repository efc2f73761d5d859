// SPDX-License-Identifier: Apache-2.0

#include "critdelay/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "critdelay/errors.hpp"

namespace critdelay
{

void DdeSystem::validate() const
{
  if (n < 1)
  {
    throw input_error("state dimension must be positive, got " +
                      std::to_string(n));
  }
  if (m < 1)
  {
    throw input_error("delay count must be at least 1, got " +
                      std::to_string(m));
  }
  if (static_cast<int>(matrices.size()) != m + 1)
  {
    throw input_error("expected " + std::to_string(m + 1) +
                      " coefficient matrices, got " +
                      std::to_string(matrices.size()));
  }
  for (std::size_t k = 0; k < matrices.size(); k++)
  {
    const auto &A = matrices[k];
    if (A.rows() != n || A.cols() != n)
    {
      throw input_error("matrix A" + std::to_string(k) + " has shape " +
                        std::to_string(A.rows()) + "x" +
                        std::to_string(A.cols()) + ", expected " +
                        std::to_string(n) + "x" + std::to_string(n));
    }
    if (!A.allFinite())
    {
      throw input_error("matrix A" + std::to_string(k) +
                        " contains non-finite entries");
    }
  }
}

CharMatrix eval_char_matrix(const DdeSystem &sys, std::complex<double> s,
                            const Eigen::VectorXd &delays)
{
  sys.validate();
  if (delays.size() != sys.m)
  {
    throw input_error("delay vector has length " +
                      std::to_string(delays.size()) + ", expected " +
                      std::to_string(sys.m));
  }
  for (int k = 0; k < delays.size(); k++)
  {
    if (!(delays[k] >= 0.0) || !std::isfinite(delays[k]))
    {
      throw input_error("delay h_" + std::to_string(k + 1) +
                        " must be finite and nonnegative");
    }
  }
  CharMatrix out;
  out.entries = -s * Eigen::MatrixXcd::Identity(sys.n, sys.n);
  out.entries += sys.matrices[0];
  for (int k = 1; k <= sys.m; k++)
  {
    out.entries += sys.matrices[k] * std::exp(-delays[k - 1] * s);
  }
  return out;
}

double smallest_singular_value(const CharMatrix &M)
{
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M.entries);
  return svd.singularValues().tail(1)(0);
}

DdeSystem build_heat_system(int n, double beta,
                            const std::array<double, 3> &kappa,
                            const std::array<double, 3> &x_feedback)
{
  if (n < 4)
  {
    throw input_error("heat system needs at least 4 nodes, got " +
                      std::to_string(n));
  }
  for (double x : x_feedback)
  {
    if (!(x > 0.0 && x < 1.0))
    {
      throw input_error("feedback positions must lie inside (0, 1)");
    }
  }
  const double dx = 1.0 / (n - 1);
  const double w2 = 1.0 / (dx * dx);
  constexpr double pi = 3.14159265358979323846;

  DdeSystem sys;
  sys.n = n;
  sys.m = 3;
  sys.matrices.assign(4, Eigen::MatrixXd::Zero(n, n));

  // Second difference with Neumann ends (ghost-point elimination).
  Eigen::MatrixXd &A0 = sys.matrices[0];
  for (int i = 0; i < n; i++)
  {
    A0(i, i) = -2.0 * w2;
    if (i > 0)
    {
      A0(i, i - 1) = w2;
    }
    if (i < n - 1)
    {
      A0(i, i + 1) = w2;
    }
  }
  A0(0, 1) = 2.0 * w2;
  A0(n - 1, n - 2) = 2.0 * w2;
  for (int i = 0; i < n; i++)
  {
    A0(i, i) += beta * (1.0 + std::sin(3.0 * pi * i * dx));
  }

  // Pointwise delayed feedbacks: the Dirac factor becomes 1/dx at the
  // node nearest each position (half rounds away from zero); the
  // sampled state is u(0), u(x1), u(1) respectively.
  const int node0 = static_cast<int>(std::lround(x_feedback[0] / dx));
  const int node1 = static_cast<int>(std::lround(x_feedback[1] / dx));
  const int node2 = static_cast<int>(std::lround(x_feedback[2] / dx));
  sys.matrices[1](node0, 0) = -kappa[0] / dx;
  sys.matrices[2](node1, node1) = -kappa[1] / dx;
  sys.matrices[3](node2, n - 1) = -kappa[2] / dx;

  sys.validate();
  return sys;
}

DdeSystem parse_system(const std::string &text)
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse(text);
  }
  catch (const nlohmann::json::parse_error &e)
  {
    throw input_error(std::string("model parse error: ") + e.what());
  }

  DdeSystem sys;
  try
  {
    sys.n = j.at("n").get<int>();
    sys.m = j.at("m").get<int>();
    const auto &A = j.at("A");
    if (!A.is_array())
    {
      throw input_error("model field A must be an array of matrices");
    }
    for (std::size_t k = 0; k < A.size(); k++)
    {
      const auto &mat = A[k];
      Eigen::MatrixXd M(mat.size(), mat.empty() ? 0 : mat[0].size());
      for (std::size_t i = 0; i < mat.size(); i++)
      {
        const auto &row = mat[i];
        if (static_cast<Eigen::Index>(row.size()) != M.cols())
        {
          throw input_error("matrix A" + std::to_string(k) + " row " +
                            std::to_string(i) + " has inconsistent length");
        }
        for (std::size_t c = 0; c < row.size(); c++)
        {
          M(i, c) = row[c].get<double>();
        }
      }
      sys.matrices.push_back(std::move(M));
    }
  }
  catch (const nlohmann::json::exception &e)
  {
    throw input_error(std::string("model field error: ") + e.what());
  }
  sys.validate();
  return sys;
}

std::string serialize_system(const DdeSystem &sys)
{
  sys.validate();
  nlohmann::json j;
  j["n"] = sys.n;
  j["m"] = sys.m;
  nlohmann::json mats = nlohmann::json::array();
  for (const auto &A : sys.matrices)
  {
    nlohmann::json mat = nlohmann::json::array();
    for (Eigen::Index i = 0; i < A.rows(); i++)
    {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < A.cols(); c++)
      {
        row.push_back(A(i, c));
      }
      mat.push_back(row);
    }
    mats.push_back(mat);
  }
  j["A"] = mats;
  return j.dump(2) + "\n";
}

DdeSystem load_system(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw input_error("cannot open model file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

void save_system(const DdeSystem &sys, const std::string &path)
{
  std::ofstream out(path);
  if (!out)
  {
    throw input_error("cannot write model file: " + path);
  }
  out << serialize_system(sys);
}

}  // namespace critdelay
