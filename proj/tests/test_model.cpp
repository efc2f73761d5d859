// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <cstdio>

#include <doctest.h>

#include "critdelay/errors.hpp"
#include "critdelay/model.hpp"

using namespace critdelay;

namespace
{
DdeSystem two_delay_scalar(double a0, double a1, double a2)
{
  DdeSystem sys;
  sys.n = 1;
  sys.m = 2;
  sys.matrices = {Eigen::MatrixXd::Constant(1, 1, a0),
                  Eigen::MatrixXd::Constant(1, 1, a1),
                  Eigen::MatrixXd::Constant(1, 1, a2)};
  return sys;
}
}  // namespace

TEST_CASE("system validation rejects inconsistent shapes")
{
  DdeSystem sys = two_delay_scalar(-1.0, -1.0, -0.5);
  CHECK_NOTHROW(sys.validate());

  DdeSystem missing = sys;
  missing.matrices.pop_back();
  CHECK_THROWS_AS(missing.validate(), input_error);

  DdeSystem wrong_size = sys;
  wrong_size.matrices[1] = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(wrong_size.validate(), input_error);

  DdeSystem bad_n = sys;
  bad_n.n = 0;
  CHECK_THROWS_AS(bad_n.validate(), input_error);

  DdeSystem bad_m = sys;
  bad_m.m = 0;
  CHECK_THROWS_AS(bad_m.validate(), input_error);
}

TEST_CASE("characteristic matrix value on a scalar system")
{
  const DdeSystem sys = two_delay_scalar(-1.0, -1.0, -0.5);
  const std::complex<double> i(0.0, 1.0);
  Eigen::VectorXd h(2);
  h << 0.7, 1.3;
  const std::complex<double> s = 0.25 * i;
  const auto M = eval_char_matrix(sys, s, h);
  const std::complex<double> expect =
      -s - 1.0 - std::exp(-0.7 * s) - 0.5 * std::exp(-1.3 * s);
  CHECK(std::abs(M.entries(0, 0) - expect) < 1e-15);

  Eigen::VectorXd short_h(1);
  short_h << 0.7;
  CHECK_THROWS_AS(eval_char_matrix(sys, s, short_h), input_error);
  Eigen::VectorXd neg_h(2);
  neg_h << 0.7, -0.1;
  CHECK_THROWS_AS(eval_char_matrix(sys, s, neg_h), input_error);
}

TEST_CASE("characteristic residual vanishes exactly on a known crossing")
{
  // x'(t) = -x(t - pi/2) crosses at s = i.
  DdeSystem sys;
  sys.n = 1;
  sys.m = 1;
  sys.matrices = {Eigen::MatrixXd::Zero(1, 1),
                  Eigen::MatrixXd::Constant(1, 1, -1.0)};
  Eigen::VectorXd h(1);
  h << 3.14159265358979323846 / 2.0;
  const double res =
      smallest_singular_value(eval_char_matrix(sys, {0.0, 1.0}, h));
  CHECK(res < 1e-15);
}

TEST_CASE("smallest singular value of a diagonal matrix")
{
  CharMatrix M;
  M.entries = Eigen::MatrixXcd::Zero(2, 2);
  M.entries(0, 0) = 3.0;
  M.entries(1, 1) = 1e-3;
  CHECK(smallest_singular_value(M) == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("heated rod discretization at n = 8")
{
  const DdeSystem sys =
      build_heat_system(8, 10.0, {4.0, 10.0, 4.0},
                        {1.0 / 3.0, 0.5, 0.75});
  REQUIRE(sys.n == 8);
  REQUIRE(sys.m == 3);

  const double w2 = 49.0; // 1/dx^2 with dx = 1/7
  const auto &A0 = sys.matrices[0];
  CHECK(A0(0, 0) == doctest::Approx(-2.0 * w2 + 10.0).epsilon(1e-13));
  CHECK(A0(0, 1) == doctest::Approx(2.0 * w2).epsilon(1e-13));
  CHECK(A0(7, 6) == doctest::Approx(2.0 * w2).epsilon(1e-13));
  for (int i = 1; i < 7; i++)
  {
    CHECK(A0(i, i - 1) == doctest::Approx(w2));
    CHECK(A0(i, i + 1) == doctest::Approx(w2));
  }
  const double beta1 =
      10.0 * (1.0 + std::sin(3.0 * 3.14159265358979323846 * (1.0 / 7.0)));
  CHECK(A0(1, 1) == doctest::Approx(-2.0 * w2 + beta1).epsilon(1e-13));

  // Feedback terms: node nearest to each position, gain -kappa/dx.
  CHECK(sys.matrices[1](2, 0) == doctest::Approx(-4.0 * 7.0));
  CHECK(sys.matrices[2](4, 4) == doctest::Approx(-10.0 * 7.0));
  CHECK(sys.matrices[3](5, 7) == doctest::Approx(-4.0 * 7.0));
  CHECK(sys.matrices[1].cwiseAbs().sum() == doctest::Approx(28.0));
  CHECK(sys.matrices[2].cwiseAbs().sum() == doctest::Approx(70.0));
  CHECK(sys.matrices[3].cwiseAbs().sum() == doctest::Approx(28.0));

  CHECK_THROWS_AS(build_heat_system(3, 10.0, {4.0, 10.0, 4.0},
                                    {1.0 / 3.0, 0.5, 0.75}),
                  input_error);
  CHECK_THROWS_AS(build_heat_system(8, 10.0, {4.0, 10.0, 4.0},
                                    {0.0, 0.5, 0.75}),
                  input_error);
  CHECK_THROWS_AS(build_heat_system(8, 10.0, {4.0, 10.0, 4.0},
                                    {1.0 / 3.0, 0.5, 1.0}),
                  input_error);
}

TEST_CASE("model files round-trip bit-exactly")
{
  DdeSystem sys;
  sys.n = 2;
  sys.m = 2;
  Eigen::MatrixXd A0(2, 2), A1(2, 2), A2(2, 2);
  A0 << 0.1, -0.30000000000000004, 1e-17, 3.0;
  A1 << -1.0 / 3.0, 0.0, 2.5, -0.7071067811865476;
  A2 << 1e300, -1e-300, 0.0, 1.0;
  sys.matrices = {A0, A1, A2};

  const DdeSystem back = parse_system(serialize_system(sys));
  REQUIRE(back.n == sys.n);
  REQUIRE(back.m == sys.m);
  for (int k = 0; k <= 2; k++)
  {
    CHECK((back.matrices[k].array() == sys.matrices[k].array()).all());
  }

  const std::string path = "/tmp/critdelay_model_roundtrip.json";
  save_system(sys, path);
  const DdeSystem loaded = load_system(path);
  for (int k = 0; k <= 2; k++)
  {
    CHECK((loaded.matrices[k].array() == sys.matrices[k].array()).all());
  }
  std::remove(path.c_str());
}

TEST_CASE("malformed model files are rejected with input_error")
{
  CHECK_THROWS_AS(parse_system("not json"), input_error);
  CHECK_THROWS_AS(parse_system("{}"), input_error);
  CHECK_THROWS_AS(parse_system(R"({"n": 1, "m": 1, "A": [[[0.0]]]})"),
                  input_error);
  CHECK_THROWS_AS(
      parse_system(R"({"n": 2, "m": 1, "A": [[[0.0,0.0],[0.0,0.0]], [[0.0],[0.0,0.0]]]})"),
      input_error);
  CHECK_THROWS_AS(load_system("/nonexistent/model.json"), input_error);
}
