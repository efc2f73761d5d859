// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>

#include <doctest.h>

#include "critdelay/commensurate.hpp"
#include "critdelay/errors.hpp"
#include "critdelay/tensor_linalg.hpp"

using namespace critdelay;
using cd = std::complex<double>;

namespace
{
constexpr double kPi = 3.14159265358979323846;

DdeSystem scalar_system(std::initializer_list<double> coeffs)
{
  DdeSystem sys;
  sys.n = 1;
  sys.m = static_cast<int>(coeffs.size()) - 1;
  for (double a : coeffs)
  {
    sys.matrices.push_back(Eigen::MatrixXd::Constant(1, 1, a));
  }
  return sys;
}

// 3 x 3 system built to be critical on the ray (1, 2) at exactly
// h = 0.9 with omega = 1.1. Nonsymmetric, so eigenvalue orientation
// mistakes in the block companion would miss it.
DdeSystem planted_ray()
{
  DdeSystem sys;
  sys.n = 3;
  sys.m = 2;
  Eigen::MatrixXd A0(3, 3), A1(3, 3), A2(3, 3);
  A0 << -0.029648241501499958, -0.16412082723783405, -0.2316153463384763,
      0.09565708427672294, -0.085039434342862319, 0.23681784489928062,
      0.0027418970283812783, 0.046468362944298916, 0.18407016237426282;
  A1 << 0.20744496312347835, -0.20269678464203469, -0.28089879573940857,
      -0.41830351238460495, -0.21967419146810105, -0.021940114687361564,
      -0.30226500804065132, 0.020182365690054466, -0.21729614967349356;
  A2 << -0.25492455063428254, -0.31482177809035972, -0.18244622550173378,
      -0.23435249736501504, -0.64127617830595063, -0.22201028044813409,
      0.017118644017435215, 0.0030636471796688519, -0.34608195176929768;
  sys.matrices = {A0, A1, A2};
  return sys;
}
}  // namespace

TEST_CASE("polynomial pencil coefficient placement for direction (1, 2)")
{
  const DdeSystem sys = scalar_system({-1.0, -1.0, -0.5});
  Eigen::VectorXi dir(2);
  dir << 1, 2;
  const PolynomialPencil p = build_polynomial_pencil(sys, dir);
  REQUIRE(p.coeffs.size() == 5);
  CHECK(std::abs(p.coeffs[4](0, 0) - cd(-0.5, 0)) < 1e-15);
  CHECK(std::abs(p.coeffs[3](0, 0) - cd(-1.0, 0)) < 1e-15);
  CHECK(std::abs(p.coeffs[2](0, 0) - cd(-2.0, 0)) < 1e-15);
  CHECK(std::abs(p.coeffs[1](0, 0) - cd(-1.0, 0)) < 1e-15);
  CHECK(std::abs(p.coeffs[0](0, 0) - cd(-0.5, 0)) < 1e-15);
}

TEST_CASE("polynomial pencil blocks for a matrix system")
{
  const DdeSystem sys = planted_ray();
  Eigen::VectorXi dir(2);
  dir << 1, 2;
  const PolynomialPencil p = build_polynomial_pencil(sys, dir);
  REQUIRE(p.coeffs.size() == 5);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(3, 3);
  const Eigen::MatrixXcd A0 = sys.matrices[0];
  const Eigen::MatrixXcd A1 = sys.matrices[1];
  const Eigen::MatrixXcd A2 = sys.matrices[2];
  CHECK((p.coeffs[4] - kron(I, A2)).norm() < 1e-14);
  CHECK((p.coeffs[3] - kron(I, A1)).norm() < 1e-14);
  CHECK((p.coeffs[2] - (kron(I, A0) + kron(A0, I))).norm() < 1e-14);
  CHECK((p.coeffs[1] - kron(A1, I)).norm() < 1e-14);
  CHECK((p.coeffs[0] - kron(A2, I)).norm() < 1e-14);
}

TEST_CASE("polynomial pencil validates the direction")
{
  const DdeSystem sys = scalar_system({-1.0, -1.0, -0.5});
  Eigen::VectorXi zero(2);
  zero << 0, 1;
  CHECK_THROWS_AS(build_polynomial_pencil(sys, zero), input_error);
  Eigen::VectorXi unordered(2);
  unordered << 2, 1;
  CHECK_THROWS_AS(build_polynomial_pencil(sys, unordered), input_error);
  Eigen::VectorXi short_dir(1);
  short_dir << 1;
  CHECK_THROWS_AS(build_polynomial_pencil(sys, short_dir), input_error);
}

TEST_CASE("block companion reproduces the polynomial eigenvalues")
{
  // Equal-delay ray of the two-delay example collapses to the scalar
  // polynomial -z^2/2 - 2z - 3/2 ... after accumulation:
  // B_2 = a_2, B_1 = a_1 + a_2 ... here built directly and solved.
  const DdeSystem sys = scalar_system({-1.0, -1.0, -0.5});
  Eigen::VectorXi dir(2);
  dir << 1, 1;
  const PolynomialPencil p = build_polynomial_pencil(sys, dir);
  REQUIRE(p.coeffs.size() == 3);
  CHECK(std::abs(p.coeffs[2](0, 0) - cd(-1.5, 0)) < 1e-15);
  CHECK(std::abs(p.coeffs[1](0, 0) - cd(-2.0, 0)) < 1e-15);
  CHECK(std::abs(p.coeffs[0](0, 0) - cd(-1.5, 0)) < 1e-15);

  const CompanionPair pair = companion_linearize_poly(p);
  const auto eigs = solve_generalized_eigen(pair.A, pair.B);
  REQUIRE(eigs.size() == 2);
  for (const auto &e : eigs)
  {
    REQUIRE_FALSE(e.is_infinite);
    const cd z = e.value;
    // Direct reproduction: the companion eigenvalue solves the
    // polynomial itself, no reversal.
    CHECK(std::abs(-1.5 * z * z - 2.0 * z - 1.5) < 1e-12);
    CHECK(std::abs(z - cd(-2.0 / 3.0, 0)) == doctest::Approx(std::sqrt(5.0) / 3.0).epsilon(1e-10));
  }
}

TEST_CASE("planted ray crossing is recovered with the correct orientation")
{
  const DdeSystem sys = planted_ray();
  Eigen::VectorXi dir(2);
  dir << 1, 2;
  SweepConfig cfg;

  for (bool cayley : {false, true})
  {
    CAPTURE(cayley);
    cfg.use_cayley = cayley;
    const CommensurateResult result =
        critical_delays_commensurate(sys, dir, cfg);
    REQUIRE_FALSE(result.points.empty());

    bool found = false;
    for (const auto &pt : result.points)
    {
      if (std::abs(pt.base_delay - 0.9) < 1e-7 &&
          std::abs(pt.omega - 1.1) < 1e-7)
      {
        found = true;
        CHECK(pt.delays(0) == doctest::Approx(0.9).epsilon(1e-9));
        CHECK(pt.delays(1) == doctest::Approx(1.8).epsilon(1e-9));
        CHECK(pt.residual < 1e-10);
        CHECK(std::abs(pt.z - std::exp(cd(0.0, -0.9 * 1.1))) < 1e-7);
      }
    }
    CHECK(found);
  }
}

TEST_CASE("ray results satisfy the reported invariants")
{
  const DdeSystem sys = planted_ray();
  Eigen::VectorXi dir(2);
  dir << 1, 2;
  SweepConfig cfg;
  const CommensurateResult result =
      critical_delays_commensurate(sys, dir, cfg);
  REQUIRE_FALSE(result.points.empty());
  const double tol = cfg.resolved_residual_tol(sys);
  for (const auto &pt : result.points)
  {
    CHECK(pt.base_delay > 0.0);
    CHECK(pt.base_delay <= cfg.h_max);
    CHECK(pt.delays(0) == doctest::Approx(pt.base_delay * 1.0));
    CHECK(pt.delays(1) == doctest::Approx(pt.base_delay * 2.0));
    CHECK(pt.residual <= tol);
    CHECK(std::abs(pt.z - std::exp(cd(0.0, -pt.base_delay * pt.omega))) <
          1e-12);
    const double recon =
        (-std::arg(pt.z) + 2.0 * kPi * pt.base_branch) / pt.omega;
    CHECK(recon == doctest::Approx(pt.base_delay).epsilon(1e-9));
  }
  for (std::size_t i = 1; i < result.points.size(); i++)
  {
    CHECK(result.points[i - 1].base_delay <= result.points[i].base_delay);
  }
}

TEST_CASE("common factors of the direction are divided out")
{
  const DdeSystem sys = scalar_system({0.0, -1.0});
  Eigen::VectorXi dir(1);
  dir << 3;
  SweepConfig cfg;
  const CommensurateResult result =
      critical_delays_commensurate(sys, dir, cfg);
  REQUIRE_FALSE(result.points.empty());
  const auto &first = result.points.front();
  CHECK(first.base_delay == doctest::Approx(kPi / 6.0).epsilon(1e-10));
  CHECK(first.delays(0) == doctest::Approx(kPi / 2.0).epsilon(1e-10));
  CHECK(std::abs(first.z -
                 std::exp(cd(0.0, -first.base_delay * first.omega))) < 1e-12);
}

TEST_CASE("directions with the largest entry first are reordered internally")
{
  const DdeSystem a = scalar_system({-1.0, -1.0, -0.5});
  const DdeSystem b = scalar_system({-1.0, -0.5, -1.0});
  Eigen::VectorXi dir_a(2), dir_b(2);
  dir_a << 2, 1;
  dir_b << 1, 2;
  SweepConfig cfg;
  const auto ra = critical_delays_commensurate(a, dir_a, cfg);
  const auto rb = critical_delays_commensurate(b, dir_b, cfg);
  REQUIRE_FALSE(ra.points.empty());
  REQUIRE(ra.points.size() == rb.points.size());
  for (std::size_t i = 0; i < ra.points.size(); i++)
  {
    CHECK(ra.points[i].base_delay ==
          doctest::Approx(rb.points[i].base_delay).epsilon(1e-9));
    CHECK(ra.points[i].omega ==
          doctest::Approx(rb.points[i].omega).epsilon(1e-9));
    CHECK(ra.points[i].delays(0) ==
          doctest::Approx(rb.points[i].delays(1)).epsilon(1e-9));
    CHECK(ra.points[i].delays(1) ==
          doctest::Approx(rb.points[i].delays(0)).epsilon(1e-9));
  }
}

TEST_CASE("single-delay ray reduces to the classical crossing")
{
  const DdeSystem sys = scalar_system({0.0, -1.0});
  Eigen::VectorXi dir(1);
  dir << 1;
  SweepConfig cfg;
  const CommensurateResult result =
      critical_delays_commensurate(sys, dir, cfg);
  REQUIRE_FALSE(result.points.empty());
  CHECK(result.points.front().base_delay ==
        doctest::Approx(kPi / 2.0).epsilon(1e-12));
  CHECK(std::abs(result.points.front().omega) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ray search validates the direction")
{
  const DdeSystem sys = scalar_system({-1.0, -1.0, -0.5});
  SweepConfig cfg;
  Eigen::VectorXi bad(2);
  bad << 1, 0;
  CHECK_THROWS_AS(critical_delays_commensurate(sys, bad, cfg), input_error);
  Eigen::VectorXi wrong_len(3);
  wrong_len << 1, 1, 1;
  CHECK_THROWS_AS(critical_delays_commensurate(sys, wrong_len, cfg),
                  input_error);
}
