// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "critdelay/cli.hpp"
#include "critdelay/errors.hpp"

namespace
{

std::vector<std::string> split_list(const std::string &text)
{
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text)
  {
    if (c == ',')
    {
      parts.push_back(cur);
      cur.clear();
    }
    else
    {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

Eigen::VectorXi parse_int_list(const std::string &text)
{
  const auto parts = split_list(text);
  Eigen::VectorXi out(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); i++)
  {
    std::size_t pos = 0;
    out[static_cast<Eigen::Index>(i)] = std::stoi(parts[i], &pos);
    if (pos != parts[i].size())
    {
      throw critdelay::input_error("bad integer in list: " + parts[i]);
    }
  }
  return out;
}

std::vector<double> parse_double_list(const std::string &text)
{
  const auto parts = split_list(text);
  std::vector<double> out;
  for (const auto &p : parts)
  {
    std::size_t pos = 0;
    out.push_back(std::stod(p, &pos));
    if (pos != p.size())
    {
      throw critdelay::input_error("bad number in list: " + p);
    }
  }
  return out;
}

int env_threads()
{
  const char *raw = std::getenv("CRITDELAY_THREADS");
  if (raw == nullptr)
  {
    return 1;
  }
  const int n = std::atoi(raw);
  return n >= 1 ? n : 1;
}

void add_sweep_flags(CLI::App *cmd, critdelay::SweepConfig &cfg)
{
  cmd->add_option("--delta", cfg.delta, "Angle grid step");
  cmd->add_option("--pmax", cfg.p_max, "Branch index bound");
  cmd->add_option("--hmax", cfg.h_max, "Largest reported delay");
  cmd->add_option("--unit-tol", cfg.unit_tol, "Unit-circle tolerance");
  cmd->add_option("--omega-tol", cfg.omega_tol, "Frequency realness tolerance");
  cmd->add_option("--residual-tol", cfg.residual_tol,
                  "Residual tolerance (<= 0 selects the automatic value)");
  cmd->add_option("--gap-tol", cfg.gap_tol, "Rank-one gap tolerance");
  cmd->add_flag("--cayley", cfg.use_cayley,
                "Solve the transformed pencil with real-line filtering");
}

void add_output_flags(CLI::App *cmd, critdelay::OutputOptions &out)
{
  cmd->add_option("--format", out.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("-o,--output", out.output,
                  "Output file (default: stdout)");
  cmd->add_option("--threads", out.threads, "Worker threads");
}

}  // namespace

int main(int argc, char **argv)
{
  setenv("OPENBLAS_NUM_THREADS", "1", 0);

  CLI::App app{"Critical delays of linear delay-differential systems"};
  app.require_subcommand(1);

  critdelay::SweepConfig sweep_cfg;
  critdelay::OutputOptions sweep_out;
  sweep_out.threads = env_threads();
  std::string sweep_model;
  auto *sweep = app.add_subcommand(
      "sweep", "Free-delay sweep over the angle grid");
  sweep->add_option("model", sweep_model, "Model JSON file")->required();
  add_sweep_flags(sweep, sweep_cfg);
  add_output_flags(sweep, sweep_out);

  critdelay::SweepConfig comm_cfg;
  critdelay::OutputOptions comm_out;
  comm_out.threads = env_threads();
  std::string comm_model;
  std::string comm_direction;
  auto *comm = app.add_subcommand(
      "commensurate", "Critical delays along an integer delay ray");
  comm->add_option("model", comm_model, "Model JSON file")->required();
  comm->add_option("--direction", comm_direction,
                   "Comma-separated positive integers, one per delay")
      ->required();
  add_sweep_flags(comm, comm_cfg);
  add_output_flags(comm, comm_out);

  critdelay::SweepConfig verify_cfg;
  std::string verify_model, verify_csv;
  auto *verify = app.add_subcommand(
      "verify", "Re-check candidate rows against the residual oracle");
  verify->add_option("model", verify_model, "Model JSON file")->required();
  verify->add_option("candidates", verify_csv, "Result CSV to re-check")
      ->required();
  verify->add_option("--residual-tol", verify_cfg.residual_tol,
                     "Residual tolerance (<= 0 selects the automatic value)");

  int heat_n = 8;
  double heat_beta = 10.0;
  std::string heat_kappa = "4,10,4";
  std::string heat_positions = "0.33333333333333333,0.5,0.75";
  std::string heat_output;
  auto *heat = app.add_subcommand(
      "gen-heat", "Generate the discretized heated-rod benchmark model");
  heat->add_option("--n", heat_n, "Number of spatial nodes");
  heat->add_option("--beta", heat_beta, "Reaction coefficient");
  heat->add_option("--kappa", heat_kappa,
                   "Comma-separated feedback gains kappa_0,kappa_1,kappa_2");
  heat->add_option("--positions", heat_positions,
                   "Comma-separated actuation positions x_0,x_1,x_2");
  heat->add_option("-o,--output", heat_output,
                   "Model file to write (default: stdout)");

  critdelay::SweepConfig scalar_cfg;
  critdelay::OutputOptions scalar_out;
  std::string scalar_coeffs;
  auto *scalar = app.add_subcommand(
      "scalar", "Closed-form sweep for scalar systems");
  scalar->add_option("--a", scalar_coeffs,
                     "Comma-separated coefficients a_0,a_1,..,a_m")
      ->required();
  add_sweep_flags(scalar, scalar_cfg);
  add_output_flags(scalar, scalar_out);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? critdelay::kExitOk : critdelay::kExitInputError;
  }

  try
  {
    if (sweep->parsed())
    {
      return critdelay::cmd_sweep(sweep_model, sweep_cfg, sweep_out);
    }
    if (comm->parsed())
    {
      return critdelay::cmd_commensurate(
          comm_model, parse_int_list(comm_direction), comm_cfg, comm_out);
    }
    if (verify->parsed())
    {
      return critdelay::cmd_verify(verify_model, verify_csv, verify_cfg);
    }
    if (heat->parsed())
    {
      const auto kappa = parse_double_list(heat_kappa);
      const auto pos = parse_double_list(heat_positions);
      if (kappa.size() != 3 || pos.size() != 3)
      {
        throw critdelay::input_error(
            "gen-heat needs exactly three gains and three positions");
      }
      return critdelay::cmd_gen_heat(heat_n, heat_beta,
                                     {kappa[0], kappa[1], kappa[2]},
                                     {pos[0], pos[1], pos[2]}, heat_output);
    }
    if (scalar->parsed())
    {
      return critdelay::cmd_scalar(parse_double_list(scalar_coeffs),
                                   scalar_cfg, scalar_out);
    }
  }
  catch (const critdelay::input_error &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return critdelay::kExitInputError;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return critdelay::kExitSolverFailure;
  }
  return critdelay::kExitInputError;
}
