// SPDX-License-Identifier: Apache-2.0

#ifndef CRITDELAY_CLI_HPP
#define CRITDELAY_CLI_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "critdelay/commensurate.hpp"
#include "critdelay/free_delay.hpp"
#include "critdelay/model.hpp"

namespace critdelay
{

// Summary of one CLI run; accepted always equals the number of rows
// written to the output file.
struct RunReport
{
  std::int64_t accepted = 0;
  std::map<std::string, std::int64_t> rejected_by_reason;
  std::int64_t infinite_modes = 0; // valid delay-independent modes
  double wall_time = 0.0;          // seconds
  SweepConfig config_echo;
  int threads = 1;
};

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitSolverFailure = 2;

// Options resolved from flags (and CRITDELAY_THREADS for threads).
struct OutputOptions
{
  std::string format = "csv"; // csv | json
  std::string output;         // empty = stdout
  int threads = 1;
};

// Fixed-format float printing: 17 significant digits, round-trip safe.
std::string format_double(double x);

// Result serialization. The free-sweep CSV schema is
//   phi_1..phi_{m-1}, z_re, z_im, omega, h_1..h_m, p_1..p_m, residual, gap
// and the commensurate schema
//   h, z_re, z_im, omega, h_1..h_m, p, residual, gap.
std::string render_sweep_csv(int m, const std::vector<CriticalPoint> &pts);
std::string render_commensurate_csv(int m,
                                    const std::vector<CriticalPoint> &pts);
std::string render_infinite_csv(int m, const std::vector<InfiniteMode> &modes);
std::string render_sweep_json(int m, const std::vector<CriticalPoint> &pts,
                              const RunReport &report, bool commensurate_row);
std::string render_report_text(const RunReport &report);

// One row of a verification run: the residual oracle re-evaluated at a
// candidate (h, omega) read back from a result file.
struct VerifyRow
{
  int line = 0;
  bool parsed = false;
  bool pass = false;
  double omega = 0.0;
  Eigen::VectorXd delays;
  double residual = 0.0;
  std::string note;
};

// Re-checks sigma_min of the characteristic matrix for every data row
// of a result CSV (columns omega and h_1..h_m located by header).
// omega = 0 rows are flagged as steady-state candidates instead of
// being scored.
std::vector<VerifyRow> verify_candidates(const DdeSystem &sys,
                                         const std::string &csv_text,
                                         double residual_tol);

// Subcommand drivers; each returns an exit code and reports through
// stdout/stderr.
int cmd_sweep(const std::string &model_path, const SweepConfig &cfg,
              const OutputOptions &out);
int cmd_commensurate(const std::string &model_path,
                     const Eigen::VectorXi &direction, const SweepConfig &cfg,
                     const OutputOptions &out);
int cmd_verify(const std::string &model_path,
               const std::string &candidates_path, const SweepConfig &cfg);
int cmd_gen_heat(int n, double beta, const std::array<double, 3> &kappa,
                 const std::array<double, 3> &positions,
                 const std::string &output_path);
int cmd_scalar(const std::vector<double> &coeffs, const SweepConfig &cfg,
               const OutputOptions &out);

}  // namespace critdelay

#endif  // CRITDELAY_CLI_HPP
