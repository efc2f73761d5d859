// SPDX-License-Identifier: Apache-2.0

#include "critdelay/cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "critdelay/errors.hpp"
#include "critdelay/scalar_forms.hpp"

namespace critdelay
{

namespace
{
constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double phi)
{
  return std::remainder(phi, 2.0 * kPi);
}

void write_output(const OutputOptions &out, const std::string &text)
{
  if (out.output.empty())
  {
    std::cout << text;
    return;
  }
  std::ofstream f(out.output);
  if (!f)
  {
    throw input_error("cannot open output file: " + out.output);
  }
  f << text;
}

nlohmann::json config_json(const SweepConfig &cfg)
{
  return nlohmann::json{{"delta", cfg.delta},
                        {"p_max", cfg.p_max},
                        {"h_max", cfg.h_max},
                        {"unit_tol", cfg.unit_tol},
                        {"omega_tol", cfg.omega_tol},
                        {"residual_tol", cfg.residual_tol},
                        {"gap_tol", cfg.gap_tol},
                        {"use_cayley", cfg.use_cayley}};
}

std::int64_t count_valid(const std::vector<InfiniteMode> &modes)
{
  std::int64_t n = 0;
  for (const auto &mode : modes)
  {
    if (mode.valid)
    {
      n++;
    }
  }
  return n;
}

RunReport make_report(std::size_t accepted,
                      const std::map<std::string, std::int64_t> &rejects,
                      std::int64_t infinite_valid, double wall,
                      const SweepConfig &cfg, int threads)
{
  RunReport rep;
  rep.accepted = static_cast<std::int64_t>(accepted);
  rep.rejected_by_reason = rejects;
  rep.infinite_modes = infinite_valid;
  rep.wall_time = wall;
  rep.config_echo = cfg;
  rep.threads = threads;
  return rep;
}

void emit_results(const OutputOptions &out, int m,
                  const std::vector<CriticalPoint> &pts,
                  const std::vector<InfiniteMode> &modes,
                  const RunReport &report, bool commensurate_row)
{
  if (out.format == "json")
  {
    write_output(out, render_sweep_json(m, pts, report, commensurate_row));
  }
  else
  {
    write_output(out, commensurate_row ? render_commensurate_csv(m, pts)
                                       : render_sweep_csv(m, pts));
    if (!out.output.empty() && count_valid(modes) > 0)
    {
      std::ofstream f(out.output + ".infinite.csv");
      if (!f)
      {
        throw input_error("cannot open output file: " + out.output +
                          ".infinite.csv");
      }
      f << render_infinite_csv(m, modes);
    }
  }
  std::cerr << render_report_text(report);
}

int guard(const std::function<int()> &body)
{
  try
  {
    return body();
  }
  catch (const input_error &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  catch (const solver_error &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  }
}

std::vector<std::string> split_csv_line(const std::string &line)
{
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line)
  {
    if (c == ',')
    {
      fields.push_back(cur);
      cur.clear();
    }
    else if (c != '\r')
    {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

bool parse_field(const std::string &s, double &out)
{
  try
  {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
    {
      pos++;
    }
    return pos == s.size();
  }
  catch (...)
  {
    return false;
  }
}
}  // namespace

std::string format_double(double x)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string render_sweep_csv(int m, const std::vector<CriticalPoint> &pts)
{
  std::ostringstream os;
  for (int k = 1; k < m; k++)
  {
    os << "phi_" << k << ",";
  }
  os << "z_re,z_im,omega,";
  for (int k = 1; k <= m; k++)
  {
    os << "h_" << k << ",";
  }
  for (int k = 1; k <= m; k++)
  {
    os << "p_" << k << ",";
  }
  os << "residual,gap\n";
  for (const auto &pt : pts)
  {
    for (int k = 0; k < m - 1; k++)
    {
      os << format_double(pt.phi[k]) << ",";
    }
    os << format_double(pt.z.real()) << "," << format_double(pt.z.imag())
       << "," << format_double(pt.omega) << ",";
    for (int k = 0; k < m; k++)
    {
      os << format_double(pt.delays[k]) << ",";
    }
    for (int k = 0; k < m; k++)
    {
      os << pt.branches[k] << ",";
    }
    os << format_double(pt.residual) << "," << format_double(pt.gap) << "\n";
  }
  return os.str();
}

std::string render_commensurate_csv(int m,
                                    const std::vector<CriticalPoint> &pts)
{
  std::ostringstream os;
  os << "h,z_re,z_im,omega,";
  for (int k = 1; k <= m; k++)
  {
    os << "h_" << k << ",";
  }
  os << "p,residual,gap\n";
  for (const auto &pt : pts)
  {
    os << format_double(pt.base_delay) << "," << format_double(pt.z.real())
       << "," << format_double(pt.z.imag()) << "," << format_double(pt.omega)
       << ",";
    for (int k = 0; k < m; k++)
    {
      os << format_double(pt.delays[k]) << ",";
    }
    os << pt.base_branch << "," << format_double(pt.residual) << ","
       << format_double(pt.gap) << "\n";
  }
  return os.str();
}

std::string render_infinite_csv(int m, const std::vector<InfiniteMode> &modes)
{
  std::ostringstream os;
  for (int k = 1; k < m; k++)
  {
    os << "phi_" << k << ",";
  }
  os << "omega,g_residual,valid,hint\n";
  for (const auto &mode : modes)
  {
    for (int k = 0; k < m - 1; k++)
    {
      os << format_double(mode.phi[k]) << ",";
    }
    os << format_double(mode.omega) << "," << format_double(mode.g_residual)
       << "," << (mode.valid ? 1 : 0) << "," << mode.hint << "\n";
  }
  return os.str();
}

std::string render_sweep_json(int m, const std::vector<CriticalPoint> &pts,
                              const RunReport &report, bool commensurate_row)
{
  nlohmann::json points = nlohmann::json::array();
  for (const auto &pt : pts)
  {
    nlohmann::json row;
    row["phi"] = std::vector<double>(pt.phi.data(), pt.phi.data() + pt.phi.size());
    row["z_re"] = pt.z.real();
    row["z_im"] = pt.z.imag();
    row["omega"] = pt.omega;
    row["h"] =
        std::vector<double>(pt.delays.data(), pt.delays.data() + pt.delays.size());
    row["p"] = std::vector<int>(pt.branches.data(),
                                pt.branches.data() + pt.branches.size());
    row["residual"] = pt.residual;
    row["gap"] = pt.gap;
    if (commensurate_row)
    {
      row["h_base"] = pt.base_delay;
      row["p_base"] = pt.base_branch;
    }
    points.push_back(std::move(row));
  }

  nlohmann::json rejects = nlohmann::json::object();
  for (const auto &[reason, count] : report.rejected_by_reason)
  {
    rejects[reason] = count;
  }
  nlohmann::json meta{{"accepted", report.accepted},
                      {"rejected_by_reason", rejects},
                      {"infinite_modes", report.infinite_modes},
                      {"wall_time", report.wall_time},
                      {"threads", report.threads},
                      {"m", m},
                      {"config", config_json(report.config_echo)}};
  nlohmann::json doc{{"points", points}, {"meta", meta}};
  return doc.dump(2) + "\n";
}

std::string render_report_text(const RunReport &report)
{
  std::ostringstream os;
  os << "accepted: " << report.accepted << "\n";
  os << "infinite modes: " << report.infinite_modes << "\n";
  for (const auto &[reason, count] : report.rejected_by_reason)
  {
    os << "rejected[" << reason << "]: " << count << "\n";
  }
  os << "threads: " << report.threads << "\n";
  os << "wall time: " << format_double(report.wall_time) << " s\n";
  return os.str();
}

std::vector<VerifyRow> verify_candidates(const DdeSystem &sys,
                                         const std::string &csv_text,
                                         double residual_tol)
{
  std::vector<VerifyRow> rows;
  std::istringstream is(csv_text);
  std::string line;
  if (!std::getline(is, line))
  {
    throw input_error("candidate file is empty");
  }
  const auto header = split_csv_line(line);
  int omega_col = -1;
  std::vector<int> h_cols(sys.m, -1);
  for (int c = 0; c < static_cast<int>(header.size()); c++)
  {
    if (header[c] == "omega")
    {
      omega_col = c;
    }
    for (int k = 1; k <= sys.m; k++)
    {
      if (header[c] == "h_" + std::to_string(k))
      {
        h_cols[k - 1] = c;
      }
    }
  }
  if (omega_col < 0)
  {
    throw input_error("candidate file has no omega column");
  }
  for (int k = 0; k < sys.m; k++)
  {
    if (h_cols[k] < 0)
    {
      throw input_error("candidate file has no h_" + std::to_string(k + 1) +
                        " column");
    }
  }

  int line_no = 1;
  while (std::getline(is, line))
  {
    line_no++;
    if (line.empty() || line == "\r")
    {
      continue;
    }
    VerifyRow row;
    row.line = line_no;
    const auto fields = split_csv_line(line);
    const int needed =
        std::max(omega_col, *std::max_element(h_cols.begin(), h_cols.end()));
    if (static_cast<int>(fields.size()) <= needed)
    {
      row.note = "too few columns";
      rows.push_back(std::move(row));
      continue;
    }
    bool ok = parse_field(fields[omega_col], row.omega);
    row.delays.resize(sys.m);
    for (int k = 0; k < sys.m && ok; k++)
    {
      ok = parse_field(fields[h_cols[k]], row.delays[k]);
    }
    if (!ok)
    {
      row.note = "unparseable numeric field";
      rows.push_back(std::move(row));
      continue;
    }
    row.parsed = true;
    if (row.omega == 0.0)
    {
      row.note = "steady-state candidate, not scored";
      rows.push_back(std::move(row));
      continue;
    }
    row.residual = smallest_singular_value(eval_char_matrix(
        sys, std::complex<double>(0.0, row.omega), row.delays));
    row.pass = row.residual <= residual_tol;
    if (!row.pass)
    {
      row.note = "residual above tolerance";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_sweep(const std::string &model_path, const SweepConfig &cfg,
              const OutputOptions &out)
{
  return guard([&]() {
    const DdeSystem sys = load_system(model_path);
    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult result = sweep(sys, cfg, out.threads);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const RunReport report =
        make_report(result.points.size(), result.rejected_by_reason,
                    count_valid(result.infinite_modes), wall, cfg, out.threads);
    emit_results(out, sys.m, result.points, result.infinite_modes, report,
                 false);
    return kExitOk;
  });
}

int cmd_commensurate(const std::string &model_path,
                     const Eigen::VectorXi &direction, const SweepConfig &cfg,
                     const OutputOptions &out)
{
  return guard([&]() {
    const DdeSystem sys = load_system(model_path);
    const auto t0 = std::chrono::steady_clock::now();
    const CommensurateResult result =
        critical_delays_commensurate(sys, direction, cfg);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const RunReport report =
        make_report(result.points.size(), result.rejected_by_reason, 0, wall,
                    cfg, 1);
    emit_results(out, sys.m, result.points, {}, report, true);
    return kExitOk;
  });
}

int cmd_verify(const std::string &model_path,
               const std::string &candidates_path, const SweepConfig &cfg)
{
  return guard([&]() {
    const DdeSystem sys = load_system(model_path);
    std::ifstream f(candidates_path);
    if (!f)
    {
      throw input_error("cannot open candidate file: " + candidates_path);
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    const double tol = cfg.resolved_residual_tol(sys);
    const auto rows = verify_candidates(sys, buf.str(), tol);

    std::int64_t pass = 0, fail = 0, flagged = 0, bad = 0;
    for (const auto &row : rows)
    {
      if (!row.parsed)
      {
        bad++;
        std::cout << "line " << row.line << ": ERROR " << row.note << "\n";
      }
      else if (!row.note.empty() && !row.pass)
      {
        if (row.note.rfind("steady-state", 0) == 0)
        {
          flagged++;
          std::cout << "line " << row.line << ": FLAGGED " << row.note
                    << "\n";
        }
        else
        {
          fail++;
          std::cout << "line " << row.line
                    << ": FAIL residual=" << format_double(row.residual)
                    << " tol=" << format_double(tol) << "\n";
        }
      }
      else
      {
        pass++;
        std::cout << "line " << row.line
                  << ": pass residual=" << format_double(row.residual)
                  << "\n";
      }
    }
    std::cout << "verified " << rows.size() << " rows: " << pass << " pass, "
              << fail << " fail, " << flagged << " flagged, " << bad
              << " unparseable\n";
    return (fail == 0 && bad == 0) ? kExitOk : kExitInputError;
  });
}

int cmd_gen_heat(int n, double beta, const std::array<double, 3> &kappa,
                 const std::array<double, 3> &positions,
                 const std::string &output_path)
{
  return guard([&]() {
    const DdeSystem sys = build_heat_system(n, beta, kappa, positions);
    if (output_path.empty())
    {
      std::cout << serialize_system(sys);
    }
    else
    {
      save_system(sys, output_path);
    }
    return kExitOk;
  });
}

int cmd_scalar(const std::vector<double> &coeffs, const SweepConfig &cfg,
               const OutputOptions &out)
{
  return guard([&]() {
    if (coeffs.size() < 2)
    {
      throw input_error("need at least two coefficients a0, a1");
    }
    cfg.validate();
    ScalarSystem scalar;
    scalar.a = Eigen::Map<const Eigen::VectorXd>(
        coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    const int m = scalar.m();

    DdeSystem sys;
    sys.n = 1;
    sys.m = m;
    for (double a : coeffs)
    {
      sys.matrices.push_back(Eigen::MatrixXd::Constant(1, 1, a));
    }
    const double residual_tol = cfg.resolved_residual_tol(sys);

    const auto t0 = std::chrono::steady_clock::now();
    const int dims = m - 1;
    const int K =
        static_cast<int>(std::floor(2.0 * kPi / cfg.delta - 1e-9)) + 1;
    long total = 1;
    for (int d = 0; d < dims; d++)
    {
      total *= K;
    }

    std::vector<CriticalPoint> points;
    std::map<std::string, std::int64_t> rejects;

    const int span = 2 * cfg.p_max + 1;
    long tuples = 1;
    for (int k = 0; k < m; k++)
    {
      tuples *= span;
    }

    for (long f = 0; f < total; f++)
    {
      Eigen::VectorXd phi(dims);
      long rem = f;
      for (int d = 0; d < dims; d++)
      {
        phi[d] = -kPi + (rem % K) * cfg.delta;
        rem /= K;
      }
      for (int sign : {+1, -1})
      {
        for (long t = 0; t < tuples; t++)
        {
          Eigen::VectorXi branches(m);
          long r = t;
          for (int k = 0; k < m; k++)
          {
            branches[k] = static_cast<int>(r % span) - cfg.p_max;
            r /= span;
          }
          const auto pt = scalar_critical_delays(scalar, phi, sign, branches);
          if (!pt)
          {
            continue;
          }
          if (std::abs(pt->omega) < cfg.omega_tol)
          {
            rejects["omega_near_zero"]++;
            continue;
          }
          bool in_range = true;
          for (int k = 0; k < m; k++)
          {
            if (!(pt->delays[k] >= 0.0 && pt->delays[k] <= cfg.h_max))
            {
              in_range = false;
              break;
            }
          }
          if (!in_range)
          {
            continue;
          }
          const double res = smallest_singular_value(eval_char_matrix(
              sys, std::complex<double>(0.0, pt->omega), pt->delays));
          if (res > residual_tol)
          {
            rejects["residual"]++;
            continue;
          }
          CriticalPoint rec;
          rec.phi = phi;
          rec.z = std::exp(std::complex<double>(0.0, -1.0) *
                           (pt->delays[m - 1] * pt->omega -
                            2.0 * kPi * branches[m - 1]));
          rec.omega = pt->omega;
          rec.v = Eigen::VectorXcd::Ones(1);
          rec.residual = res;
          rec.gap = 0.0;
          rec.delays = pt->delays;
          rec.branches = branches;
          points.push_back(std::move(rec));
        }
      }
    }

    std::sort(points.begin(), points.end(),
              [](const CriticalPoint &x, const CriticalPoint &y) {
                for (Eigen::Index i = 0; i < x.phi.size(); i++)
                {
                  if (x.phi[i] != y.phi[i])
                  {
                    return x.phi[i] < y.phi[i];
                  }
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
                for (Eigen::Index i = 0; i < x.delays.size(); i++)
                {
                  if (x.delays[i] != y.delays[i])
                  {
                    return x.delays[i] < y.delays[i];
                  }
                }
                return false;
              });
    std::vector<CriticalPoint> dedup;
    for (auto &pt : points)
    {
      if (!dedup.empty())
      {
        const auto &prev = dedup.back();
        const double scale = 1.0 + std::max(prev.delays.cwiseAbs().maxCoeff(),
                                            std::abs(prev.omega));
        const double dh = (prev.delays - pt.delays).cwiseAbs().maxCoeff();
        const double dw = std::abs(prev.omega - pt.omega);
        if (std::max(dh, dw) <= 1e-8 * scale)
        {
          rejects["duplicate"]++;
          continue;
        }
      }
      dedup.push_back(std::move(pt));
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const RunReport report =
        make_report(dedup.size(), rejects, 0, wall, cfg, 1);
    emit_results(out, m, dedup, {}, report, false);
    return kExitOk;
  });
}

}  // namespace critdelay
