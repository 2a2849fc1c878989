#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mfstokes {

enum class RunStatus { converged, max_iter, diverged };

std::string to_string(RunStatus status);

struct RunConfigSummary {
  std::string benchmark;
  int levels = 0;
  int k_A = 0;
  int k_S = 0;
  int m = 0;
  std::string cycle = "W";
  std::string diag = "loc";
  double dt = 0.0;  ///< 0 for stationary problems
};

struct RunRecord {
  RunConfigSummary config;
  int dofs = 0;
  std::vector<double> residuals;
  double t_iter = 0.0;  ///< median seconds per iteration
  RunStatus status = RunStatus::max_iter;
};

/// (r^j / r^{j-3})^{1/3} for the final iteration j; empty below four entries.
std::optional<double> compute_q(const std::vector<double>& residuals);

/// T_iter log(eps) / log(q); empty unless 0 < q < 1 and T_iter > 0.
std::optional<double> compute_T(double q, double t_iter, double eps = 0.1);

/// Converged runs stay converged; q >= 1 or a non-finite residual mark a run
/// as diverged; everything else keeps the solver's verdict.
RunStatus classify(const std::vector<double>& residuals, RunStatus solver_status);

double median(std::vector<double> values);

/// Shown value of q, or "-" when the run diverged or q is undefined.
std::string render_q(const RunRecord& record, int precision = 3);

/// Rows m, columns "kA/kS", cells q or "-".
void aggregate_heatmap(std::ostream& out, const std::vector<RunRecord>& records);
/// Same layout with eps-reductions per second, 1 / T(eps).
void aggregate_reduction_rate(std::ostream& out, const std::vector<RunRecord>& records,
                              double eps = 0.1);

/// Column order: benchmark,levels,dofs,k_A,k_S,m,cycle,diag,dt,iterations,
/// final_residual_ratio,q,t_iter,T,status
void write_record_header(std::ostream& out);
void write_record(std::ostream& out, const RunRecord& record, bool include_timing = true);

}  // namespace mfstokes
