#include "mfstokes/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace mfstokes {

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_iter: return "max-iter";
    case RunStatus::diverged: return "diverged";
  }
  return "?";
}

std::optional<double> compute_q(const std::vector<double>& r) {
  if (r.size() < 4) return std::nullopt;
  const double last = r.back();
  const double before = r[r.size() - 4];
  if (!(before > 0.0) || !std::isfinite(last)) return std::nullopt;
  // extended precision keeps the cube root correctly rounded, e.g. 0.125 -> 0.5
  return static_cast<double>(std::cbrt(static_cast<long double>(last / before)));
}

std::optional<double> compute_T(double q, double t_iter, double eps) {
  if (!(q > 0.0 && q < 1.0) || !(t_iter > 0.0)) return std::nullopt;
  return t_iter * std::log(eps) / std::log(q);
}

RunStatus classify(const std::vector<double>& residuals, RunStatus solver_status) {
  for (double r : residuals)
    if (!std::isfinite(r)) return RunStatus::diverged;
  if (solver_status == RunStatus::diverged) return RunStatus::diverged;
  if (solver_status == RunStatus::converged) return RunStatus::converged;
  const auto q = compute_q(residuals);
  if (q && *q >= 1.0) return RunStatus::diverged;
  return solver_status;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string render_q(const RunRecord& record, int precision) {
  const auto q = compute_q(record.residuals);
  if (record.status == RunStatus::diverged || !q) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << *q;
  return s.str();
}

namespace {

template <class Cell>
void heatmap(std::ostream& out, const std::vector<RunRecord>& records, Cell cell) {
  std::vector<std::pair<int, int>> columns;
  std::map<int, std::map<std::pair<int, int>, std::string>> rows;
  for (const auto& r : records) {
    const std::pair<int, int> key{r.config.k_A, r.config.k_S};
    if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
    rows[r.config.m][key] = cell(r);
  }
  std::sort(columns.begin(), columns.end());
  out << "m";
  for (const auto& [ka, ks] : columns) out << ',' << ka << '/' << ks;
  out << '\n';
  for (const auto& [m, cells] : rows) {
    out << m;
    for (const auto& c : columns) {
      const auto it = cells.find(c);
      out << ',' << (it == cells.end() ? "" : it->second);
    }
    out << '\n';
  }
}

}  // namespace

void aggregate_heatmap(std::ostream& out, const std::vector<RunRecord>& records) {
  heatmap(out, records, [](const RunRecord& r) { return render_q(r); });
}

void aggregate_reduction_rate(std::ostream& out, const std::vector<RunRecord>& records,
                              double eps) {
  heatmap(out, records, [eps](const RunRecord& r) -> std::string {
    const auto q = compute_q(r.residuals);
    if (r.status == RunStatus::diverged || !q) return "-";
    const auto T = compute_T(*q, r.t_iter, eps);
    if (!T) return "-";
    std::ostringstream s;
    s << std::setprecision(4) << 1.0 / *T;
    return s.str();
  });
}

void write_record_header(std::ostream& out) {
  out << "benchmark,levels,dofs,k_A,k_S,m,cycle,diag,dt,iterations,final_residual_ratio,q,"
         "t_iter,T,status\n";
}

void write_record(std::ostream& out, const RunRecord& r, bool include_timing) {
  const auto q = compute_q(r.residuals);
  const double ratio =
      r.residuals.empty() || r.residuals.front() == 0.0 ? 0.0 : r.residuals.back() / r.residuals.front();
  std::ostringstream line;
  line << std::setprecision(6);
  line << r.config.benchmark << ',' << r.config.levels << ',' << r.dofs << ',' << r.config.k_A << ','
       << r.config.k_S << ',' << r.config.m << ',' << r.config.cycle << ',' << r.config.diag << ','
       << r.config.dt << ',' << static_cast<int>(r.residuals.size()) - 1 << ',' << ratio << ','
       << render_q(r, 6) << ',';
  if (include_timing) {
    line << r.t_iter << ',';
    const auto T = q ? compute_T(*q, r.t_iter) : std::nullopt;
    line << (T && r.status != RunStatus::diverged ? std::to_string(*T) : "-");
  } else {
    line << "-,-";
  }
  line << ',' << to_string(r.status) << '\n';
  out << line.str();
}

}  // namespace mfstokes
