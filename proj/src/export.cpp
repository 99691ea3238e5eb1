#include <cstdio>
#include <fstream>
#include <system_error>

#include "pscom/experiments.hpp"

namespace pscom {
namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string summary_csv(const ResultTable& table, const ExportOptions& options) {
  std::string out =
      "scenario_id,method,sweep_param,sweep_value,tau_bps,total_power_w,feasible,outer_candidates,"
      "bisect_iters,wall_ms\n";
  for (const ResultRow& row : table.rows) {
    const SolveReport& r = row.report;
    out += row.scenario_id;
    out += ',' + to_string(r.method);
    out += ',' + (row.sweep_param ? to_string(*row.sweep_param) : std::string("none"));
    out += ',' + (row.sweep_param ? format_number(row.sweep_value) : std::string());
    out += ',' + format_number(r.tau_bps());
    out += ',' + format_number(total_power(r.allocation));
    out += ',' + std::string(r.feasible ? "true" : "false");
    out += ',' + std::to_string(r.outer_candidates_evaluated);
    out += ',' + std::to_string(r.bisection_iterations_total);
    out += ',' + format_number(options.include_timing ? r.wall_ms : 0.0);
    out += '\n';
  }
  return out;
}

std::string detail_csv(const ResultTable& table) {
  std::string out = "scenario_id,method,user_index,gain,eta,p_t_w,p_c_w,rate_bps\n";
  for (const ResultRow& row : table.rows) {
    const Allocation& a = row.report.allocation;
    for (Eigen::Index n = 0; n < a.size(); ++n) {
      out += row.scenario_id;
      out += ',' + to_string(row.report.method);
      out += ',' + std::to_string(n);
      out += ',' + format_number(row.gains[n]);
      out += ',' + format_number(a.eta[n]);
      out += ',' + format_number(a.p_t_w[n]);
      out += ',' + format_number(a.p_c_w[n]);
      out += ',' + format_number(a.rates_bps[n]);
      out += '\n';
    }
  }
  return out;
}

CsvPaths export_csv(const ResultTable& table, const std::filesystem::path& directory,
                    const ExportOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create directory " + directory.string() + ": " + ec.message());
  CsvPaths paths{directory / "summary.csv", directory / "detail.csv"};
  write_file(paths.summary, summary_csv(table, options));
  write_file(paths.detail, detail_csv(table));
  return paths;
}

void emit_plot(const ResultTable& table, const std::filesystem::path& file) {
  const std::string svg = render_svg(table);
  if (file.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + file.parent_path().string() + ": " + ec.message());
  }
  write_file(file, svg);
}

}  // namespace pscom
