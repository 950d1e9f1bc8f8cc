#include <goflab/cli/results.hpp>
#include <goflab/hl.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace goflab::cli {

namespace {

std::string g6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string full(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void write_row(std::ostream& out, const SimSummary& cell, TestMethod method,
               bool long_format) {
  const auto& s = cell.scenario;
  const bool ok = !cell.error;
  const McSummary& mc = method == TestMethod::hl ? cell.hl : cell.ghl;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto val = [&](double v) { return ok ? v : nan; };

  out << s.n << ',' << s.m << ',' << s.d << ',' << s.G << ','
      << g6(s.sigma2_e) << ',' << s.reps << ',' << cell.failures << ','
      << to_string(method) << ',' << g6(val(mc.mean)) << ','
      << g6(val(mc.variance)) << ',' << g6(val(mc.rejection_rate)) << ','
      << g6(val(mc.mean_ci.lo)) << ',' << g6(val(mc.mean_ci.hi)) << ','
      << g6(val(mc.rejection_ci.lo)) << ',' << g6(val(mc.rejection_ci.hi))
      << ',' << s.seed;
  if (long_format) {
    std::string error = cell.error.value_or("");
    for (char& c : error)
      if (c == ',' || c == '\n') c = ';';
    out << ',' << full(val(mc.mean)) << ',' << full(val(mc.variance)) << ','
        << full(val(mc.rejection_rate)) << ',' << full(val(mc.variance_ci.lo))
        << ',' << full(val(mc.variance_ci.hi)) << ','
        << full(val(cell.mean_sigma_diag)) << ','
        << full(method == TestMethod::hl ? val(double(s.G - 2))
                                         : val(cell.mean_ghl_df))
        << ','
        << (s.grouping_method == GroupingMethod::balanced ? "balanced"
                                                          : "quantile")
        << ',' << error;
  }
  out << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T number(const std::string& s, std::size_t row, const char* column) {
  T v{};
  if (s == "nan" && std::numeric_limits<T>::has_quiet_NaN)
    return std::numeric_limits<T>::quiet_NaN();
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(Errc::schema, "results row " + std::to_string(row) +
                                  ": bad value '" + s + "' in column " +
                                  column);
  return v;
}

}  // namespace

void write_results(std::ostream& out, const std::vector<SimSummary>& cells,
                   bool long_format) {
  out << kResultsHeader;
  if (long_format) out << ',' << kLongColumns;
  out << '\n';
  for (const auto& cell : cells) {
    write_row(out, cell, TestMethod::hl, long_format);
    write_row(out, cell, TestMethod::ghl, long_format);
  }
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::missing_file, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw Error(Errc::schema, path.string() + ": empty results file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind(kResultsHeader, 0) != 0)
    throw Error(Errc::schema,
                path.string() + ": header does not match the results schema");
  const auto header = split(line);
  std::size_t var_lo = 0;
  std::size_t var_hi = 0;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == "var_ci_lo") var_lo = j;
    if (header[j] == "var_ci_hi") var_hi = j;
  }

  std::vector<ResultRow> rows;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != header.size())
      throw Error(Errc::schema, path.string() + ": row " + std::to_string(row) +
                                    " has " + std::to_string(f.size()) +
                                    " fields, expected " +
                                    std::to_string(header.size()));
    ResultRow r;
    r.n = number<int>(f[0], row, "n");
    r.m = number<int>(f[1], row, "m");
    r.d = number<int>(f[2], row, "d");
    r.G = number<int>(f[3], row, "G");
    r.sigma2_e = number<double>(f[4], row, "sigma2_e");
    r.reps = number<int>(f[5], row, "reps");
    r.failures = number<int>(f[6], row, "failures");
    r.method = f[7];
    if (r.method != "HL" && r.method != "GHL")
      throw Error(Errc::schema, path.string() + ": row " + std::to_string(row) +
                                    ": unknown method '" + r.method + "'");
    r.mean = number<double>(f[8], row, "mean");
    r.var = number<double>(f[9], row, "var");
    r.rejection = number<double>(f[10], row, "rejection");
    r.mean_ci_lo = number<double>(f[11], row, "mean_ci_lo");
    r.mean_ci_hi = number<double>(f[12], row, "mean_ci_hi");
    r.rej_ci_lo = number<double>(f[13], row, "rej_ci_lo");
    r.rej_ci_hi = number<double>(f[14], row, "rej_ci_hi");
    r.seed = f[15];
    if (var_lo && var_hi) {
      r.has_var_ci = true;
      r.var_ci_lo = number<double>(f[var_lo], row, "var_ci_lo");
      r.var_ci_hi = number<double>(f[var_hi], row, "var_ci_hi");
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty())
    throw Error(Errc::schema, path.string() + ": no result rows");
  return rows;
}

}  // namespace goflab::cli
