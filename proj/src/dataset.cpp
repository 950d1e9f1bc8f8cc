#include <goflab/dataset.hpp>

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace goflab {

void validate(const Dataset& data) {
  const auto n = data.X.rows();
  const auto d = data.X.cols();
  if (data.y.size() != n)
    throw Error(Errc::domain, "response length does not match design rows");
  if (d < 1) throw Error(Errc::domain, "design has no columns");
  if (n < d)
    throw Error(Errc::too_few_rows, "n = " + std::to_string(n) +
                                        " is smaller than d = " +
                                        std::to_string(d));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (data.y(i) != 0.0 && data.y(i) != 1.0)
      throw Error(Errc::non_binary_response,
                  "non-binary response at row " + std::to_string(i + 1));
    if (data.X(i, 0) != 1.0)
      throw Error(Errc::domain,
                  "intercept column is not 1 at row " + std::to_string(i + 1));
  }
  if (!data.X.allFinite())
    throw Error(Errc::domain, "design contains non-finite values");
}

Dataset make_dataset(VectorXd y, const MatrixXd& covariates,
                     std::vector<std::string> names) {
  Dataset data;
  data.y = std::move(y);
  data.X.resize(covariates.rows(), covariates.cols() + 1);
  data.X.col(0).setOnes();
  data.X.rightCols(covariates.cols()) = covariates;
  if (names.empty())
    for (Eigen::Index j = 0; j < covariates.cols(); ++j)
      names.push_back("x" + std::to_string(j + 1));
  data.names = std::move(names);
  validate(data);
  return data;
}

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, delim)) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' '))
      field.pop_back();
    std::size_t start = field.find_first_not_of(' ');
    out.push_back(start == std::string::npos ? "" : field.substr(start));
  }
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path,
                     const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::missing_file, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line))
    throw Error(Errc::parse, path.string() + ": missing header row");
  auto header = split(line, options.delimiter);
  Eigen::Index response_col = -1;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == options.response && response_col < 0)
      response_col = static_cast<Eigen::Index>(j);
    else
      names.push_back(header[j]);
  }
  if (response_col < 0)
    throw Error(Errc::parse, path.string() + ": no response column '" +
                                 options.response + "' in header");

  std::vector<double> ys;
  std::vector<double> xs;
  const std::size_t width = header.size();
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto fields = split(line, options.delimiter);
    if (fields.size() != width)
      throw Error(Errc::parse, path.string() + ": row " + std::to_string(row) +
                                   " has " + std::to_string(fields.size()) +
                                   " fields, expected " +
                                   std::to_string(width));
    for (std::size_t j = 0; j < width; ++j) {
      double v = 0.0;
      if (!parse_double(fields[j], v))
        throw Error(Errc::non_numeric,
                    path.string() + ": row " + std::to_string(row) +
                        ", column '" + header[j] + "': cannot parse '" +
                        fields[j] + "'");
      if (static_cast<Eigen::Index>(j) == response_col) {
        if (v != 0.0 && v != 1.0)
          throw Error(Errc::non_binary_response,
                      path.string() + ": row " + std::to_string(row) +
                          ": non-binary response " + fields[j]);
        ys.push_back(v);
      } else {
        xs.push_back(v);
      }
    }
  }

  const auto n = static_cast<Eigen::Index>(ys.size());
  const auto p = static_cast<Eigen::Index>(names.size());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      cov(xs.data(), n, p);

  bool prepend = true;
  switch (options.intercept) {
    case InterceptMode::always: prepend = true; break;
    case InterceptMode::never: prepend = false; break;
    case InterceptMode::automatic:
      prepend = !(p > 0 && n > 0 && (cov.col(0).array() == 1.0).all());
      break;
  }

  Dataset data;
  data.y = Eigen::Map<const VectorXd>(ys.data(), n);
  if (prepend) {
    data.X.resize(n, p + 1);
    data.X.col(0).setOnes();
    data.X.rightCols(p) = cov;
    data.names = std::move(names);
  } else {
    data.X = cov;
    data.names.assign(names.begin() + (p > 0 ? 1 : 0), names.end());
  }
  validate(data);
  return data;
}

void save_dataset(const std::filesystem::path& path, const Dataset& data,
                  char delimiter) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::missing_file, "cannot write " + path.string());
  out << "y";
  for (Eigen::Index j = 1; j < data.d(); ++j) {
    out << delimiter;
    if (static_cast<std::size_t>(j - 1) < data.names.size())
      out << data.names[j - 1];
    else
      out << "x" << j;
  }
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    out << static_cast<int>(data.y(i));
    for (Eigen::Index j = 1; j < data.d(); ++j) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, data.X(i, j));
      out << delimiter << std::string_view(buf, end - buf);
    }
    out << '\n';
  }
}

EvpSummary aggregate_evps(const Dataset& data) {
  const auto n = data.n();
  const auto p = data.d() - 1;

  // Keyed by the raw bit patterns so that -0.0 and 0.0 stay distinct.
  std::map<std::vector<std::uint64_t>, Eigen::Index> index;
  EvpSummary out;
  out.evp_of_row.resize(static_cast<std::size_t>(n));
  std::vector<std::uint64_t> key(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      double v = data.X(i, j + 1);
      std::memcpy(&key[static_cast<std::size_t>(j)], &v, sizeof v);
    }
    auto [it, inserted] =
        index.emplace(key, static_cast<Eigen::Index>(out.trials.size()));
    if (inserted) {
      out.trials.push_back(0);
      out.successes.push_back(0);
      out.representative.push_back(i);
    }
    auto e = static_cast<std::size_t>(it->second);
    out.trials[e] += 1;
    out.successes[e] += data.y(i) == 1.0 ? 1 : 0;
    out.evp_of_row[static_cast<std::size_t>(i)] = it->second;
  }
  out.m = static_cast<Eigen::Index>(out.trials.size());
  out.replication_ratio =
      out.m > 0 ? static_cast<double>(n) / static_cast<double>(out.m) : 0.0;
  return out;
}

}  // namespace goflab
