#include <goflab/cli/config.hpp>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace goflab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
  const auto t = trim(s);
  if (t.empty()) return false;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

template <typename T>
bool parse_list(const std::string& s, std::vector<T>& out) {
  out.clear();
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    T v{};
    if (!parse_number(item, v)) return false;
    out.push_back(v);
  }
  return !out.empty();
}

}  // namespace

GridConfig parse_config(const std::string& text) {
  GridConfig c;
  std::vector<std::string> problems;
  std::set<std::string> seen;
  bool has_range = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(lineno) +
                         ": expected key = value");
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second)
      problems.push_back("line " + std::to_string(lineno) + ": duplicate key '" +
                         key + "'");
    bool ok = true;
    if (key == "n") ok = parse_number(value, c.n);
    else if (key == "m_list") ok = parse_list(value, c.m_list);
    else if (key == "d_min") { ok = parse_number(value, c.d_min); has_range = true; }
    else if (key == "d_max") { ok = parse_number(value, c.d_max); has_range = true; }
    else if (key == "d_list") ok = parse_list(value, c.d_list);
    else if (key == "G") ok = parse_number(value, c.G);
    else if (key == "sigma2_e_list") ok = parse_list(value, c.sigma2_e_list);
    else if (key == "reps") ok = parse_number(value, c.reps);
    else if (key == "alpha") ok = parse_number(value, c.alpha);
    else if (key == "seed") ok = parse_number(value, c.seed);
    else if (key == "grouping_method") {
      if (value == "balanced") c.grouping_method = GroupingMethod::balanced;
      else if (value == "quantile") c.grouping_method = GroupingMethod::quantile;
      else ok = false;
    } else {
      problems.push_back("line " + std::to_string(lineno) + ": unknown key '" +
                         key + "'");
      continue;
    }
    if (!ok)
      problems.push_back("line " + std::to_string(lineno) + ": bad value '" +
                         value + "' for key '" + key + "'");
  }

  if (c.d_list.empty() && c.d_min > c.d_max)
    problems.push_back("d_min exceeds d_max");
  if (!c.d_list.empty() && has_range)
    problems.push_back("d_list cannot be combined with d_min/d_max");

  if (problems.empty()) {
    for (const auto& s : expand(c)) {
      try {
        validate(s);
      } catch (const Error& e) {
        problems.push_back(std::string("cell m=") + std::to_string(s.m) +
                           " d=" + std::to_string(s.d) + ": " + e.what());
        break;
      }
    }
  }

  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw Error(Errc::invalid_config, msg);
  }
  return c;
}

GridConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::missing_file, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::vector<Scenario> expand(const GridConfig& config) {
  std::vector<int> ds = config.d_list;
  if (ds.empty())
    for (int d = config.d_min; d <= config.d_max; ++d) ds.push_back(d);

  std::vector<Scenario> out;
  for (int m : config.m_list)
    for (double s2 : config.sigma2_e_list)
      for (int d : ds) {
        Scenario s;
        s.n = config.n;
        s.m = m;
        s.d = d;
        s.G = config.G;
        s.sigma2_e = s2;
        s.reps = config.reps;
        s.alpha = config.alpha;
        s.seed = config.seed;
        s.grouping_method = config.grouping_method;
        out.push_back(s);
      }
  return out;
}

}  // namespace goflab::cli
