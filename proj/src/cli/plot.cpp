#include <goflab/cli/plot.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

namespace goflab::cli {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 130;
constexpr double kTop = 40;
constexpr double kBottom = 55;

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x, y, lo, hi;  // lo/hi empty when there is no band
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Round tick positions covering [lo, hi].
std::vector<double> ticks(double lo, double hi, int target = 6) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (f * mag >= raw) {
      step = f * mag;
      break;
    }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step)
    out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return out;
}

class Chart {
 public:
  Chart(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

  void add(Series s) { series_.push_back(std::move(s)); }
  void hline(double y, double band) {
    hline_ = y;
    hband_ = band;
  }
  void scatter(std::vector<double> x, std::vector<double> y) {
    px_ = std::move(x);
    py_ = std::move(y);
  }

  std::string svg() const {
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin, ymin = xmin, ymax = -xmin;
    auto grow = [&](double x, double y) {
      if (!std::isfinite(x) || !std::isfinite(y)) return;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    };
    for (const auto& s : series_)
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        grow(s.x[i], s.y[i]);
        if (!s.lo.empty()) {
          grow(s.x[i], s.lo[i]);
          grow(s.x[i], s.hi[i]);
        }
      }
    for (std::size_t i = 0; i < px_.size(); ++i) grow(px_[i], py_[i]);
    if (hline_) {
      grow(xmin, *hline_ - hband_);
      grow(xmin, *hline_ + hband_);
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmin -= 1, xmax += 1;
    if (ymax == ymin) ymin -= 1, ymax += 1;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" "
         "font-size=\"14\">" << xml_escape(title_) << "</text>\n";

    for (double t : ticks(xmin, xmax)) {
      o << "<line x1=\"" << sx(t) << "\" y1=\"" << kTop + ph << "\" x2=\"" << sx(t)
        << "\" y2=\"" << kTop + ph + 5 << "\" stroke=\"black\"/>\n";
      o << "<text x=\"" << sx(t) << "\" y=\"" << kTop + ph + 18
        << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
    }
    for (double t : ticks(ymin, ymax)) {
      o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy(t) << "\" x2=\"" << kLeft + pw
        << "\" y2=\"" << sy(t) << "\" stroke=\"#e5e5e5\"/>\n";
      o << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy(t) + 4
        << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
    }
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << xml_escape(xlabel_) << "</text>\n";
    o << "<text transform=\"translate(18," << kTop + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(ylabel_)
      << "</text>\n";

    if (hline_) {
      if (hband_ > 0)
        o << "<rect x=\"" << kLeft << "\" y=\"" << sy(*hline_ + hband_)
          << "\" width=\"" << pw << "\" height=\""
          << sy(*hline_ - hband_) - sy(*hline_ + hband_)
          << "\" fill=\"#999999\" fill-opacity=\"0.15\"/>\n";
      o << "<line x1=\"" << kLeft << "\" y1=\"" << sy(*hline_) << "\" x2=\""
        << kLeft + pw << "\" y2=\"" << sy(*hline_)
        << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
    }

    for (const auto& s : series_) {
      if (!s.lo.empty()) {
        o << "<polygon fill=\"" << s.color << "\" fill-opacity=\"0.18\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
          if (std::isfinite(s.hi[i])) o << sx(s.x[i]) << ',' << sy(s.hi[i]) << ' ';
        for (std::size_t i = s.x.size(); i-- > 0;)
          if (std::isfinite(s.lo[i])) o << sx(s.x[i]) << ',' << sy(s.lo[i]) << ' ';
        o << "\"/>\n";
      }
      o << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.y[i])) o << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
      o << "\"/>\n";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.y[i]))
          o << "<circle cx=\"" << sx(s.x[i]) << "\" cy=\"" << sy(s.y[i])
            << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
    }
    for (std::size_t i = 0; i < px_.size(); ++i)
      o << "<circle cx=\"" << sx(px_[i]) << "\" cy=\"" << sy(py_[i])
        << "\" r=\"2\" fill=\"#2c3e50\" fill-opacity=\"0.6\"/>\n";

    double ly = kTop + 10;
    for (const auto& s : series_) {
      o << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly << "\" x2=\""
        << kLeft + pw + 36 << "\" y2=\"" << ly << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
      o << "<text x=\"" << kLeft + pw + 42 << "\" y=\"" << ly + 4 << "\">"
        << xml_escape(s.label) << "</text>\n";
      ly += 20;
    }
    if (hline_)
      o << "<text x=\"" << kLeft + pw + 12 << "\" y=\"" << ly + 4 << "\">alpha = "
        << num(*hline_) << "</text>\n";
    o << "</svg>\n";
    return o.str();
  }

 private:
  std::string title_, xlabel_, ylabel_;
  std::vector<Series> series_;
  std::optional<double> hline_;
  double hband_ = 0.0;
  std::vector<double> px_, py_;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::missing_file, "cannot write " + path.string());
  out << content;
}

using PanelKey = std::tuple<int, int, int, double>;  // n, m, G, sigma2_e

}  // namespace

std::vector<std::filesystem::path> plot_results(const std::vector<ResultRow>& rows,
                                                const std::filesystem::path& outdir,
                                                const PlotOptions& options) {
  if (rows.empty()) throw Error(Errc::schema, "no result rows to plot");

  std::map<PanelKey, std::vector<const ResultRow*>> panels;
  std::set<int> ns, ms, Gs;
  std::set<double> s2s;
  for (const auto& r : rows) {
    panels[{r.n, r.m, r.G, r.sigma2_e}].push_back(&r);
    ns.insert(r.n);
    ms.insert(r.m);
    Gs.insert(r.G);
    s2s.insert(r.sigma2_e);
  }

  std::filesystem::create_directories(outdir);
  std::ostringstream tidy;
  tidy << "n,m,G,sigma2_e,d,method,metric,value,lo,hi\n";
  std::vector<std::filesystem::path> written;

  struct Metric {
    const char* name;
    const char* ylabel;
  };
  const Metric metrics[] = {{"mean", "Mean of test statistic"},
                            {"var", "Variance of test statistic"},
                            {"rejection", "Estimated type 1 error rate"}};

  for (const auto& [key, panel_rows] : panels) {
    const auto [n, m, G, s2] = key;
    std::string stem = "_m" + std::to_string(m);
    std::string title = "n = " + std::to_string(n) + ", m = " + std::to_string(m);
    if (ns.size() > 1) stem = "_n" + std::to_string(n) + stem;
    if (Gs.size() > 1) stem += "_G" + std::to_string(G);
    title += ", G = " + std::to_string(G);
    if (s2s.size() > 1) {
      stem += "_s2e" + num(s2);
      title += ", sigma2_e = " + num(s2);
    }

    for (const auto& metric : metrics) {
      const std::string mname = metric.name;
      Chart chart(mname + " vs d (" + title + ")", "Number of parameters d",
                  metric.ylabel);
      for (const char* method : {"HL", "GHL"}) {
        std::vector<const ResultRow*> pts;
        for (const auto* r : panel_rows)
          if (r->method == method) pts.push_back(r);
        std::sort(pts.begin(), pts.end(),
                  [](auto* a, auto* b) { return a->d < b->d; });
        Series s;
        s.label = method;
        s.color = std::string(method) == "HL" ? "#c0392b" : "#2471a3";
        const bool band = mname != "var" ||
                          std::all_of(pts.begin(), pts.end(),
                                      [](auto* r) { return r->has_var_ci; });
        for (const auto* r : pts) {
          double v = r->mean, lo = r->mean_ci_lo, hi = r->mean_ci_hi;
          if (mname == "var") v = r->var, lo = r->var_ci_lo, hi = r->var_ci_hi;
          if (mname == "rejection")
            v = r->rejection, lo = r->rej_ci_lo, hi = r->rej_ci_hi;
          s.x.push_back(r->d);
          s.y.push_back(v);
          if (band) {
            s.lo.push_back(lo);
            s.hi.push_back(hi);
          }
          tidy << n << ',' << m << ',' << G << ',' << num(s2) << ',' << r->d
               << ',' << method << ',' << mname << ',' << v << ','
               << (band ? num(lo) : "") << ',' << (band ? num(hi) : "") << '\n';
        }
        chart.add(std::move(s));
      }
      if (mname == "rejection") chart.hline(options.alpha, options.alpha_band);
      const auto path = outdir / (mname + stem + ".svg");
      write_file(path, chart.svg());
      written.push_back(path);
    }
  }
  write_file(outdir / "plot_data.csv", tidy.str());
  return written;
}

void plot_covariate_scatter(const Dataset& data, const std::filesystem::path& path) {
  if (data.d() < 3)
    throw Error(Errc::domain, "scatter needs at least two covariates");
  Chart chart("First two covariates (n = " + std::to_string(data.n()) + ")",
              data.names.size() > 0 ? data.names[0] : "x1",
              data.names.size() > 1 ? data.names[1] : "x2");
  std::vector<double> x(static_cast<std::size_t>(data.n()));
  std::vector<double> y(x.size());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    x[static_cast<std::size_t>(i)] = data.X(i, 1);
    y[static_cast<std::size_t>(i)] = data.X(i, 2);
  }
  chart.scatter(std::move(x), std::move(y));
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_file(path, chart.svg());
}

}  // namespace goflab::cli
