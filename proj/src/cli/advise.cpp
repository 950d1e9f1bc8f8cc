#include <goflab/cli/advise.hpp>
#include <goflab/types.hpp>

#include <algorithm>
#include <sstream>

namespace goflab::cli {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::use_hl: return "USE_HL";
    case Verdict::use_ghl: return "USE_GHL";
    case Verdict::use_ghl_or_both: return "USE_GHL_OR_BOTH";
    case Verdict::both_with_caution: return "BOTH_WITH_CAUTION";
  }
  return "?";
}

Recommendation advise(long n, long m, long d, long very_large_n_threshold) {
  if (m < 1 || n < m || d < 1)
    throw Error(Errc::domain, "advise requires n >= m >= 1 and d >= 1");

  Recommendation rec;
  auto& in = rec.inputs;
  in.n = n;
  in.m = m;
  in.d = d;
  in.very_large_n_threshold = very_large_n_threshold;

  const double limit = std::min(double(n) / 20.0, double(m) / 2.0);
  const double ratio = double(n) / double(m);
  in.small_model = double(d) <= limit;
  in.clustering = ratio >= kClusteringRatio;
  in.very_large_n = n >= very_large_n_threshold;

  auto say = [&](auto&&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    rec.rationale.push_back(os.str());
  };

  say("small or moderate model? d = ", d, (in.small_model ? " <= " : " > "),
      "min(n/20, m/2) = ", limit, " -> ", in.small_model ? "yes" : "no");
  if (!in.small_model) {
    say("replicates or clusters? n/m = ", ratio,
        (in.clustering ? " >= 5" : " < 5"), " -> ",
        in.clustering ? "yes" : "no");
    rec.verdict = in.clustering ? Verdict::both_with_caution : Verdict::use_hl;
  } else {
    say("very large n? n = ", n, (in.very_large_n ? " >= " : " < "),
        very_large_n_threshold, " -> ", in.very_large_n ? "yes" : "no");
    if (in.very_large_n) {
      rec.verdict = Verdict::use_ghl;
    } else {
      say("replicates or clusters? n/m = ", ratio,
          (in.clustering ? " >= 5" : " < 5"), " -> ",
          in.clustering ? "yes" : "no");
      rec.verdict = in.clustering ? Verdict::use_ghl_or_both : Verdict::use_hl;
    }
  }
  say("verdict: ", to_string(rec.verdict));
  if (d > 25)
    say("note: d > 25 lies outside the range these guidelines were "
        "calibrated on (G = 10, d up to about 25); treat as extrapolation");
  return rec;
}

}  // namespace goflab::cli
