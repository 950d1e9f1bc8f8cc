#pragma once

#include <string>
#include <vector>

namespace goflab::cli {

enum class Verdict { use_hl, use_ghl, use_ghl_or_both, both_with_caution };

const char* to_string(Verdict v);

struct AdviceInputs {
  long n = 0;
  long m = 0;
  long d = 0;
  long very_large_n_threshold = 10000;
  bool small_model = false;  ///< d <= min(n / 20, m / 2)
  bool clustering = false;   ///< n / m >= 5
  bool very_large_n = false;
};

struct Recommendation {
  Verdict verdict = Verdict::use_hl;
  AdviceInputs inputs;
  std::vector<std::string> rationale;
};

inline constexpr long kDefaultVeryLargeN = 10000;
inline constexpr double kClusteringRatio = 5.0;

/// Walks the HL/GHL decision tree (each question: no -> left, yes -> right).
///
///   small or moderate model?
///     no:  replicates or clusters?  no: HL   yes: both, with caution
///     yes: very large n?
///            yes: GHL
///            no:  replicates or clusters?  no: HL   yes: GHL or both
///
/// `m` is the number of distinct covariate patterns, or an estimated number
/// of clusters when the data has near-replicates only.
Recommendation advise(long n, long m, long d,
                      long very_large_n_threshold = kDefaultVeryLargeN);

}  // namespace goflab::cli
