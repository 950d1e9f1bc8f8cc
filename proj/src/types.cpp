#include <goflab/types.hpp>

namespace goflab {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::missing_file: return "missing file";
    case Errc::parse: return "parse error";
    case Errc::non_binary_response: return "non-binary response";
    case Errc::non_numeric: return "non-numeric value";
    case Errc::too_few_rows: return "too few rows";
    case Errc::rank_deficient: return "rank-deficient design";
    case Errc::separation: return "separation";
    case Errc::no_convergence: return "no convergence";
    case Errc::degenerate_grouping: return "degenerate grouping";
    case Errc::vanishing_denominator: return "vanishing denominator";
    case Errc::degenerate_test: return "degenerate test";
    case Errc::non_symmetric: return "non-symmetric matrix";
    case Errc::domain: return "domain error";
    case Errc::invalid_config: return "invalid config";
    case Errc::schema: return "schema mismatch";
    case Errc::simulation_failed: return "simulation failed";
  }
  return "unknown";
}

}  // namespace goflab
