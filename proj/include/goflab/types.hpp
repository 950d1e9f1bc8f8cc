#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace goflab {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;
using Labels = Eigen::VectorXi;

enum class Errc {
  missing_file,
  parse,
  non_binary_response,
  non_numeric,
  too_few_rows,
  rank_deficient,
  separation,
  no_convergence,
  degenerate_grouping,
  vanishing_denominator,
  degenerate_test,
  non_symmetric,
  domain,
  invalid_config,
  schema,
  simulation_failed,
};

const char* to_string(Errc code) noexcept;

// Input-side failures (bad files, bad arguments) vs. numerical failures on
// otherwise valid input. The CLI maps these onto exit codes 2 and 1.
constexpr bool is_input_error(Errc code) noexcept {
  switch (code) {
    case Errc::missing_file:
    case Errc::parse:
    case Errc::non_binary_response:
    case Errc::non_numeric:
    case Errc::too_few_rows:
    case Errc::domain:
    case Errc::invalid_config:
    case Errc::schema:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace goflab
