#pragma once
#include <stdexcept>
#include <string>
#include <string_view>

namespace sadt {

// Every failure the library can diagnose, so callers (and the CLI) can map
// outcomes to exit codes without string-matching messages.
enum class errc {
  not_square,
  negative_entry,
  row_sum_violation,
  dimension_mismatch,
  multiple_recurrent_classes,
  periodic_recurrent_class,
  not_irreducible,
  rank_warning,
  cap_exceeded,
  eps_out_of_range,
  nonpositive_argument,
  bad_breakpoints,
  out_of_range,
  bad_input,
};

std::string_view errc_name(errc c);

class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

}  // namespace sadt
