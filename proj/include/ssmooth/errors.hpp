#pragma once

#include <stdexcept>
#include <string>

namespace ssmooth {

enum class errc {
  dimension_mismatch,
  kind_mismatch,
  bandwidth_out_of_range,
  nonpositive_bandwidth,
  not_applicable,
  grid_too_short,
  grid_mismatch,
  insufficient_levels,
  empty_cuboid,
  kernel_not_zero_at_boundary,
  dimension_too_high,
  all_skipped,
  empty_stratum,
  zero_pilot_density,
  no_treated_units,
  missing_arm,
  degenerate_signal,
  nonpositive_input,
  invalid_argument,
  io_error,
};

//! Single exception type for the whole library; `code()` identifies the
//! failure class so callers and tests can discriminate without string
//! matching.
class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace ssmooth
