#pragma once

#include <stdexcept>
#include <string>

namespace pmk {

enum class ErrorCode {
  invalid_input,
  invalid_order,
  invalid_config,
  invalid_weights,
  invalid_volume,
  singular_system,
  rank_deficient,
  degenerate_geometry,
  nonconvergence,
  extrapolation,
  tangent_map,
  coincident_points,
  incompatible_trajectories,
  undefined_ric,
  column_failure,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace pmk
