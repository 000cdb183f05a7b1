#pragma once

#include <stdexcept>
#include <string>

namespace gaussemp {

enum class Errc {
  not_symmetric,
  not_unit_diagonal,
  not_positive_semidefinite,
  invalid_parameter,
  factorization_failed,
  degree_too_large,
  range_exceeds_path,
  block_exceeds_dimension,
  output_write_failed,
  config_error,
};

const char* to_string(Errc code) noexcept;

/// Exception carrying one of the library error codes.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace gaussemp
