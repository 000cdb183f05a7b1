#include "gaussemp/error.hpp"

namespace gaussemp {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::not_symmetric: return "NotSymmetric";
    case Errc::not_unit_diagonal: return "NotUnitDiagonal";
    case Errc::not_positive_semidefinite: return "NotPositiveSemidefinite";
    case Errc::invalid_parameter: return "InvalidParameter";
    case Errc::factorization_failed: return "FactorizationFailed";
    case Errc::degree_too_large: return "DegreeTooLarge";
    case Errc::range_exceeds_path: return "RangeExceedsPath";
    case Errc::block_exceeds_dimension: return "BlockExceedsDimension";
    case Errc::output_write_failed: return "OutputWriteFailed";
    case Errc::config_error: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace gaussemp
