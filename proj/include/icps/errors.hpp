#pragma once

#include <stdexcept>
#include <string>

namespace icps {

// Thrown when two supposedly-equivalent computation routes disagree beyond
// tolerance, or when an iterative kernel fails to converge. Distinct from
// std::invalid_argument (bad inputs) so callers can map the two failure
// classes to different exit codes.
class consistency_error : public std::runtime_error {
 public:
  explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace icps
