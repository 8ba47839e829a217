#pragma once

#include <stdexcept>
#include <string>

namespace magicmps {

/// A computation produced internally inconsistent numbers (for example,
/// sampler conditionals that do not sum to one). Distinct from bad input,
/// which is reported with std::invalid_argument / std::out_of_range.
class NumericalFault : public std::runtime_error {
 public:
  explicit NumericalFault(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace magicmps
