#include "orlicz/error.hpp"

namespace orlicz {

SchemaError::SchemaError(std::vector<std::string> violations)
    : Error([&] {
          std::string msg = "configuration has " + std::to_string(violations.size()) + " violation(s)";
          for (const auto& v : violations) msg += "\n  - " + v;
          return msg;
      }()),
      violations_(std::move(violations)) {}

}  // namespace orlicz
