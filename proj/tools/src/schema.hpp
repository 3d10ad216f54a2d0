#pragma once

#include <string>
#include <vector>

#include "mixbound/cli.hpp"

namespace mixbound::cli {

enum class ParamType { count, positive, number, text, flag, count_list, kernel, object };

struct ParamSpec {
  std::string name;
  ParamType type;
  bool required;
  nlohmann::json fallback;
};

std::vector<ParamSpec> schema_for(Command c);

}  // namespace mixbound::cli
