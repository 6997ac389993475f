#pragma once

// A complete problem instance: the economy, the operator triple, optionally a
// planted equilibrium and generation metadata.

#include <cstdint>
#include <optional>
#include <string>

#include "npce/operators.hpp"
#include "npce/vi_core.hpp"

namespace npce {

struct InstanceMeta {
  std::optional<std::uint64_t> seed;
  std::string generator_version;
  std::string notes;
};

struct Instance {
  Economy eco;
  OperatorTriple ops;
  std::optional<Point> planted;
  InstanceMeta meta;
};

}  // namespace npce
